// Copyright 2026 The SFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sfl/ledger/dump.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sfl/common/error.h"

namespace sfl::ledger {

using nlohmann::json;

namespace {

constexpr char kFormat[] = "sfl-ledger-v1";

json TxToJson(const Transaction& tx) {
  return json{{"kind", std::string(TxKindName(tx.kind))},
              {"sender", tx.sender.Hex()},
              {"payload_hash", ToHex(tx.payload_hash)},
              {"gas_used", tx.gas_used},
              {"round", tx.round},
              {"tx_hash", ToHex(tx.Hash())}};
}

}  // namespace

std::string SerializeChain(std::span<const Block> chain) {
  json blocks = json::array();
  for (const Block& b : chain) {
    json txs = json::array();
    for (const auto& tx : b.txs) txs.push_back(TxToJson(tx));
    blocks.push_back(json{{"height", b.height},
                          {"parent_hash", ToHex(b.parent_hash)},
                          {"block_hash", ToHex(b.block_hash)},
                          {"gas_limit", b.gas_limit},
                          {"gas_used", b.GasUsed()},
                          {"txs", std::move(txs)}});
  }
  json doc{{"format", kFormat},
           {"block_count", chain.size()},
           {"tip_hash", chain.empty() ? ToHex(Digest{}) : ToHex(chain.back().block_hash)},
           {"blocks", std::move(blocks)}};
  return doc.dump(1) + "\n";
}

namespace {

std::vector<Block> ParseChainImpl(const std::string& text,
                                  std::vector<std::vector<Digest>>* stored_tx_hashes) {
  try {
    json doc = json::parse(text);
    Require(doc.at("format").get<std::string>() == kFormat, ErrorCode::kParse,
            "unexpected ledger dump format");
    std::vector<Block> chain;
    for (const auto& jb : doc.at("blocks")) {
      Block b;
      b.height = jb.at("height").get<std::uint64_t>();
      b.parent_hash = DigestFromHex(jb.at("parent_hash").get<std::string>());
      b.block_hash = DigestFromHex(jb.at("block_hash").get<std::string>());
      b.gas_limit = jb.at("gas_limit").get<Gas>();
      std::vector<Digest> hashes;
      for (const auto& jt : jb.at("txs")) {
        Transaction tx;
        auto kind = TxKindFromName(jt.at("kind").get<std::string>());
        Require(kind.has_value(), ErrorCode::kParse, "unknown transaction kind");
        tx.kind = *kind;
        tx.sender = WalletAddress::FromHex(jt.at("sender").get<std::string>());
        tx.payload_hash = DigestFromHex(jt.at("payload_hash").get<std::string>());
        tx.gas_used = jt.at("gas_used").get<Gas>();
        tx.round = jt.at("round").get<std::uint64_t>();
        hashes.push_back(DigestFromHex(jt.at("tx_hash").get<std::string>()));
        b.txs.push_back(tx);
      }
      if (stored_tx_hashes != nullptr) stored_tx_hashes->push_back(std::move(hashes));
      chain.push_back(std::move(b));
    }
    Require(doc.at("block_count").get<std::size_t>() == chain.size(), ErrorCode::kParse,
            "block_count does not match the block list");
    return chain;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed ledger dump: ") + e.what());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<Block> ParseChain(const std::string& text) { return ParseChainImpl(text, nullptr); }

void WriteLedgerDump(const std::filesystem::path& path, std::span<const Block> chain) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out << SerializeChain(chain);
  Require(out.good(), ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<Block> ReadLedgerDump(const std::filesystem::path& path) {
  return ParseChain(ReadFile(path));
}

DumpVerification VerifyLedgerDump(const std::filesystem::path& path) {
  DumpVerification result;
  std::vector<std::vector<Digest>> stored;
  std::vector<Block> chain;
  try {
    chain = ParseChainImpl(ReadFile(path), &stored);
  } catch (const Error& e) {
    result.message = e.what();
    return result;
  }
  result.blocks = chain.size();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = 0; j < chain[i].txs.size(); ++j) {
      ++result.transactions;
      if (chain[i].txs[j].Hash() != stored[i][j]) {
        result.message = "block " + std::to_string(i) + " tx " + std::to_string(j) +
                         ": transaction hash mismatch";
        return result;
      }
    }
  }
  std::string why;
  if (!VerifyChain(chain, &why)) {
    result.message = why;
    return result;
  }
  result.ok = true;
  result.message = "ok";
  return result;
}

}  // namespace sfl::ledger
