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

#include "sfl/ledger/chain.h"

#include <algorithm>
#include <cstring>

#include "sfl/common/error.h"

namespace sfl::ledger {

WalletAddress WalletAddress::Derive(std::uint64_t run_seed, std::string_view role,
                                    std::uint64_t index) {
  ByteWriter w;
  w.U64(run_seed).String(role).U64(index);
  Digest d = w.Hash();
  WalletAddress addr;
  std::copy_n(d.begin(), addr.bytes.size(), addr.bytes.begin());
  return addr;
}

WalletAddress WalletAddress::FromHex(std::string_view hex) {
  auto raw = sfl::FromHex(hex);
  Require(raw.size() == 20, ErrorCode::kParse, "wallet address must be 40 hex chars");
  WalletAddress addr;
  std::memcpy(addr.bytes.data(), raw.data(), raw.size());
  return addr;
}

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "Deploy", "Init", "Submit", "Disclose", "Evaluate", "Aggregate", "Finalize", "Post"};

}  // namespace

std::string_view TxKindName(TxKind kind) {
  return kKindNames.at(static_cast<std::size_t>(kind));
}

std::optional<TxKind> TxKindFromName(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<TxKind>(i);
  }
  return std::nullopt;
}

Digest Transaction::Hash() const {
  ByteWriter w;
  w.U64(static_cast<std::uint64_t>(kind))
      .Raw(sender.bytes)
      .Raw(payload_hash)
      .U64(gas_used)
      .U64(round);
  return w.Hash();
}

Digest Block::ComputeHash() const {
  ByteWriter w;
  w.U64(height).Raw(parent_hash);
  for (const auto& tx : txs) w.Raw(tx.Hash());
  return w.Hash();
}

Gas Block::GasUsed() const {
  Gas total = 0;
  for (const auto& tx : txs) total += tx.gas_used;
  return total;
}

bool VerifyChain(std::span<const Block> chain, std::string* why) {
  auto fail = [why](std::string message) {
    if (why != nullptr) *why = std::move(message);
    return false;
  };
  Digest expected_parent{};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Block& b = chain[i];
    const std::string where = "block " + std::to_string(i);
    if (b.height != i) return fail(where + ": height " + std::to_string(b.height));
    if (b.parent_hash != expected_parent) return fail(where + ": parent hash mismatch");
    if (b.ComputeHash() != b.block_hash) return fail(where + ": block hash mismatch");
    if (b.GasUsed() > b.gas_limit) return fail(where + ": gas over limit");
    for (const auto& tx : b.txs) {
      if (tx.gas_used > b.gas_limit) return fail(where + ": transaction gas over limit");
    }
    expected_parent = b.block_hash;
  }
  return true;
}

}  // namespace sfl::ledger
