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

// Ledger dump: a JSON document
//
//   {"format": "sfl-ledger-v1", "block_count": N, "tip_hash": "<hex>",
//    "blocks": [{"height", "parent_hash", "block_hash", "gas_limit",
//                "gas_used", "txs": [{"kind", "sender", "payload_hash",
//                                     "gas_used", "round", "tx_hash"}]}]}
//
// with every digest and address hex-encoded.

#ifndef SFL_LEDGER_DUMP_H_
#define SFL_LEDGER_DUMP_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sfl/ledger/chain.h"

namespace sfl::ledger {

std::string SerializeChain(std::span<const Block> chain);
// Throws kParse on malformed documents. Stored tx/block hashes are kept as
// written so that verification can detect tampering.
std::vector<Block> ParseChain(const std::string& text);

void WriteLedgerDump(const std::filesystem::path& path, std::span<const Block> chain);
std::vector<Block> ReadLedgerDump(const std::filesystem::path& path);

struct DumpVerification {
  bool ok = false;
  std::size_t blocks = 0;
  std::size_t transactions = 0;
  std::string message;
};

// Parses the dump, recomputes every tx hash against the stored "tx_hash",
// then replays the chain through VerifyChain.
DumpVerification VerifyLedgerDump(const std::filesystem::path& path);

}  // namespace sfl::ledger

#endif  // SFL_LEDGER_DUMP_H_
