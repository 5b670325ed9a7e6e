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

#ifndef SFL_LEDGER_CHAIN_H_
#define SFL_LEDGER_CHAIN_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfl/common/digest.h"

namespace sfl::ledger {

using Tokens = std::int64_t;
using Gas = std::uint64_t;

struct WalletAddress {
  std::array<std::uint8_t, 20> bytes{};

  // First 20 bytes of SHA-256(u64 seed || role || u64 index).
  static WalletAddress Derive(std::uint64_t run_seed, std::string_view role,
                              std::uint64_t index);
  static WalletAddress FromHex(std::string_view hex);
  std::string Hex() const { return ToHex(bytes); }

  auto operator<=>(const WalletAddress&) const = default;
};

enum class TxKind : std::uint8_t {
  kDeploy = 0,
  kInit,
  kSubmit,
  kDisclose,
  kEvaluate,
  kAggregate,
  kFinalize,
  kPost,
};

std::string_view TxKindName(TxKind kind);
std::optional<TxKind> TxKindFromName(std::string_view name);

// Fixed gas schedule, in gas units.
namespace gas {
inline constexpr Gas kDeploy = 500;
inline constexpr Gas kInit = 100;
inline constexpr Gas kDisclose = 200;
inline constexpr Gas kEvaluatePerModel = 300;
inline constexpr Gas kFinalize = 50;
inline constexpr Gas kPost = 20;
inline constexpr Gas kDefaultBlockLimit = 100'000;
inline constexpr Gas Submit(std::size_t param_count) { return 50 + param_count / 100; }
inline constexpr Gas Aggregate(std::size_t param_count) { return 100 + param_count / 100; }
inline constexpr Gas Evaluate(std::size_t models) { return kEvaluatePerModel * models; }
}  // namespace gas

struct Transaction {
  TxKind kind = TxKind::kDeploy;
  WalletAddress sender;
  Digest payload_hash{};
  Gas gas_used = 0;
  std::uint64_t round = 0;

  // SHA-256 over u64 kind, sender, payload_hash, u64 gas_used, u64 round.
  Digest Hash() const;

  bool operator==(const Transaction&) const = default;
};

struct Block {
  std::uint64_t height = 0;
  Digest parent_hash{};
  std::vector<Transaction> txs;
  Digest block_hash{};
  Gas gas_limit = gas::kDefaultBlockLimit;

  // SHA-256 over u64 height, parent_hash and the concatenated tx hashes.
  Digest ComputeHash() const;
  Gas GasUsed() const;

  bool operator==(const Block&) const = default;
};

// Checks every block hash, parent link, height sequence and gas bound.
// On failure returns false and, if `why` is set, a description.
bool VerifyChain(std::span<const Block> chain, std::string* why = nullptr);

}  // namespace sfl::ledger

#endif  // SFL_LEDGER_CHAIN_H_
