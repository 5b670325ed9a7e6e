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

#ifndef SFL_LEDGER_LEDGER_H_
#define SFL_LEDGER_LEDGER_H_

#include <cstddef>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfl/common/error.h"
#include "sfl/ledger/chain.h"

namespace sfl::ledger {

struct Receipt {
  bool accepted = false;
  // Accepted but will not fit into the next mined block.
  bool deferred = false;
  std::optional<ErrorCode> error;
  std::string reason;
};

struct Escrow {
  WalletAddress depositor;
  Tokens initial = 0;
  Tokens balance = 0;
  std::vector<std::pair<WalletAddress, Tokens>> payouts;
  Tokens refunded = 0;
};

using EscrowId = std::size_t;

// Simulated chain plus account state. Transactions from any thread are
// serialized through one pending queue; blocks pack that queue in FIFO order
// up to the block gas limit. Balances are integer tokens and every transfer
// is conservative: Σ balances + Σ escrow balances never changes after the
// accounts are created.
class Ledger {
 public:
  explicit Ledger(Gas block_gas_limit = gas::kDefaultBlockLimit);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  Gas gas_limit() const { return gas_limit_; }

  // Genesis allocation. Throws kInvalidArgument for duplicates or negative
  // balances.
  void CreateAccount(const WalletAddress& address, Tokens initial_balance);
  bool HasAccount(const WalletAddress& address) const;
  // Throws kUnknownSender for an unregistered address.
  Tokens Balance(const WalletAddress& address) const;

  // Why `tx` would be rejected, or nullopt if it would be accepted.
  std::optional<ErrorCode> CheckTx(const Transaction& tx) const;
  // kGasExhausted if the tx alone exceeds the block limit; kUnknownSender if
  // the sender has no account. Otherwise queued.
  Receipt SubmitTx(const Transaction& tx);
  std::size_t pending_count() const;

  // Appends a block holding the longest FIFO prefix of pending transactions
  // that fits the gas limit. Empty blocks are allowed.
  const Block& MineBlock();
  // Mines until the queue is empty; returns the number of blocks mined.
  std::size_t MineAll();

  std::span<const Block> chain() const { return chain_; }
  // Hash of the last block, or all zeros for an empty chain.
  Digest TipHash() const;

  // Throws kInvalidArgument for amount <= 0, kUnknownSender, and
  // kInsufficientFunds when the depositor cannot cover it.
  EscrowId DepositEscrow(const WalletAddress& from, Tokens amount);
  // Throws kInsufficientEscrow when the escrow cannot cover `amount`.
  void Payout(EscrowId id, const WalletAddress& to, Tokens amount);
  // Returns whatever is left in the escrow to its depositor.
  Tokens Refund(EscrowId id);
  const Escrow& escrow(EscrowId id) const;

  // Tokens minted at account creation.
  Tokens TotalSupply() const { return total_supply_; }
  // Σ wallet balances + Σ escrow balances; equals TotalSupply().
  Tokens CirculatingTotal() const;

 private:
  Escrow& MutableEscrow(EscrowId id);

  Gas gas_limit_;
  mutable std::mutex mu_;
  std::map<WalletAddress, Tokens> balances_;
  std::vector<Escrow> escrows_;
  std::deque<Transaction> pending_;
  std::vector<Block> chain_;
  Tokens total_supply_ = 0;
};

}  // namespace sfl::ledger

#endif  // SFL_LEDGER_LEDGER_H_
