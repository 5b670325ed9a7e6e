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

#include "sfl/ledger/ledger.h"

namespace sfl::ledger {

Ledger::Ledger(Gas block_gas_limit) : gas_limit_(block_gas_limit) {
  Require(block_gas_limit > 0, ErrorCode::kInvalidArgument, "block gas limit must be positive");
}

void Ledger::CreateAccount(const WalletAddress& address, Tokens initial_balance) {
  std::lock_guard lock(mu_);
  Require(initial_balance >= 0, ErrorCode::kInvalidArgument, "negative opening balance");
  Require(!balances_.contains(address), ErrorCode::kInvalidArgument,
          "account " + address.Hex() + " already exists");
  balances_.emplace(address, initial_balance);
  total_supply_ += initial_balance;
}

bool Ledger::HasAccount(const WalletAddress& address) const {
  std::lock_guard lock(mu_);
  return balances_.contains(address);
}

Tokens Ledger::Balance(const WalletAddress& address) const {
  std::lock_guard lock(mu_);
  auto it = balances_.find(address);
  Require(it != balances_.end(), ErrorCode::kUnknownSender, "no account " + address.Hex());
  return it->second;
}

std::optional<ErrorCode> Ledger::CheckTx(const Transaction& tx) const {
  std::lock_guard lock(mu_);
  if (tx.gas_used > gas_limit_) return ErrorCode::kGasExhausted;
  if (!balances_.contains(tx.sender)) return ErrorCode::kUnknownSender;
  return std::nullopt;
}

Receipt Ledger::SubmitTx(const Transaction& tx) {
  if (auto err = CheckTx(tx)) {
    std::string reason = *err == ErrorCode::kGasExhausted
                             ? "gas " + std::to_string(tx.gas_used) + " exceeds block limit " +
                                   std::to_string(gas_limit_)
                             : "unknown sender " + tx.sender.Hex();
    return Receipt{false, false, err, std::move(reason)};
  }
  std::lock_guard lock(mu_);
  // Would the FIFO packer reach this tx in the next block?
  Gas ahead = 0;
  bool deferred = false;
  for (const auto& p : pending_) {
    if (ahead + p.gas_used > gas_limit_) {
      deferred = true;
      break;
    }
    ahead += p.gas_used;
  }
  deferred = deferred || ahead + tx.gas_used > gas_limit_;
  pending_.push_back(tx);
  return Receipt{true, deferred, std::nullopt, deferred ? "deferred" : "queued"};
}

std::size_t Ledger::pending_count() const {
  std::lock_guard lock(mu_);
  return pending_.size();
}

const Block& Ledger::MineBlock() {
  std::lock_guard lock(mu_);
  Block block;
  block.height = chain_.size();
  block.parent_hash = chain_.empty() ? Digest{} : chain_.back().block_hash;
  block.gas_limit = gas_limit_;
  Gas used = 0;
  while (!pending_.empty() && used + pending_.front().gas_used <= gas_limit_) {
    used += pending_.front().gas_used;
    block.txs.push_back(pending_.front());
    pending_.pop_front();
  }
  block.block_hash = block.ComputeHash();
  chain_.push_back(std::move(block));
  return chain_.back();
}

std::size_t Ledger::MineAll() {
  std::size_t mined = 0;
  do {
    MineBlock();
    ++mined;
  } while (pending_count() > 0);
  return mined;
}

Digest Ledger::TipHash() const {
  std::lock_guard lock(mu_);
  return chain_.empty() ? Digest{} : chain_.back().block_hash;
}

EscrowId Ledger::DepositEscrow(const WalletAddress& from, Tokens amount) {
  std::lock_guard lock(mu_);
  Require(amount > 0, ErrorCode::kInvalidArgument, "escrow deposit must be positive");
  auto it = balances_.find(from);
  Require(it != balances_.end(), ErrorCode::kUnknownSender, "no account " + from.Hex());
  Require(it->second >= amount, ErrorCode::kInsufficientFunds,
          "balance " + std::to_string(it->second) + " < deposit " + std::to_string(amount));
  it->second -= amount;
  escrows_.push_back(Escrow{from, amount, amount, {}, 0});
  return escrows_.size() - 1;
}

Escrow& Ledger::MutableEscrow(EscrowId id) {
  Require(id < escrows_.size(), ErrorCode::kInvalidArgument, "unknown escrow");
  return escrows_[id];
}

void Ledger::Payout(EscrowId id, const WalletAddress& to, Tokens amount) {
  std::lock_guard lock(mu_);
  Escrow& e = MutableEscrow(id);
  Require(amount >= 0, ErrorCode::kInvalidArgument, "negative payout");
  Require(e.balance >= amount, ErrorCode::kInsufficientEscrow,
          "escrow holds " + std::to_string(e.balance) + ", payout " + std::to_string(amount));
  auto it = balances_.find(to);
  Require(it != balances_.end(), ErrorCode::kUnknownSender, "no account " + to.Hex());
  e.balance -= amount;
  it->second += amount;
  e.payouts.emplace_back(to, amount);
}

Tokens Ledger::Refund(EscrowId id) {
  std::lock_guard lock(mu_);
  Escrow& e = MutableEscrow(id);
  Tokens amount = e.balance;
  balances_.at(e.depositor) += amount;
  e.balance = 0;
  e.refunded += amount;
  return amount;
}

const Escrow& Ledger::escrow(EscrowId id) const {
  std::lock_guard lock(mu_);
  Require(id < escrows_.size(), ErrorCode::kInvalidArgument, "unknown escrow");
  return escrows_[id];
}

Tokens Ledger::CirculatingTotal() const {
  std::lock_guard lock(mu_);
  Tokens total = 0;
  for (const auto& [addr, balance] : balances_) total += balance;
  for (const auto& e : escrows_) total += e.balance;
  return total;
}

}  // namespace sfl::ledger
