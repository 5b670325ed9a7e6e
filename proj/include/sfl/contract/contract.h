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


#ifndef SFL_CONTRACT_CONTRACT_H_
#define SFL_CONTRACT_CONTRACT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "sfl/common/digest.h"
#include "sfl/common/ids.h"
#include "sfl/fl/dataset.h"
#include "sfl/fl/model.h"
#include "sfl/ldp/privacy.h"
#include "sfl/ledger/chain.h"
#include "sfl/ledger/commitment.h"
#include "sfl/ledger/ledger.h"

namespace sfl::contract {

enum class Phase { kCreated, kInitialized, kAccepting, kEvaluating, kAggregated, kFinalized };

const char* PhaseName(Phase phase);

// kLocal replaces miner scoring with device-reported local scores once an
// on-chain Evaluate no longer fits into a block.
enum class EvaluationMode { kOnChain, kLocal };

struct TaskSpec {
  fl::GlobalModel initial_model;
  ledger::Commitment commitment;
  double threshold = 0.0;
  ledger::Tokens reward_total = 0;
  std::size_t max_rounds = 1;
  ldp::PrivacyParams privacy = ldp::PrivacyParams::Create(8.0, 0.006737946999085467, 1.0);
  std::size_t miner_count = 1;
  // 0 disables the convergence stop.
  std::size_t convergence_window = 5;
  double convergence_tol = 0.002;
  bool allow_local_evaluation = false;

  // Throws kInvalidArgument.
  void Validate() const;

  bool operator==(const TaskSpec&) const = default;
};

struct SubmissionRecord {
  ldp::PerturbedUpdate update;
  ledger::WalletAddress payee;
  std::optional<double> local_score;
  std::vector<double> miner_scores;
  double quality = 0.0;
  bool accepted = false;

  bool operator==(const SubmissionRecord&) const = default;
};

struct PayoutLine {
  DeviceId device;
  ledger::WalletAddress payee;
  std::size_t shares = 0;
  ledger::Tokens amount = 0;

  bool operator==(const PayoutLine&) const = default;
};

struct PayoutReport {
  std::vector<PayoutLine> lines;  // ordered by device id
  ledger::Tokens per_share = 0;
  ledger::Tokens refund = 0;

  bool operator==(const PayoutReport&) const = default;
};

struct PublishedSummary {
  double final_accuracy = 0.0;
  std::uint64_t rounds = 0;
  std::vector<std::size_t> qualified_per_round;
  PayoutReport payouts;
  Digest hash{};

  bool operator==(const PublishedSummary&) const = default;
};

// One accepted (device, round) pair; each earns one reward share.
struct QualifiedEntry {
  DeviceId device;
  ledger::WalletAddress payee;
  std::uint64_t round = 0;

  bool operator==(const QualifiedEntry&) const = default;
};

struct ContractState {
  Phase phase = Phase::kCreated;
  std::optional<TaskSpec> task;
  fl::GlobalModel current_global;
  // Submissions of the round in progress.
  std::map<DeviceId, SubmissionRecord> submissions;
  std::set<DeviceId> qualified;
  // Completed aggregations.
  std::uint64_t round = 0;
  std::vector<double> accuracy_history;

  EvaluationMode mode = EvaluationMode::kOnChain;
  std::optional<ledger::EscrowId> escrow;
  bool disclosed = false;
  bool disclosure_verified = false;
  bool scored = false;
  bool model_evaluated = false;
  bool finalization_eligible = false;
  bool posted = false;
  std::vector<QualifiedEntry> qualified_log;
  std::vector<std::size_t> qualified_per_round;
  std::optional<PayoutReport> payouts;

  bool operator==(const ContractState&) const = default;
};

// A state-mutating call: its canonical payload and the transaction that
// carries the payload's hash.
struct ContractEvent {
  ledger::Transaction tx;
  std::vector<std::uint8_t> payload;
};

// Disjoint evaluation shards, one per miner: whole groups round-robin when
// there are at least `miners` groups, otherwise the concatenated rows
// round-robin. Throws kInfeasible if any shard would be empty.
std::vector<fl::Dataset> MinerShards(std::span<const fl::Dataset> groups, std::size_t miners);

// Accuracy of the candidate model global + update on `data`. Off-chain and
// gas-free.
double LocalEvaluate(const ldp::PerturbedUpdate& update, const fl::GlobalModel& global,
                     const fl::Dataset& data);

// The contract lifecycle on top of a ledger. Every mutating call submits
// exactly one transaction of the matching kind (init submits Deploy and
// Init) and fails atomically: on error neither state nor ledger changes.
// Not thread-safe; callers serialize mutating calls.
class Contract {
 public:
  // `publisher` funds the escrow; `aggregator` sends the round transactions.
  Contract(ledger::Ledger& ledger, ledger::WalletAddress publisher,
           ledger::WalletAddress aggregator);

  void Init(const TaskSpec& task);

  const fl::GlobalModel& GetGlobalModel() const;
  const TaskSpec& GetFlTask() const;
  // The live acceptance threshold.
  double CurrentThreshold() const;

  // Intake. In local-evaluation mode the submission must carry a local
  // score of at least the threshold (kLocalScoreRequired otherwise).
  ledger::Receipt SubmitModelUpdate(DeviceId device, const ldp::PerturbedUpdate& update,
                                    const ledger::WalletAddress& payee,
                                    std::optional<double> local_score = std::nullopt);

  // Closes intake for the round (Accepting -> Evaluating) and checks the
  // groups against the commitment. Verified groups become the evaluation
  // data; otherwise the fallback passed to EvaluateLocalModel is used.
  bool DisclosureTestData(std::span<const fl::Dataset> groups);

  // Scores every submission and fills the qualified set. Legal from
  // Accepting (closing intake) or from Evaluating before scoring.
  void EvaluateLocalModel(const fl::Dataset& fallback);

  void AggregateModelUpdate();

  // Appends the accuracy of the current global model to the history.
  double EvaluateModel(const fl::Dataset& data);

  PayoutReport FinalizeContract();

  PublishedSummary PostEvaluation();

  const ContractState& state() const { return state_; }
  std::span<const ContractEvent> events() const { return events_; }
  const ledger::WalletAddress& publisher() const { return publisher_; }
  const ledger::WalletAddress& aggregator() const { return aggregator_; }

 private:
  const TaskSpec& task() const;
  void RequirePhase(bool ok, const char* op) const;
  ledger::Transaction MakeTx(ledger::TxKind kind, const ledger::WalletAddress& sender,
                             const std::vector<std::uint8_t>& payload, ledger::Gas gas) const;
  void Precheck(const ledger::Transaction& tx) const;
  ledger::Receipt Commit(ledger::Transaction tx, std::vector<std::uint8_t> payload);

  ledger::Ledger& ledger_;
  ledger::WalletAddress publisher_;
  ledger::WalletAddress aggregator_;
  ContractState state_;
  std::vector<ContractEvent> events_;
  std::vector<fl::Dataset> disclosed_groups_;
};

// Rebuilds the contract state from its event log alone. Throws kParse if a
// payload does not match its transaction or the replay diverges from the
// recorded results.
ContractState Replay(std::span<const ContractEvent> events);

// Canonical summary encoding; its SHA-256 is the Post payload hash.
std::vector<std::uint8_t> EncodeSummary(const PublishedSummary& summary);

}  // namespace sfl::contract

#endif  // SFL_CONTRACT_CONTRACT_H_
