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


#include "sfl/contract/contract.h"

#include <cmath>
#include <string>
#include <utility>

#include "sfl/common/error.h"
#include "sfl/fl/training.h"

namespace sfl::contract {

using ledger::Gas;
using ledger::Tokens;
using ledger::Transaction;
using ledger::TxKind;
using ledger::WalletAddress;

namespace {

// Leading tag of an Evaluate payload.
enum class EvaluateTag : std::uint64_t { kScoring = 0, kModel = 1 };

// Quality recorded for a submission that could not be scored (local mode
// without a local score). Below every admissible threshold.
constexpr double kUnscored = -1.0;

void WriteAddress(ByteWriter& w, const WalletAddress& a) { w.Raw(a.bytes); }

WalletAddress ReadAddress(ByteReader& r) {
  WalletAddress a;
  r.Raw(a.bytes);
  return a;
}

Digest ReadDigest(ByteReader& r) {
  Digest d{};
  r.Raw(d);
  return d;
}

void WriteTask(ByteWriter& w, const TaskSpec& t) {
  const fl::ModelSpec& s = t.initial_model.spec;
  w.U64(static_cast<std::uint64_t>(s.kind)).U64(s.input_dim).U64(s.class_count);
  w.U64(s.hidden.size());
  for (std::size_t h : s.hidden) w.U64(h);
  w.F64Seq(t.initial_model.params.values()).U64(t.initial_model.round);
  w.U64(t.commitment.group_hashes.size());
  for (const Digest& d : t.commitment.group_hashes) w.Raw(d);
  w.Raw(t.commitment.index_seed_hash);
  w.F64(t.threshold).U64(static_cast<std::uint64_t>(t.reward_total)).U64(t.max_rounds);
  w.F64(t.privacy.epsilon()).F64(t.privacy.delta()).F64(t.privacy.sensitivity());
  w.F64(t.privacy.sigma()).Bool(t.privacy.sigma_overridden());
  w.U64(t.miner_count).U64(t.convergence_window).F64(t.convergence_tol);
  w.Bool(t.allow_local_evaluation);
}

TaskSpec ReadTask(ByteReader& r) {
  TaskSpec t;
  fl::ModelSpec& s = t.initial_model.spec;
  const std::uint64_t kind = r.U64();
  Require(kind <= 1, ErrorCode::kParse, "unknown model kind");
  s.kind = static_cast<fl::ModelKind>(kind);
  s.input_dim = r.U64();
  s.class_count = r.U64();
  s.hidden.resize(r.U64());
  for (std::size_t& h : s.hidden) h = r.U64();
  t.initial_model.params = fl::ParameterVector(r.F64Seq());
  t.initial_model.round = r.U64();
  t.commitment.group_hashes.resize(r.U64());
  for (Digest& d : t.commitment.group_hashes) d = ReadDigest(r);
  t.commitment.index_seed_hash = ReadDigest(r);
  t.threshold = r.F64();
  t.reward_total = static_cast<Tokens>(r.U64());
  t.max_rounds = r.U64();
  const double eps = r.F64();
  const double delta = r.F64();
  const double sens = r.F64();
  const double sigma = r.F64();
  const bool overridden = r.Bool();
  t.privacy = overridden ? ldp::PrivacyParams::WithSigmaOverride(eps, delta, sens, sigma)
                         : ldp::PrivacyParams::Create(eps, delta, sens);
  Require(t.privacy.sigma() == sigma, ErrorCode::kParse, "privacy sigma does not round-trip");
  t.miner_count = r.U64();
  t.convergence_window = r.U64();
  t.convergence_tol = r.F64();
  t.allow_local_evaluation = r.Bool();
  return t;
}

void WritePayouts(ByteWriter& w, const PayoutReport& p) {
  w.U64(static_cast<std::uint64_t>(p.per_share)).U64(static_cast<std::uint64_t>(p.refund));
  w.U64(p.lines.size());
  for (const PayoutLine& l : p.lines) {
    w.U64(l.device.value);
    WriteAddress(w, l.payee);
    w.U64(l.shares).U64(static_cast<std::uint64_t>(l.amount));
  }
}

PayoutReport ReadPayouts(ByteReader& r) {
  PayoutReport p;
  p.per_share = static_cast<Tokens>(r.U64());
  p.refund = static_cast<Tokens>(r.U64());
  p.lines.resize(r.U64());
  for (PayoutLine& l : p.lines) {
    l.device = DeviceId{static_cast<std::uint32_t>(r.U64())};
    l.payee = ReadAddress(r);
    l.shares = r.U64();
    l.amount = static_cast<Tokens>(r.U64());
  }
  return p;
}

bool IsEligible(const ContractState& s) {
  const TaskSpec& t = *s.task;
  if (s.accuracy_history.size() >= t.max_rounds) return true;
  return t.convergence_window >= 2 &&
         fl::HasConverged(s.accuracy_history, t.convergence_window, t.convergence_tol);
}

fl::GlobalModel AggregateAccepted(const ContractState& s) {
  std::vector<fl::ParameterVector> updates;
  for (DeviceId id : s.qualified) updates.push_back(s.submissions.at(id).update.values);
  if (updates.empty()) {
    fl::GlobalModel next = s.current_global;
    ++next.round;
    return next;
  }
  return fl::ApplyUpdate(s.current_global, fl::FederatedAverage(updates));
}

PayoutReport SplitReward(const ContractState& s) {
  PayoutReport report;
  std::map<DeviceId, PayoutLine> by_device;
  for (const QualifiedEntry& e : s.qualified_log) {
    PayoutLine& line = by_device[e.device];
    line.device = e.device;
    line.payee = e.payee;
    ++line.shares;
  }
  const Tokens reward = s.task->reward_total;
  const auto pairs = static_cast<Tokens>(s.qualified_log.size());
  report.per_share = pairs == 0 ? 0 : reward / pairs;
  report.refund = reward - report.per_share * pairs;
  for (auto& [id, line] : by_device) {
    line.amount = report.per_share * static_cast<Tokens>(line.shares);
    report.lines.push_back(line);
  }
  return report;
}

void StartNextRound(ContractState& s) {
  s.phase = Phase::kAccepting;
  s.submissions.clear();
  s.qualified.clear();
  s.disclosed = false;
  s.disclosure_verified = false;
  s.scored = false;
  s.model_evaluated = false;
}

// Applies one event to `s`. Shared by the live contract and Replay, so the
// two cannot drift apart. Payload results are cross-checked wherever they
// can be recomputed from the state.
void ApplyEvent(ContractState& s, const ContractEvent& ev) {
  ByteReader r(ev.payload);
  switch (ev.tx.kind) {
    case TxKind::kDeploy: {
      Require(s.phase == Phase::kCreated && !s.task, ErrorCode::kParse, "unexpected Deploy");
      s.task = ReadTask(r);
      s.current_global = s.task->initial_model;
      break;
    }
    case TxKind::kInit: {
      Require(s.phase == Phase::kCreated && s.task, ErrorCode::kParse, "unexpected Init");
      s.escrow = r.U64();
      s.phase = Phase::kInitialized;
      s.round = 0;
      break;
    }
    case TxKind::kSubmit: {
      SubmissionRecord rec;
      rec.update.device_id = DeviceId{static_cast<std::uint32_t>(r.U64())};
      rec.payee = ReadAddress(r);
      rec.update.values = fl::ParameterVector(r.F64Seq());
      rec.update.was_clipped = r.Bool();
      if (r.Bool()) rec.local_score = r.F64();
      Require(s.phase == Phase::kInitialized || s.phase == Phase::kAccepting, ErrorCode::kParse,
              "unexpected Submit");
      Require(!s.submissions.contains(rec.update.device_id), ErrorCode::kParse,
              "duplicate Submit");
      s.phase = Phase::kAccepting;
      s.submissions.emplace(rec.update.device_id, std::move(rec));
      break;
    }
    case TxKind::kDisclose: {
      Require(s.phase == Phase::kAccepting || s.phase == Phase::kEvaluating, ErrorCode::kParse,
              "unexpected Disclose");
      s.disclosure_verified = r.Bool();
      s.disclosed = true;
      s.phase = Phase::kEvaluating;
      break;
    }
    case TxKind::kEvaluate: {
      const auto tag = static_cast<EvaluateTag>(r.U64());
      if (tag == EvaluateTag::kScoring) {
        Require((s.phase == Phase::kAccepting || s.phase == Phase::kEvaluating) && !s.scored,
                ErrorCode::kParse, "unexpected scoring Evaluate");
        s.mode = static_cast<EvaluationMode>(r.U64());
        const std::uint64_t n = r.U64();
        Require(n == s.submissions.size(), ErrorCode::kParse, "score count mismatch");
        const double theta = s.task->threshold;
        std::size_t accepted = 0;
        for (auto& [id, rec] : s.submissions) {
          Require(r.U64() == id.value, ErrorCode::kParse, "score order mismatch");
          rec.miner_scores = r.F64Seq();
          rec.quality = r.F64();
          rec.accepted = rec.quality >= theta;
          if (rec.accepted) {
            s.qualified.insert(id);
            s.qualified_log.push_back({id, rec.payee, s.round});
            ++accepted;
          }
        }
        s.qualified_per_round.push_back(accepted);
        s.scored = true;
        s.phase = Phase::kEvaluating;
      } else {
        Require(tag == EvaluateTag::kModel, ErrorCode::kParse, "unknown Evaluate tag");
        Require(s.phase == Phase::kAggregated && !s.model_evaluated, ErrorCode::kParse,
                "unexpected model Evaluate");
        s.accuracy_history.push_back(r.F64());
        const bool eligible = r.Bool();
        Require(eligible == IsEligible(s), ErrorCode::kParse, "eligibility mismatch");
        s.model_evaluated = true;
        s.finalization_eligible = eligible;
        if (!eligible) StartNextRound(s);
      }
      break;
    }
    case TxKind::kAggregate: {
      Require(s.phase == Phase::kEvaluating && s.scored, ErrorCode::kParse,
              "unexpected Aggregate");
      const std::uint64_t round = r.U64();
      const std::vector<double> params = r.F64Seq();
      fl::GlobalModel next = AggregateAccepted(s);
      Require(next.round == round && next.params == fl::ParameterVector(params),
              ErrorCode::kParse, "aggregate result diverged");
      s.current_global = std::move(next);
      s.round = s.current_global.round;
      s.phase = Phase::kAggregated;
      break;
    }
    case TxKind::kFinalize: {
      Require(s.phase == Phase::kAggregated && s.finalization_eligible, ErrorCode::kParse,
              "unexpected Finalize");
      PayoutReport report = ReadPayouts(r);
      Require(report == SplitReward(s), ErrorCode::kParse, "payout report diverged");
      s.payouts = std::move(report);
      s.phase = Phase::kFinalized;
      break;
    }
    case TxKind::kPost: {
      Require(s.phase == Phase::kFinalized && !s.posted, ErrorCode::kParse, "unexpected Post");
      const double accuracy = r.F64();
      const std::uint64_t rounds = r.U64();
      std::vector<std::size_t> per_round(r.U64());
      for (std::size_t& q : per_round) q = r.U64();
      const PayoutReport payouts = ReadPayouts(r);
      Require(accuracy == s.accuracy_history.back() && rounds == s.round &&
                  per_round == s.qualified_per_round && payouts == *s.payouts,
              ErrorCode::kParse, "posted summary diverged");
      s.posted = true;
      break;
    }
  }
  Require(r.AtEnd(), ErrorCode::kParse, std::string("trailing bytes in ") + std::string(ledger::TxKindName(ev.tx.kind)) + " payload");
}

}  // namespace

const char* PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kCreated: return "Created";
    case Phase::kInitialized: return "Initialized";
    case Phase::kAccepting: return "Accepting";
    case Phase::kEvaluating: return "Evaluating";
    case Phase::kAggregated: return "Aggregated";
    case Phase::kFinalized: return "Finalized";
  }
  return "?";
}

void TaskSpec::Validate() const {
  initial_model.spec.Validate();
  Require(initial_model.params.dim() == initial_model.spec.ParameterCount(),
          ErrorCode::kInvalidArgument, "initial model does not match its spec");
  Require(!commitment.group_hashes.empty(), ErrorCode::kInvalidArgument,
          "commitment has no groups");
  Require(threshold >= 0.0 && threshold <= 1.0, ErrorCode::kInvalidArgument,
          "threshold must lie in [0, 1]");
  Require(reward_total > 0, ErrorCode::kInvalidArgument, "reward must be positive");
  Require(max_rounds >= 1, ErrorCode::kInvalidArgument, "max_rounds must be at least 1");
  Require(miner_count >= 1, ErrorCode::kInvalidArgument, "miner_count must be at least 1");
  Require(convergence_window != 1, ErrorCode::kInvalidArgument,
          "convergence window must be 0 or at least 2");
  Require(std::isfinite(convergence_tol) && convergence_tol >= 0.0,
          ErrorCode::kInvalidArgument, "convergence tolerance must be finite and >= 0");
}

std::vector<fl::Dataset> MinerShards(std::span<const fl::Dataset> groups, std::size_t miners) {
  Require(miners >= 1, ErrorCode::kInvalidArgument, "need at least one miner");
  Require(!groups.empty(), ErrorCode::kEmptyInput, "no evaluation data");
  std::vector<fl::Dataset> shards;
  if (groups.size() >= miners) {
    std::vector<std::vector<fl::Dataset>> parts(miners);
    for (std::size_t g = 0; g < groups.size(); ++g) parts[g % miners].push_back(groups[g]);
    for (auto& p : parts) shards.push_back(fl::Concat(p));
  } else {
    const fl::Dataset all = fl::Concat(groups);
    std::vector<std::vector<std::size_t>> rows(miners);
    for (std::size_t i = 0; i < all.size(); ++i) rows[i % miners].push_back(i);
    for (auto& idx : rows) shards.push_back(all.Subset(idx));
  }
  for (const auto& s : shards) {
    Require(!s.empty(), ErrorCode::kInfeasible, "a miner shard is empty");
  }
  return shards;
}

double LocalEvaluate(const ldp::PerturbedUpdate& update, const fl::GlobalModel& global,
                     const fl::Dataset& data) {
  fl::RequireSameDim(update.values, global.params);
  return fl::EvaluateAccuracy(global.params + update.values, global.spec, data);
}

Contract::Contract(ledger::Ledger& ledger, WalletAddress publisher, WalletAddress aggregator)
    : ledger_(ledger), publisher_(publisher), aggregator_(aggregator) {}

const TaskSpec& Contract::task() const { return *state_.task; }

void Contract::RequirePhase(bool ok, const char* op) const {
  if (!ok) {
    Fail(ErrorCode::kInvalidPhase,
         std::string(op) + " is not allowed in phase " + PhaseName(state_.phase));
  }
}

Transaction Contract::MakeTx(TxKind kind, const WalletAddress& sender,
                             const std::vector<std::uint8_t>& payload, Gas gas) const {
  Transaction tx;
  tx.kind = kind;
  tx.sender = sender;
  tx.payload_hash = Sha256(payload);
  tx.gas_used = gas;
  tx.round = state_.round;
  return tx;
}

void Contract::Precheck(const Transaction& tx) const {
  if (auto err = ledger_.CheckTx(tx)) {
    Fail(*err, std::string(ledger::TxKindName(tx.kind)) + " transaction rejected");
  }
}

ledger::Receipt Contract::Commit(Transaction tx, std::vector<std::uint8_t> payload) {
  ContractEvent ev{tx, std::move(payload)};
  ContractState next = state_;
  ApplyEvent(next, ev);
  ledger::Receipt receipt = ledger_.SubmitTx(tx);
  Require(receipt.accepted, receipt.error.value_or(ErrorCode::kInvalidArgument),
          receipt.reason);
  state_ = std::move(next);
  events_.push_back(std::move(ev));
  return receipt;
}

void Contract::Init(const TaskSpec& t) {
  RequirePhase(state_.phase == Phase::kCreated, "init");
  t.Validate();
  ByteWriter deploy;
  WriteTask(deploy, t);
  Transaction deploy_tx = MakeTx(TxKind::kDeploy, publisher_, deploy.bytes(), ledger::gas::kDeploy);
  Precheck(deploy_tx);
  // The escrow id is only known after the deposit, so check Init with a
  // same-sized placeholder payload first; gas does not depend on it.
  Transaction init_probe = MakeTx(TxKind::kInit, aggregator_, {}, ledger::gas::kInit);
  Precheck(init_probe);
  const ledger::EscrowId escrow = ledger_.DepositEscrow(publisher_, t.reward_total);
  ByteWriter init;
  init.U64(escrow);
  Commit(deploy_tx, deploy.Release());
  Transaction init_tx = MakeTx(TxKind::kInit, aggregator_, init.bytes(), ledger::gas::kInit);
  Commit(init_tx, init.Release());
}

const fl::GlobalModel& Contract::GetGlobalModel() const {
  RequirePhase(state_.phase != Phase::kCreated, "get_global_model");
  return state_.current_global;
}

const TaskSpec& Contract::GetFlTask() const {
  RequirePhase(state_.phase != Phase::kCreated, "get_fl_task");
  return task();
}

double Contract::CurrentThreshold() const { return GetFlTask().threshold; }

ledger::Receipt Contract::SubmitModelUpdate(DeviceId device, const ldp::PerturbedUpdate& update,
                                            const WalletAddress& payee,
                                            std::optional<double> local_score) {
  RequirePhase(state_.phase == Phase::kInitialized || state_.phase == Phase::kAccepting,
               "submit_model_update");
  if (state_.submissions.contains(device)) {
    Fail(ErrorCode::kDuplicateSubmission,
         "device " + std::to_string(device.value) + " already submitted this round");
  }
  fl::RequireSameDim(update.values, state_.current_global.params);
  Require(update.values.AllFinite(), ErrorCode::kNonFinite, "update has non-finite values");
  if (local_score) {
    Require(std::isfinite(*local_score) && *local_score >= 0.0 && *local_score <= 1.0,
            ErrorCode::kInvalidArgument, "local score must lie in [0, 1]");
  }
  if (state_.mode == EvaluationMode::kLocal &&
      !(local_score && *local_score >= task().threshold)) {
    Fail(ErrorCode::kLocalScoreRequired,
         "local evaluation mode requires a local score of at least the threshold");
  }
  ByteWriter w;
  w.U64(device.value);
  WriteAddress(w, payee);
  w.F64Seq(update.values.values()).Bool(update.was_clipped);
  w.Bool(local_score.has_value());
  if (local_score) w.F64(*local_score);
  Transaction tx = MakeTx(TxKind::kSubmit, payee, w.bytes(),
                          ledger::gas::Submit(update.values.dim()));
  Precheck(tx);
  return Commit(tx, w.Release());
}

bool Contract::DisclosureTestData(std::span<const fl::Dataset> groups) {
  RequirePhase((state_.phase == Phase::kAccepting && !state_.submissions.empty()) ||
                   (state_.phase == Phase::kEvaluating && !state_.scored),
               "disclosure_test_data");
  const bool ok = ledger::VerifyCommitment(groups, task().commitment);
  ByteWriter w;
  w.Bool(ok);
  Transaction tx = MakeTx(TxKind::kDisclose, aggregator_, w.bytes(), ledger::gas::kDisclose);
  Precheck(tx);
  Commit(tx, w.Release());
  if (ok) {
    disclosed_groups_.assign(groups.begin(), groups.end());
  } else {
    disclosed_groups_.clear();
  }
  return ok;
}

void Contract::EvaluateLocalModel(const fl::Dataset& fallback) {
  RequirePhase(state_.phase == Phase::kAccepting || (state_.phase == Phase::kEvaluating &&
                                                     !state_.scored),
               "evaluate_local_model");
  Require(!state_.submissions.empty(), ErrorCode::kNoSubmissions,
          "no submissions to evaluate this round");
  EvaluationMode mode = state_.mode;
  const Gas on_chain = ledger::gas::Evaluate(state_.submissions.size());
  if (mode == EvaluationMode::kOnChain && on_chain > ledger_.gas_limit()) {
    if (!task().allow_local_evaluation) {
      Fail(ErrorCode::kGasExhausted, "Evaluate needs " + std::to_string(on_chain) +
                                         " gas, block limit is " +
                                         std::to_string(ledger_.gas_limit()));
    }
    mode = EvaluationMode::kLocal;
  }

  ByteWriter w;
  w.U64(static_cast<std::uint64_t>(EvaluateTag::kScoring));
  w.U64(static_cast<std::uint64_t>(mode)).U64(state_.submissions.size());
  if (mode == EvaluationMode::kOnChain) {
    const bool use_disclosed = state_.disclosure_verified && !disclosed_groups_.empty();
    const std::vector<fl::Dataset> shards =
        use_disclosed ? MinerShards(disclosed_groups_, task().miner_count)
                      : MinerShards(std::span<const fl::Dataset>(&fallback, 1), task().miner_count);
    for (const auto& [id, rec] : state_.submissions) {
      const fl::ParameterVector candidate = state_.current_global.params + rec.update.values;
      std::vector<double> scores;
      double sum = 0.0;
      for (const auto& shard : shards) {
        scores.push_back(fl::EvaluateAccuracy(candidate, state_.current_global.spec, shard));
        sum += scores.back();
      }
      w.U64(id.value).F64Seq(scores).F64(sum / static_cast<double>(scores.size()));
    }
  } else {
    for (const auto& [id, rec] : state_.submissions) {
      w.U64(id.value);
      if (rec.local_score) {
        const double score = *rec.local_score;
        w.F64Seq(std::span<const double>(&score, 1)).F64(score);
      } else {
        w.F64Seq({}).F64(kUnscored);
      }
    }
  }
  const Gas gas = mode == EvaluationMode::kOnChain ? on_chain : 0;
  Transaction tx = MakeTx(TxKind::kEvaluate, aggregator_, w.bytes(), gas);
  Precheck(tx);
  Commit(tx, w.Release());
}

void Contract::AggregateModelUpdate() {
  RequirePhase(state_.phase == Phase::kEvaluating && state_.scored, "aggregate_model_update");
  const fl::GlobalModel next = AggregateAccepted(state_);
  ByteWriter w;
  w.U64(next.round).F64Seq(next.params.values());
  Transaction tx = MakeTx(TxKind::kAggregate, aggregator_, w.bytes(),
                          ledger::gas::Aggregate(next.params.dim()));
  Precheck(tx);
  Commit(tx, w.Release());
}

double Contract::EvaluateModel(const fl::Dataset& data) {
  RequirePhase(state_.phase == Phase::kAggregated && !state_.model_evaluated, "evaluate_model");
  const double acc =
      fl::EvaluateAccuracy(state_.current_global.params, state_.current_global.spec, data);
  ContractState probe = state_;
  probe.accuracy_history.push_back(acc);
  ByteWriter w;
  w.U64(static_cast<std::uint64_t>(EvaluateTag::kModel)).F64(acc).Bool(IsEligible(probe));
  Transaction tx = MakeTx(TxKind::kEvaluate, aggregator_, w.bytes(),
                          ledger::gas::Evaluate(1));
  Precheck(tx);
  Commit(tx, w.Release());
  return acc;
}

PayoutReport Contract::FinalizeContract() {
  RequirePhase(state_.phase == Phase::kAggregated && state_.finalization_eligible,
               "finalize_contract");
  const PayoutReport report = SplitReward(state_);
  ByteWriter w;
  WritePayouts(w, report);
  Transaction tx = MakeTx(TxKind::kFinalize, aggregator_, w.bytes(), ledger::gas::kFinalize);
  Precheck(tx);
  const ledger::EscrowId escrow = *state_.escrow;
  Tokens total = report.refund;
  for (const PayoutLine& l : report.lines) total += l.amount;
  Require(total == ledger_.escrow(escrow).balance, ErrorCode::kInsufficientEscrow,
          "escrow does not hold the reward");
  for (const PayoutLine& l : report.lines) {
    Require(ledger_.HasAccount(l.payee), ErrorCode::kUnknownSender,
            "payee " + l.payee.Hex() + " has no account");
  }
  Commit(tx, w.Release());
  for (const PayoutLine& l : report.lines) {
    if (l.amount > 0) ledger_.Payout(escrow, l.payee, l.amount);
  }
  ledger_.Refund(escrow);
  return report;
}

std::vector<std::uint8_t> EncodeSummary(const PublishedSummary& s) {
  ByteWriter w;
  w.F64(s.final_accuracy).U64(s.rounds).U64(s.qualified_per_round.size());
  for (std::size_t q : s.qualified_per_round) w.U64(q);
  WritePayouts(w, s.payouts);
  return w.Release();
}

PublishedSummary Contract::PostEvaluation() {
  RequirePhase(state_.phase == Phase::kFinalized && !state_.posted, "post_evaluation");
  PublishedSummary summary;
  summary.final_accuracy = state_.accuracy_history.back();
  summary.rounds = state_.round;
  summary.qualified_per_round = state_.qualified_per_round;
  summary.payouts = *state_.payouts;
  std::vector<std::uint8_t> payload = EncodeSummary(summary);
  summary.hash = Sha256(payload);
  Transaction tx = MakeTx(TxKind::kPost, aggregator_, payload, ledger::gas::kPost);
  Precheck(tx);
  Commit(tx, std::move(payload));
  return summary;
}

ContractState Replay(std::span<const ContractEvent> events) {
  ContractState s;
  for (const ContractEvent& ev : events) {
    Require(Sha256(ev.payload) == ev.tx.payload_hash, ErrorCode::kParse,
            "payload does not match its transaction hash");
    Require(ev.tx.round == s.round, ErrorCode::kParse, "transaction round out of sequence");
    ApplyEvent(s, ev);
  }
  return s;
}

}  // namespace sfl::contract
