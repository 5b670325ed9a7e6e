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


#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "sfl/common/rng.h"
#include "sfl/contract/contract.h"
#include "sfl/fl/training.h"
#include "test_util.h"

namespace sfl::contract {
namespace {

using ledger::WalletAddress;

// Two separable classes on the first coordinate: label 0 at x0 = +1, label
// 1 at x0 = -1. The spec is Logistic(2, 2), parameters W (2x2) then b (2).
fl::Dataset Separable(std::size_t per_class) {
  fl::Dataset d(2, 2);
  for (std::size_t i = 0; i < per_class; ++i) {
    const double jitter = 0.1 * static_cast<double>(i % 5);
    d.Add(std::vector<double>{1.0, jitter}, 0);
    d.Add(std::vector<double>{-1.0, jitter}, 1);
  }
  return d;
}

// Accuracy 1 from a zero model.
ldp::PerturbedUpdate Good(std::uint32_t id) {
  return {fl::ParameterVector{1, -1, 0, 0, 0, 0}, false, DeviceId{id}};
}
// Accuracy 0 from a zero model.
ldp::PerturbedUpdate Bad(std::uint32_t id) {
  return {fl::ParameterVector{-1, 1, 0, 0, 0, 0}, false, DeviceId{id}};
}
// Zero model plus zero update: every row ties, predicts class 0, accuracy 0.5.
ldp::PerturbedUpdate Neutral(std::uint32_t id) {
  return {fl::ParameterVector(6), false, DeviceId{id}};
}

WalletAddress Wallet(std::uint64_t i) { return WalletAddress::Derive(3, "device", i); }

class ContractTest : public ::testing::Test {
 protected:
  ContractTest()
      : ledger_(ledger::gas::kDefaultBlockLimit),
        publisher_(WalletAddress::Derive(3, "publisher", 0)),
        aggregator_(WalletAddress::Derive(3, "aggregator", 0)),
        data_(Separable(10)),
        contract_(ledger_, publisher_, aggregator_) {
    ledger_.CreateAccount(publisher_, 1000);
    ledger_.CreateAccount(aggregator_, 0);
    for (std::uint64_t i = 0; i < 8; ++i) ledger_.CreateAccount(Wallet(i), 0);
    groups_ = {data_};
  }

  TaskSpec Task(double threshold, std::size_t rounds, ledger::Tokens reward = 100) const {
    TaskSpec t;
    t.initial_model = fl::GlobalModel{fl::ParameterVector(6), 0, fl::ModelSpec::Logistic(2, 2)};
    t.commitment = ledger::CommitTestData(groups_, std::vector<std::uint8_t>{1});
    t.threshold = threshold;
    t.reward_total = reward;
    t.max_rounds = rounds;
    t.convergence_window = 0;
    return t;
  }

  void Submit(const ldp::PerturbedUpdate& u) {
    contract_.SubmitModelUpdate(u.device_id, u, Wallet(u.device_id.value));
  }

  // Disclose, score, aggregate, evaluate.
  void CloseRound() {
    EXPECT_TRUE(contract_.DisclosureTestData(groups_));
    contract_.EvaluateLocalModel(data_);
    contract_.AggregateModelUpdate();
    contract_.EvaluateModel(data_);
  }

  void ExpectReplayMatches() const { EXPECT_EQ(Replay(contract_.events()), contract_.state()); }

  ledger::Ledger ledger_;
  WalletAddress publisher_;
  WalletAddress aggregator_;
  fl::Dataset data_;
  std::vector<fl::Dataset> groups_;
  Contract contract_;
};

TEST_F(ContractTest, InitDepositsRewardAndSubmitsTwoTxs) {
  contract_.Init(Task(0.5, 1));
  EXPECT_EQ(contract_.state().phase, Phase::kInitialized);
  EXPECT_EQ(ledger_.Balance(publisher_), 900);
  ASSERT_EQ(contract_.events().size(), 2u);
  EXPECT_EQ(contract_.events()[0].tx.kind, ledger::TxKind::kDeploy);
  EXPECT_EQ(contract_.events()[1].tx.kind, ledger::TxKind::kInit);
  EXPECT_EQ(contract_.GetFlTask(), Task(0.5, 1));
  EXPECT_DOUBLE_EQ(contract_.CurrentThreshold(), 0.5);
  EXPECT_SFL_ERROR(contract_.Init(Task(0.5, 1)), ErrorCode::kInvalidPhase);
  ExpectReplayMatches();
}

TEST_F(ContractTest, InvalidInitLeavesNothingBehind) {
  EXPECT_SFL_ERROR(contract_.Init(Task(0.5, 0)), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(contract_.Init(Task(1.5, 1)), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(contract_.Init(Task(0.5, 1, 5000)), ErrorCode::kInsufficientFunds);
  EXPECT_EQ(contract_.state(), ContractState{});
  EXPECT_TRUE(contract_.events().empty());
  EXPECT_EQ(ledger_.pending_count(), 0u);
  EXPECT_EQ(ledger_.Balance(publisher_), 1000);
  EXPECT_SFL_ERROR(contract_.GetGlobalModel(), ErrorCode::kInvalidPhase);
}

TEST_F(ContractTest, CallsOutOfPhaseAreRejected) {
  EXPECT_SFL_ERROR(Submit(Good(0)), ErrorCode::kInvalidPhase);
  contract_.Init(Task(0.5, 1));
  EXPECT_SFL_ERROR(contract_.AggregateModelUpdate(), ErrorCode::kInvalidPhase);
  EXPECT_SFL_ERROR(contract_.EvaluateModel(data_), ErrorCode::kInvalidPhase);
  EXPECT_SFL_ERROR(contract_.FinalizeContract(), ErrorCode::kInvalidPhase);
  EXPECT_SFL_ERROR(contract_.PostEvaluation(), ErrorCode::kInvalidPhase);
  EXPECT_SFL_ERROR(contract_.DisclosureTestData(groups_), ErrorCode::kInvalidPhase);
  Submit(Good(0));
  EXPECT_SFL_ERROR(Submit(Good(0)), ErrorCode::kDuplicateSubmission);
  EXPECT_TRUE(contract_.DisclosureTestData(groups_));
  // Intake is closed once the round is being evaluated.
  EXPECT_SFL_ERROR(Submit(Good(1)), ErrorCode::kInvalidPhase);
  ExpectReplayMatches();
}

TEST_F(ContractTest, SubmissionShapeIsChecked) {
  contract_.Init(Task(0.5, 1));
  ldp::PerturbedUpdate wrong{fl::ParameterVector(5), false, DeviceId{0}};
  EXPECT_SFL_ERROR(Submit(wrong), ErrorCode::kDimensionMismatch);
  ldp::PerturbedUpdate nan{fl::ParameterVector{NAN, 0, 0, 0, 0, 0}, false, DeviceId{0}};
  EXPECT_SFL_ERROR(Submit(nan), ErrorCode::kNonFinite);
  EXPECT_SFL_ERROR(contract_.EvaluateLocalModel(data_), ErrorCode::kInvalidPhase);
}

TEST_F(ContractTest, ThresholdIsInclusive) {
  contract_.Init(Task(0.5, 1));
  Submit(Good(0));
  Submit(Bad(1));
  Submit(Neutral(2));
  CloseRound();
  // The last round keeps its submissions until finalization.
  const auto& subs = contract_.state().submissions;
  EXPECT_TRUE(subs.at(DeviceId{0}).accepted);
  EXPECT_FALSE(subs.at(DeviceId{1}).accepted);
  EXPECT_DOUBLE_EQ(subs.at(DeviceId{2}).quality, 0.5);
  EXPECT_TRUE(subs.at(DeviceId{2}).accepted);
  const auto& log = contract_.state().qualified_log;
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].device, DeviceId{0});
  EXPECT_EQ(log[1].device, DeviceId{2});
  EXPECT_EQ(contract_.state().qualified_per_round, (std::vector<std::size_t>{2}));
}

TEST_F(ContractTest, QualityIsMeanOverMinerShards) {
  contract_.Init(Task(0.5, 1));
  Submit(Good(0));
  contract_.DisclosureTestData(groups_);
  contract_.EvaluateLocalModel(data_);
  const auto& rec = contract_.state().submissions.at(DeviceId{0});
  ASSERT_EQ(rec.miner_scores.size(), 1u);
  EXPECT_DOUBLE_EQ(rec.quality, 1.0);
  EXPECT_TRUE(rec.accepted);
  EXPECT_DOUBLE_EQ(rec.quality, LocalEvaluate(Good(0), contract_.GetGlobalModel(), data_));
}

TEST_F(ContractTest, AggregateAveragesOnlyQualified) {
  contract_.Init(Task(0.6, 2));
  Submit(Good(0));
  Submit(Bad(1));
  Submit(Good(2));
  CloseRound();
  EXPECT_EQ(contract_.GetGlobalModel().params, Good(0).values);
  EXPECT_EQ(contract_.GetGlobalModel().round, 1u);
  EXPECT_EQ(contract_.state().phase, Phase::kAccepting);
  EXPECT_DOUBLE_EQ(contract_.state().accuracy_history.back(), 1.0);
  ExpectReplayMatches();
}

TEST_F(ContractTest, RoundWithNoQualifiedKeepsTheModel) {
  contract_.Init(Task(0.9, 2));
  Submit(Bad(0));
  CloseRound();
  EXPECT_EQ(contract_.GetGlobalModel().params, fl::ParameterVector(6));
  EXPECT_EQ(contract_.state().round, 1u);
  EXPECT_EQ(contract_.state().qualified_per_round, (std::vector<std::size_t>{0}));
}

TEST_F(ContractTest, EmptyRoundCannotBeScored) {
  contract_.Init(Task(0.5, 2));
  Submit(Good(0));
  CloseRound();
  ASSERT_EQ(contract_.state().phase, Phase::kAccepting);
  EXPECT_SFL_ERROR(contract_.EvaluateLocalModel(data_), ErrorCode::kNoSubmissions);
  EXPECT_SFL_ERROR(contract_.DisclosureTestData(groups_), ErrorCode::kInvalidPhase);
}

TEST_F(ContractTest, FinalizeSplitsSharesAndRefundsRemainder) {
  contract_.Init(Task(0.6, 2, 100));
  Submit(Good(0));
  Submit(Good(1));
  CloseRound();
  Submit(Good(0));
  Submit(Bad(1));
  CloseRound();
  ASSERT_TRUE(contract_.state().finalization_eligible);
  const PayoutReport report = contract_.FinalizeContract();
  EXPECT_EQ(report.per_share, 33);
  EXPECT_EQ(report.refund, 1);
  ASSERT_EQ(report.lines.size(), 2u);
  EXPECT_EQ(report.lines[0].amount, 66);
  EXPECT_EQ(report.lines[1].amount, 33);
  EXPECT_EQ(ledger_.Balance(Wallet(0)), 66);
  EXPECT_EQ(ledger_.Balance(Wallet(1)), 33);
  EXPECT_EQ(ledger_.Balance(publisher_), 901);
  EXPECT_EQ(ledger_.CirculatingTotal(), ledger_.TotalSupply());
  EXPECT_SFL_ERROR(contract_.FinalizeContract(), ErrorCode::kInvalidPhase);
  EXPECT_SFL_ERROR(Submit(Good(5)), ErrorCode::kInvalidPhase);
  ExpectReplayMatches();
}

TEST_F(ContractTest, NothingQualifiedRefundsEverything) {
  contract_.Init(Task(0.9, 1, 100));
  Submit(Bad(0));
  CloseRound();
  const PayoutReport report = contract_.FinalizeContract();
  EXPECT_TRUE(report.lines.empty());
  EXPECT_EQ(report.refund, 100);
  EXPECT_EQ(ledger_.Balance(publisher_), 1000);
}

TEST_F(ContractTest, PostOnceWithDeterministicHash) {
  contract_.Init(Task(0.5, 1));
  Submit(Good(0));
  CloseRound();
  contract_.FinalizeContract();
  const PublishedSummary s = contract_.PostEvaluation();
  EXPECT_EQ(s.hash, Sha256(EncodeSummary(s)));
  EXPECT_EQ(s.hash, contract_.events().back().tx.payload_hash);
  EXPECT_DOUBLE_EQ(s.final_accuracy, 1.0);
  EXPECT_EQ(s.rounds, 1u);
  EXPECT_SFL_ERROR(contract_.PostEvaluation(), ErrorCode::kInvalidPhase);
  ExpectReplayMatches();
  ledger_.MineAll();
  EXPECT_TRUE(ledger::VerifyChain(ledger_.chain()));
}

TEST_F(ContractTest, ConvergenceMakesEligibleEarly) {
  TaskSpec t = Task(0.5, 10);
  t.convergence_window = 2;
  t.convergence_tol = 0.01;
  contract_.Init(t);
  Submit(Good(0));
  CloseRound();
  EXPECT_FALSE(contract_.state().finalization_eligible);
  Submit(Neutral(0));
  CloseRound();
  EXPECT_TRUE(contract_.state().finalization_eligible);
  EXPECT_EQ(contract_.state().phase, Phase::kAggregated);
}

TEST_F(ContractTest, FailedDisclosureFallsBackButStillScores) {
  contract_.Init(Task(0.5, 1));
  Submit(Good(0));
  const std::vector<fl::Dataset> forged{Separable(3)};
  EXPECT_FALSE(contract_.DisclosureTestData(forged));
  EXPECT_FALSE(contract_.state().disclosure_verified);
  contract_.EvaluateLocalModel(data_);
  EXPECT_TRUE(contract_.state().submissions.at(DeviceId{0}).accepted);
}

TEST_F(ContractTest, ReplayRejectsTamperedPayload) {
  contract_.Init(Task(0.5, 1));
  Submit(Good(0));
  std::vector<ContractEvent> events(contract_.events().begin(), contract_.events().end());
  events.back().payload.back() ^= 1;
  EXPECT_SFL_ERROR(Replay(events), ErrorCode::kParse);
  events.pop_back();
  EXPECT_EQ(Replay(events).phase, Phase::kInitialized);
}

// With threshold 0 every submission is accepted, so one round equals plain
// federated averaging.
TEST_F(ContractTest, ZeroThresholdIsPlainFederatedAveraging) {
  contract_.Init(Task(0.0, 1));
  RngStream rng(12);
  std::vector<fl::ParameterVector> ups;
  for (std::uint32_t i = 0; i < 5; ++i) {
    fl::ParameterVector u(6);
    for (std::size_t k = 0; k < 6; ++k) u[k] = rng.Uniform(-1, 1);
    ups.push_back(u);
    Submit({u, false, DeviceId{i}});
  }
  CloseRound();
  const auto want = fl::ApplyUpdate(Task(0.0, 1).initial_model, fl::FederatedAverage(ups));
  EXPECT_EQ(contract_.GetGlobalModel(), want);
}

// A 700-gas block fits Deploy but not an on-chain Evaluate of three models.
TEST_F(ContractTest, OversizedEvaluateWithoutFallbackFails) {
  ledger::Ledger small(700);
  small.CreateAccount(publisher_, 1000);
  small.CreateAccount(aggregator_, 0);
  for (std::uint64_t i = 0; i < 3; ++i) small.CreateAccount(Wallet(i), 0);
  Contract c(small, publisher_, aggregator_);
  c.Init(Task(0.5, 1));
  for (std::uint32_t i = 0; i < 3; ++i) c.SubmitModelUpdate(DeviceId{i}, Good(i), Wallet(i));
  EXPECT_SFL_ERROR(c.EvaluateLocalModel(data_), ErrorCode::kGasExhausted);
  EXPECT_FALSE(c.state().scored);
}

TEST_F(ContractTest, LocalModeUsesReportedScores) {
  ledger::Ledger small(700);
  small.CreateAccount(publisher_, 1000);
  small.CreateAccount(aggregator_, 0);
  for (std::uint64_t i = 0; i < 4; ++i) small.CreateAccount(Wallet(i), 0);
  Contract c(small, publisher_, aggregator_);
  TaskSpec t = Task(0.5, 2);
  t.allow_local_evaluation = true;
  c.Init(t);
  c.SubmitModelUpdate(DeviceId{0}, Good(0), Wallet(0), 0.9);
  c.SubmitModelUpdate(DeviceId{1}, Bad(1), Wallet(1), 0.4);
  c.SubmitModelUpdate(DeviceId{2}, Good(2), Wallet(2));
  c.EvaluateLocalModel(data_);
  EXPECT_EQ(c.state().mode, EvaluationMode::kLocal);
  EXPECT_TRUE(c.state().submissions.at(DeviceId{0}).accepted);
  EXPECT_FALSE(c.state().submissions.at(DeviceId{1}).accepted);
  EXPECT_FALSE(c.state().submissions.at(DeviceId{2}).accepted);
  EXPECT_DOUBLE_EQ(c.state().submissions.at(DeviceId{2}).quality, -1.0);
  c.AggregateModelUpdate();
  c.EvaluateModel(data_);
  // Local mode persists: later submissions need a passing local score.
  EXPECT_SFL_ERROR(c.SubmitModelUpdate(DeviceId{3}, Good(3), Wallet(3)),
                   ErrorCode::kLocalScoreRequired);
  EXPECT_SFL_ERROR(c.SubmitModelUpdate(DeviceId{3}, Good(3), Wallet(3), 0.3),
                   ErrorCode::kLocalScoreRequired);
  c.SubmitModelUpdate(DeviceId{3}, Good(3), Wallet(3), 0.7);
  EXPECT_EQ(Replay(c.events()), c.state());
}

TEST(MinerShardsTest, SplitsGroupsOrRows) {
  const std::vector<fl::Dataset> groups{Separable(1), Separable(2), Separable(3)};
  const auto by_group = MinerShards(groups, 2);
  ASSERT_EQ(by_group.size(), 2u);
  EXPECT_EQ(by_group[0].size(), 2u + 6u);
  EXPECT_EQ(by_group[1].size(), 4u);
  const auto by_row = MinerShards(std::vector<fl::Dataset>{Separable(2)}, 3);
  ASSERT_EQ(by_row.size(), 3u);
  EXPECT_EQ(by_row[0].size() + by_row[1].size() + by_row[2].size(), 4u);
  EXPECT_SFL_ERROR(MinerShards(std::vector<fl::Dataset>{Separable(1)}, 3), ErrorCode::kInfeasible);
  EXPECT_SFL_ERROR(MinerShards(std::vector<fl::Dataset>{}, 1), ErrorCode::kEmptyInput);
}

// Random call sequences: every call either succeeds or throws without
// touching state, events or the ledger queue, and the live state always
// equals the replayed log.
TEST(ContractPropertyTest, RandomCallSequences) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ledger::Ledger l;
    const auto pub = WalletAddress::Derive(seed, "publisher", 0);
    const auto agg = WalletAddress::Derive(seed, "aggregator", 0);
    l.CreateAccount(pub, 500);
    l.CreateAccount(agg, 0);
    for (std::uint64_t i = 0; i < 4; ++i) l.CreateAccount(Wallet(i), 0);
    const fl::Dataset data = Separable(4);
    const std::vector<fl::Dataset> groups{data};
    Contract c(l, pub, agg);
    TaskSpec t;
    t.initial_model = fl::GlobalModel{fl::ParameterVector(6), 0, fl::ModelSpec::Logistic(2, 2)};
    t.commitment = ledger::CommitTestData(groups, std::vector<std::uint8_t>{1});
    t.threshold = 0.5;
    t.reward_total = 90;
    t.max_rounds = 3;
    t.convergence_window = 0;
    RngStream rng(seed);
    const std::vector<std::function<void()>> ops{
        [&] { c.Init(t); },
        [&] {
          const auto id = static_cast<std::uint32_t>(rng.NextBelow(4));
          c.SubmitModelUpdate(DeviceId{id}, rng.NextBelow(2) ? Good(id) : Bad(id), Wallet(id));
        },
        [&] { c.DisclosureTestData(groups); },
        [&] { c.EvaluateLocalModel(data); },
        [&] { c.AggregateModelUpdate(); },
        [&] { c.EvaluateModel(data); },
        [&] { c.FinalizeContract(); },
        [&] { c.PostEvaluation(); },
    };
    for (int step = 0; step < 200; ++step) {
      const ContractState before = c.state();
      const std::size_t events_before = c.events().size();
      const std::size_t pending_before = l.pending_count();
      try {
        ops[rng.NextBelow(ops.size())]();
      } catch (const Error&) {
        ASSERT_EQ(c.state(), before);
        ASSERT_EQ(c.events().size(), events_before);
        ASSERT_EQ(l.pending_count(), pending_before);
      }
      ASSERT_EQ(Replay(c.events()), c.state());
      ASSERT_EQ(l.pending_count(), c.events().size());
      ASSERT_EQ(l.CirculatingTotal(), l.TotalSupply());
    }
  }
}

}  // namespace
}  // namespace sfl::contract
