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


#ifndef SFL_HARNESS_RUNNER_H_
#define SFL_HARNESS_RUNNER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfl/common/digest.h"
#include "sfl/contract/contract.h"
#include "sfl/harness/config.h"
#include "sfl/threat/threat.h"

namespace sfl::harness {

struct RoundMetrics {
  std::uint64_t round = 0;  // 1-based: completed aggregations
  double global_accuracy = 0.0;
  std::size_t submissions = 0;
  std::size_t qualified_count = 0;
  std::size_t rejected_count = 0;
  ledger::Gas gas_used = 0;
  // Mean quality over this round's submissions.
  double mean_quality = 0.0;
  double wall_time_ms = 0.0;
};

struct SubmissionRow {
  std::uint64_t round = 0;  // 1-based, the round the submission entered
  DeviceId device;
  threat::BehaviorKind behavior = threat::BehaviorKind::kWellBehaved;
  double quality = 0.0;
  bool accepted = false;
  std::optional<double> local_score;
};

struct RunResult {
  double threshold = 0.0;
  contract::PublishedSummary summary;
  std::vector<RoundMetrics> metrics;
  std::vector<SubmissionRow> submissions;
  // Devices that skipped a round after a failing local evaluation.
  std::size_t abstentions = 0;
  Digest final_block_hash{};
  contract::EvaluationMode final_mode = contract::EvaluationMode::kOnChain;
  std::vector<ledger::Block> chain;
  contract::ContractState final_state;
  std::vector<contract::ContractEvent> events;
  threat::PartitionPlan plan;
  std::vector<threat::BehaviorKind> behaviors;  // by device id
  ledger::Tokens total_supply = 0;
  ledger::Tokens circulating = 0;
};

struct AaStats {
  double aa = 0.0;  // mean of the final global accuracies
  double ha = 0.0;
  double ma = 0.0;
  std::vector<double> finals;
  // Mean submission quality over every round of every repeat.
  double quality_aa = 0.0;
  std::vector<std::uint64_t> seeds;
};

// One full task lifecycle: data split and commitment, population, init,
// then rounds of local training, LDP perturbation, submission, disclosure,
// miner evaluation, aggregation and global evaluation until the contract is
// finalization-eligible; then finalize and post. With aa-auto the threshold
// is calibrated first. When `out_dir` is set, writes metrics.csv,
// submissions.csv, timing.csv, summary.json, ledger.json and
// config.txt there. Errors propagate as sfl::Error.
RunResult Run(const RunConfig& config, const std::filesystem::path& out_dir = {});

// Runs the scenario `repeats` times with the threshold forced to 0 and
// seeds derived from config.seed (or all equal to it when `same_seed`).
// Each repeat writes its files to out_dir/repeat-<k> when `out_dir` is set,
// and aa.json summarizes them.
AaStats ComputeAaThreshold(const RunConfig& config, std::size_t repeats,
                           const std::filesystem::path& out_dir = {}, bool same_seed = false);

// The threshold aa-auto resolves to: the calibration runs use the config
// with aa-lambda as the attack strength and the defense off; the result is
// their mean submission quality.
double CalibrateThreshold(const RunConfig& config);

std::string MetricsCsv(const std::vector<RoundMetrics>& rows);
std::string SubmissionsCsv(const std::vector<SubmissionRow>& rows);
std::string SummaryJson(const RunResult& result);

// Final global_accuracy values of a metrics.csv, one per row, parsed back.
std::vector<double> ReadMetricsAccuracies(const std::filesystem::path& metrics_csv);

}  // namespace sfl::harness

#endif  // SFL_HARNESS_RUNNER_H_
