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


#include "sfl/harness/runner.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sfl/common/error.h"
#include "sfl/common/rng.h"
#include "sfl/fl/training.h"
#include "sfl/harness/data.h"
#include "sfl/ldp/privacy.h"
#include "sfl/ledger/commitment.h"
#include "sfl/ledger/dump.h"
#include "sfl/ledger/ledger.h"

namespace sfl::harness {

namespace {

using nlohmann::json;

std::string F17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  Require(out.good(), ErrorCode::kIo, "write failed for " + path.string());
}

fl::Dataset LoadData(const RunConfig& c) {
  if (c.dataset == DatasetSource::kIdx) return LoadIdx(c.idx_images, c.idx_labels);
  return GenerateSynthetic(c.synthetic_classes, c.synthetic_per_class, c.synthetic_dim,
                           c.synthetic_separation, DeriveSeed(c.seed, "dataset", 0));
}

struct Split {
  std::vector<fl::Dataset> test_groups;
  fl::Dataset test_all;
  fl::Dataset fallback;
  fl::Dataset pool;
};

// Shuffles the rows once, then carves off the committed test rows (dealt
// round-robin into groups), the aggregator's fallback rows, and the
// training pool, in that order.
Split SplitData(const fl::Dataset& data, const RunConfig& c) {
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  RngStream rng = RngStream::Derive(c.seed, "split", 0);
  rng.Shuffle(std::span<std::size_t>(order));
  const auto n = static_cast<double>(data.size());
  const auto n_test = static_cast<std::size_t>(std::llround(n * c.test_fraction));
  const auto n_fallback = static_cast<std::size_t>(std::llround(n * c.fallback_fraction));
  Require(n_test >= c.test_groups, ErrorCode::kInfeasible,
          "fewer test rows than test groups");
  Require(n_test + n_fallback < data.size(), ErrorCode::kInfeasible, "no training rows left");

  Split s;
  std::vector<std::vector<std::size_t>> groups(c.test_groups);
  for (std::size_t i = 0; i < n_test; ++i) groups[i % c.test_groups].push_back(order[i]);
  for (const auto& g : groups) s.test_groups.push_back(data.Subset(g));
  s.test_all = fl::Concat(s.test_groups);
  const auto begin = order.begin();
  s.fallback = data.Subset(std::vector<std::size_t>(
      begin + static_cast<std::ptrdiff_t>(n_test),
      begin + static_cast<std::ptrdiff_t>(n_test + n_fallback)));
  s.pool = data.Subset(std::vector<std::size_t>(
      begin + static_cast<std::ptrdiff_t>(n_test + n_fallback), order.end()));
  return s;
}

ldp::PrivacyParams MakePrivacy(const RunConfig& c) {
  if (c.sigma_override) {
    return ldp::PrivacyParams::WithSigmaOverride(c.epsilon, c.delta, c.sensitivity,
                                                 *c.sigma_override);
  }
  return ldp::PrivacyParams::Create(c.epsilon, c.delta, c.sensitivity);
}

double Millis(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

std::string TimingCsv(const std::vector<RoundMetrics>& rows) {
  std::string out = "round,wall_time_ms\n";
  for (const auto& r : rows) out += std::to_string(r.round) + "," + F17(r.wall_time_ms) + "\n";
  return out;
}

}  // namespace

std::string MetricsCsv(const std::vector<RoundMetrics>& rows) {
  std::string out =
      "round,global_accuracy,submissions,qualified_count,rejected_count,gas_used,mean_quality\n";
  for (const auto& r : rows) {
    out += std::to_string(r.round) + "," + F17(r.global_accuracy) + "," +
           std::to_string(r.submissions) + "," + std::to_string(r.qualified_count) + "," +
           std::to_string(r.rejected_count) + "," + std::to_string(r.gas_used) + "," +
           F17(r.mean_quality) + "\n";
  }
  return out;
}

std::string SubmissionsCsv(const std::vector<SubmissionRow>& rows) {
  std::string out = "round,device,behavior,quality,accepted,local_score\n";
  for (const auto& r : rows) {
    out += std::to_string(r.round) + "," + std::to_string(r.device.value) + "," +
           threat::BehaviorName(r.behavior) + "," + F17(r.quality) + "," +
           (r.accepted ? "1" : "0") + "," + (r.local_score ? F17(*r.local_score) : "") + "\n";
  }
  return out;
}

std::string SummaryJson(const RunResult& r) {
  json lines = json::array();
  for (const auto& l : r.summary.payouts.lines) {
    lines.push_back(json{{"device", l.device.value},
                         {"payee", l.payee.Hex()},
                         {"shares", l.shares},
                         {"amount", l.amount}});
  }
  json doc{
      {"final_accuracy", r.summary.final_accuracy},
      {"rounds", r.summary.rounds},
      {"qualified_per_round", r.summary.qualified_per_round},
      {"threshold", r.threshold},
      {"evaluation_mode",
       r.final_mode == contract::EvaluationMode::kLocal ? "local" : "on_chain"},
      {"abstentions", r.abstentions},
      {"payouts",
       json{{"per_share", r.summary.payouts.per_share},
            {"refund", r.summary.payouts.refund},
            {"lines", std::move(lines)}}},
      {"summary_hash", ToHex(r.summary.hash)},
      {"final_block_hash", ToHex(r.final_block_hash)},
      {"phase", contract::PhaseName(r.final_state.phase)},
      {"total_supply", r.total_supply},
      {"circulating", r.circulating},
  };
  return doc.dump(2) + "\n";
}

RunResult Run(const RunConfig& config, const std::filesystem::path& out_dir) {
  config.Validate();
  RunResult result;
  result.threshold = config.aa_auto ? CalibrateThreshold(config) : config.threshold;
  const double theta = result.threshold;

  const fl::Dataset data = LoadData(config);
  const Split split = SplitData(data, config);

  threat::PopulationConfig pc;
  pc.seed = config.seed;
  pc.population = config.population;
  pc.mix = config.mix;
  pc.lambda = config.lambda;
  pc.emd = config.emd;
  pc.shard_size = config.shard_size;
  pc.rational = config.rational;
  threat::Population population = threat::BuildPopulation(pc, split.pool);
  result.plan = population.plan;
  for (const auto& p : population.participants) result.behaviors.push_back(p.behavior.kind);

  ledger::Ledger chain(config.gas_limit);
  const auto publisher = ledger::WalletAddress::Derive(config.seed, "publisher", 0);
  const auto aggregator = ledger::WalletAddress::Derive(config.seed, "aggregator", 0);
  chain.CreateAccount(publisher, config.reward);
  chain.CreateAccount(aggregator, 0);
  for (const auto& p : population.participants) chain.CreateAccount(p.wallet, 0);

  const fl::ModelSpec spec =
      config.model == fl::ModelKind::kMlp
          ? fl::ModelSpec::Mlp(data.input_dim(), config.hidden, data.class_count())
          : fl::ModelSpec::Logistic(data.input_dim(), data.class_count());

  ByteWriter index_seed;
  index_seed.U64(DeriveSeed(config.seed, "test-index", 0));

  contract::TaskSpec task;
  task.initial_model = fl::InitGlobalModel(spec, DeriveSeed(config.seed, "init", 0));
  task.commitment = ledger::CommitTestData(split.test_groups, index_seed.bytes());
  task.threshold = theta;
  task.reward_total = config.reward;
  task.max_rounds = config.max_rounds;
  task.privacy = MakePrivacy(config);
  task.miner_count = config.miners;
  task.convergence_window = config.convergence_window;
  task.convergence_tol = config.convergence_tol;
  task.allow_local_evaluation = config.local_evaluation;

  contract::Contract sc(chain, publisher, aggregator);
  sc.Init(task);
  chain.MineAll();

  for (std::uint64_t t = 0;; ++t) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t first_event = sc.events().size();
    const fl::GlobalModel global = sc.GetGlobalModel();
    const bool local_mode = sc.state().mode == contract::EvaluationMode::kLocal;
    const std::uint64_t round_seed = DeriveSeed(config.seed, "round", t);

    for (const auto& p : population.participants) {
      RngStream train_rng = RngStream::Derive(round_seed, "train", p.device_id.value);
      RngStream noise_rng = RngStream::Derive(round_seed, "noise", p.device_id.value);
      const fl::ParameterVector delta =
          fl::LocalTrain(global, p.local_data, config.training, train_rng);
      const ldp::PerturbedUpdate update = ldp::Perturb(delta, task.privacy, noise_rng,
                                                       p.device_id);
      std::optional<double> score;
      if (p.rational || config.local_evaluation) {
        score = contract::LocalEvaluate(update, global, p.local_data);
      }
      // Local evaluation doubles as the pre-filter: with it enabled, or once
      // the contract has fallen back to it, devices only submit passing updates.
      if ((p.rational || config.local_evaluation || local_mode) && !(score && *score >= theta)) {
        ++result.abstentions;
        continue;
      }
      sc.SubmitModelUpdate(p.device_id, update, p.wallet, score);
    }

    if (config.disclose) sc.DisclosureTestData(split.test_groups);
    sc.EvaluateLocalModel(split.fallback);

    RoundMetrics m;
    m.round = t + 1;
    double quality_sum = 0.0;
    for (const auto& [id, rec] : sc.state().submissions) {
      SubmissionRow row;
      row.round = t + 1;
      row.device = id;
      row.behavior = result.behaviors[id.value];
      row.quality = rec.quality;
      row.accepted = rec.accepted;
      row.local_score = rec.local_score;
      result.submissions.push_back(row);
      quality_sum += rec.quality;
      ++m.submissions;
      if (rec.accepted) ++m.qualified_count;
    }
    m.rejected_count = m.submissions - m.qualified_count;
    m.mean_quality = quality_sum / static_cast<double>(m.submissions);

    sc.AggregateModelUpdate();
    m.global_accuracy = sc.EvaluateModel(split.test_all);
    chain.MineAll();
    for (std::size_t e = first_event; e < sc.events().size(); ++e) {
      m.gas_used += sc.events()[e].tx.gas_used;
    }
    m.wall_time_ms = Millis(std::chrono::steady_clock::now() - start);
    result.metrics.push_back(m);
    if (sc.state().finalization_eligible) break;
  }

  sc.FinalizeContract();
  result.summary = sc.PostEvaluation();
  chain.MineAll();

  result.final_state = sc.state();
  result.final_mode = sc.state().mode;
  result.events.assign(sc.events().begin(), sc.events().end());
  result.chain.assign(chain.chain().begin(), chain.chain().end());
  result.final_block_hash = chain.TipHash();
  result.total_supply = chain.TotalSupply();
  result.circulating = chain.CirculatingTotal();

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    WriteText(out_dir / "metrics.csv", MetricsCsv(result.metrics));
    WriteText(out_dir / "submissions.csv", SubmissionsCsv(result.submissions));
    WriteText(out_dir / "timing.csv", TimingCsv(result.metrics));
    WriteText(out_dir / "summary.json", SummaryJson(result));
    WriteText(out_dir / "config.txt", RenderConfig(config));
    ledger::WriteLedgerDump(out_dir / "ledger.json", result.chain);
  }
  return result;
}

AaStats ComputeAaThreshold(const RunConfig& config, std::size_t repeats,
                           const std::filesystem::path& out_dir, bool same_seed) {
  Require(repeats >= 2, ErrorCode::kInvalidArgument, "AA needs at least 2 repeats");
  AaStats stats;
  double quality_sum = 0.0;
  std::size_t quality_n = 0;
  for (std::size_t k = 0; k < repeats; ++k) {
    RunConfig c = config;
    c.aa_auto = false;
    c.threshold = 0.0;
    c.seed = same_seed ? config.seed : DeriveSeed(config.seed, "aa-repeat", k);
    const RunResult r =
        Run(c, out_dir.empty() ? out_dir : out_dir / ("repeat-" + std::to_string(k)));
    stats.seeds.push_back(c.seed);
    stats.finals.push_back(r.summary.final_accuracy);
    for (const auto& s : r.submissions) {
      if (s.quality < 0.0) continue;  // unscored
      quality_sum += s.quality;
      ++quality_n;
    }
  }
  double sum = 0.0;
  for (double f : stats.finals) sum += f;
  stats.aa = sum / static_cast<double>(repeats);
  stats.ha = *std::max_element(stats.finals.begin(), stats.finals.end());
  stats.ma = *std::min_element(stats.finals.begin(), stats.finals.end());
  stats.quality_aa = quality_n == 0 ? 0.0 : quality_sum / static_cast<double>(quality_n);

  if (!out_dir.empty()) {
    json doc{{"repeats", repeats},
             {"aa", stats.aa},
             {"ha", stats.ha},
             {"ma", stats.ma},
             {"quality_aa", stats.quality_aa},
             {"finals", stats.finals},
             {"seeds", stats.seeds}};
    WriteText(out_dir / "aa.json", doc.dump(2) + "\n");
  }
  return stats;
}

double CalibrateThreshold(const RunConfig& config) {
  RunConfig c = config;
  c.aa_auto = false;
  c.threshold = 0.0;
  c.lambda = config.aa_lambda;
  return ComputeAaThreshold(c, config.aa_repeats).quality_aa;
}

std::vector<double> ReadMetricsAccuracies(const std::filesystem::path& metrics_csv) {
  std::ifstream in(metrics_csv);
  Require(in.good(), ErrorCode::kIo, "cannot open " + metrics_csv.string());
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)) && line.rfind("round,global_accuracy", 0) == 0,
          ErrorCode::kParse, "missing metrics header");
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    Require(a != std::string::npos && b != std::string::npos, ErrorCode::kParse,
            "malformed metrics row");
    out.push_back(std::strtod(line.substr(a + 1, b - a - 1).c_str(), nullptr));
  }
  return out;
}

}  // namespace sfl::harness
