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


#ifndef SFL_HARNESS_CONFIG_H_
#define SFL_HARNESS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfl/fl/model.h"
#include "sfl/fl/training.h"
#include "sfl/ledger/chain.h"
#include "sfl/threat/threat.h"

namespace sfl::harness {

enum class DatasetSource { kSynthetic, kIdx };

struct RunConfig {
  std::uint64_t seed = 1;

  // Population.
  std::size_t population = 10;
  threat::Mix mix;
  double lambda = 0.2;
  double emd = 1.5;
  bool rational = false;

  // Model and local training.
  fl::ModelKind model = fl::ModelKind::kLogistic;
  std::vector<std::size_t> hidden;
  fl::TrainingConfig training;

  // Privacy.
  double epsilon = 8.0;
  double delta = 0.006737946999085467;  // e^-5
  double sensitivity = 1.0;             // +inf disables clipping
  std::optional<double> sigma_override;

  // Acceptance threshold: a fixed value, or calibrated from repeated
  // defense-off runs (aa-auto).
  double threshold = 0.0;
  bool aa_auto = false;
  std::size_t aa_repeats = 10;
  // Attack strength assumed by the calibration runs.
  double aa_lambda = 0.05;

  // Contract and chain.
  ledger::Tokens reward = 1'000'000;
  std::size_t max_rounds = 10;
  ledger::Gas gas_limit = ledger::gas::kDefaultBlockLimit;
  std::size_t miners = 3;
  bool local_evaluation = false;
  std::size_t convergence_window = 5;
  double convergence_tol = 0.002;
  bool disclose = true;

  // Data.
  DatasetSource dataset = DatasetSource::kSynthetic;
  std::string idx_images;
  std::string idx_labels;
  std::size_t synthetic_classes = 10;
  std::size_t synthetic_per_class = 200;
  std::size_t synthetic_dim = 20;
  double synthetic_separation = 3.0;
  double test_fraction = 0.2;
  double fallback_fraction = 0.05;
  std::size_t test_groups = 10;
  // Rows per device; 0 splits the training pool evenly.
  std::size_t shard_size = 0;

  // Throws kInvalidArgument naming the offending key.
  void Validate() const;
};

// Every configuration key, in the dashed form used by both the config file
// and the command line.
const std::vector<std::string>& ConfigKeys();

// Sets one key from its text form. Underscores in `key` are treated as
// dashes. Numbers accept "inf" and "exp(x)". Throws kInvalidArgument for
// unknown keys or malformed values.
void SetConfigValue(RunConfig& config, std::string_view key, std::string_view value);

// Applies a "key = value" text document: one pair per line, '#' starts a
// comment, blank lines are ignored.
void ApplyConfigText(RunConfig& config, std::string_view text);
void ApplyConfigFile(RunConfig& config, const std::filesystem::path& path);

// Canonical "key = value" rendering of every key; ApplyConfigText on the
// result reproduces the config.
std::string RenderConfig(const RunConfig& config);

}  // namespace sfl::harness

#endif  // SFL_HARNESS_CONFIG_H_
