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


#include "sfl/harness/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "sfl/common/error.h"

namespace sfl::harness {

namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  Fail(ErrorCode::kInvalidArgument,
       "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double ParseDouble(std::string_view key, std::string_view text) {
  const std::string v = Trim(text);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  if (v.size() > 5 && v.rfind("exp(", 0) == 0 && v.back() == ')') {
    return std::exp(ParseDouble(key, std::string_view(v).substr(4, v.size() - 5)));
  }
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || std::isnan(d)) BadValue(key, text);
  return d;
}

std::uint64_t ParseU64(std::string_view key, std::string_view text) {
  const std::string v = Trim(text);
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) BadValue(key, text);
  return out;
}

bool ParseBool(std::string_view key, std::string_view text) {
  const std::string v = Trim(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  BadValue(key, text);
}

std::vector<std::size_t> ParseSizes(std::string_view key, std::string_view text) {
  std::vector<std::size_t> out;
  std::string v = Trim(text);
  if (v.empty() || v == "none") return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseU64(key, item));
  return out;
}

// Shortest text that parses back to exactly `v`.
std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string JoinSizes(const std::vector<std::size_t>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct Key {
  std::function<void(RunConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SFL_DOUBLE_KEY(name, field)                                                        \
  {name,                                                                                   \
   {[](RunConfig& c, std::string_view k, std::string_view v) { c.field = ParseDouble(k, v); }, \
    [](const RunConfig& c) { return FormatDouble(c.field); }}}
#define SFL_SIZE_KEY(name, field)                                                          \
  {name,                                                                                   \
   {[](RunConfig& c, std::string_view k, std::string_view v) {                             \
      c.field = static_cast<decltype(c.field)>(ParseU64(k, v));                            \
    },                                                                                     \
    [](const RunConfig& c) { return std::to_string(c.field); }}}
#define SFL_BOOL_KEY(name, field)                                                          \
  {name,                                                                                   \
   {[](RunConfig& c, std::string_view k, std::string_view v) { c.field = ParseBool(k, v); }, \
    [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }}}

const std::map<std::string, Key>& KeyTable() {
  static const std::map<std::string, Key> table = {
      SFL_SIZE_KEY("seed", seed),
      SFL_SIZE_KEY("p", population),
      SFL_DOUBLE_KEY("mix-well", mix.well_behaved),
      SFL_DOUBLE_KEY("mix-malicious", mix.malicious),
      SFL_DOUBLE_KEY("mix-unreliable", mix.unreliable),
      SFL_DOUBLE_KEY("lambda", lambda),
      SFL_DOUBLE_KEY("emd", emd),
      SFL_BOOL_KEY("rational", rational),
      {"model",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = Trim(v);
          if (s == "logistic") {
            c.model = fl::ModelKind::kLogistic;
          } else if (s == "mlp") {
            c.model = fl::ModelKind::kMlp;
          } else {
            BadValue(k, v);
          }
        },
        [](const RunConfig& c) {
          return std::string(c.model == fl::ModelKind::kMlp ? "mlp" : "logistic");
        }}},
      {"hidden",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.hidden = ParseSizes(k, v); },
        [](const RunConfig& c) { return JoinSizes(c.hidden); }}},
      SFL_SIZE_KEY("batch-size", training.batch_size),
      SFL_DOUBLE_KEY("learning-rate", training.learning_rate),
      SFL_SIZE_KEY("local-epochs", training.local_epochs),
      SFL_DOUBLE_KEY("dropout", training.dropout_rate),
      SFL_DOUBLE_KEY("epsilon", epsilon),
      SFL_DOUBLE_KEY("delta", delta),
      SFL_DOUBLE_KEY("sensitivity", sensitivity),
      {"sigma-override",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          if (Trim(v) == "none") {
            c.sigma_override.reset();
          } else {
            c.sigma_override = ParseDouble(k, v);
          }
        },
        [](const RunConfig& c) {
          return c.sigma_override ? FormatDouble(*c.sigma_override) : std::string("none");
        }}},
      {"threshold",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          if (Trim(v) == "aa-auto") {
            c.aa_auto = true;
          } else {
            c.aa_auto = false;
            c.threshold = ParseDouble(k, v);
          }
        },
        [](const RunConfig& c) {
          return c.aa_auto ? std::string("aa-auto") : FormatDouble(c.threshold);
        }}},
      SFL_BOOL_KEY("aa-auto", aa_auto),
      SFL_SIZE_KEY("aa-repeats", aa_repeats),
      SFL_DOUBLE_KEY("aa-lambda", aa_lambda),
      {"reward",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::uint64_t r = ParseU64(k, v);
          if (r > static_cast<std::uint64_t>(std::numeric_limits<ledger::Tokens>::max())) {
            BadValue(k, v);
          }
          c.reward = static_cast<ledger::Tokens>(r);
        },
        [](const RunConfig& c) { return std::to_string(c.reward); }}},
      SFL_SIZE_KEY("rounds", max_rounds),
      SFL_SIZE_KEY("gas-limit", gas_limit),
      SFL_SIZE_KEY("miners", miners),
      SFL_BOOL_KEY("local-evaluation", local_evaluation),
      SFL_SIZE_KEY("convergence-window", convergence_window),
      SFL_DOUBLE_KEY("convergence-tol", convergence_tol),
      SFL_BOOL_KEY("disclose", disclose),
      {"dataset",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = Trim(v);
          if (s == "synthetic") {
            c.dataset = DatasetSource::kSynthetic;
          } else if (s == "idx") {
            c.dataset = DatasetSource::kIdx;
          } else {
            BadValue(k, v);
          }
        },
        [](const RunConfig& c) {
          return std::string(c.dataset == DatasetSource::kIdx ? "idx" : "synthetic");
        }}},
      {"idx-images",
       {[](RunConfig& c, std::string_view, std::string_view v) { c.idx_images = Trim(v); },
        [](const RunConfig& c) { return c.idx_images; }}},
      {"idx-labels",
       {[](RunConfig& c, std::string_view, std::string_view v) { c.idx_labels = Trim(v); },
        [](const RunConfig& c) { return c.idx_labels; }}},
      SFL_SIZE_KEY("synthetic-classes", synthetic_classes),
      SFL_SIZE_KEY("synthetic-per-class", synthetic_per_class),
      SFL_SIZE_KEY("synthetic-dim", synthetic_dim),
      SFL_DOUBLE_KEY("synthetic-separation", synthetic_separation),
      SFL_DOUBLE_KEY("test-fraction", test_fraction),
      SFL_DOUBLE_KEY("fallback-fraction", fallback_fraction),
      SFL_SIZE_KEY("test-groups", test_groups),
      SFL_SIZE_KEY("shard-size", shard_size),
  };
  return table;
}

#undef SFL_DOUBLE_KEY
#undef SFL_SIZE_KEY
#undef SFL_BOOL_KEY

std::string NormalizeKey(std::string_view key) {
  std::string k = Trim(key);
  for (char& ch : k) {
    if (ch == '_') ch = '-';
  }
  return k;
}

}  // namespace

void RunConfig::Validate() const {
  auto check = [](bool ok, const char* key, const char* what) {
    Require(ok, ErrorCode::kInvalidArgument, std::string(key) + ": " + what);
  };
  check(population >= 1, "p", "must be at least 1");
  check(lambda >= 0.0 && lambda <= 1.0, "lambda", "must lie in [0, 1]");
  check(aa_lambda >= 0.0 && aa_lambda <= 1.0, "aa-lambda", "must lie in [0, 1]");
  check(emd >= 0.0 && emd <= 2.0, "emd", "must lie in [0, 2]");
  check(model == fl::ModelKind::kLogistic || !hidden.empty(), "hidden",
        "an mlp needs at least one hidden layer");
  check(training.batch_size >= 1, "batch-size", "must be at least 1");
  check(std::isfinite(training.learning_rate) && training.learning_rate > 0.0, "learning-rate",
        "must be positive");
  check(training.local_epochs >= 1, "local-epochs", "must be at least 1");
  check(training.dropout_rate >= 0.0 && training.dropout_rate < 1.0, "dropout",
        "must lie in [0, 1)");
  check(std::isfinite(epsilon) && epsilon > 0.0, "epsilon", "must be positive");
  check(delta > 0.0 && delta < 1.0, "delta", "must lie in (0, 1)");
  check(sensitivity > 0.0, "sensitivity", "must be positive");
  check(sigma_override || std::isfinite(sensitivity), "sensitivity",
        "may only be inf together with sigma-override");
  check(!sigma_override || (std::isfinite(*sigma_override) && *sigma_override >= 0.0),
        "sigma-override", "must be finite and >= 0");
  check(threshold >= 0.0 && threshold <= 1.0, "threshold", "must lie in [0, 1]");
  check(!aa_auto || aa_repeats >= 2, "aa-repeats", "must be at least 2");
  check(reward > 0, "reward", "must be positive");
  check(max_rounds >= 1, "rounds", "must be at least 1");
  check(gas_limit >= 1, "gas-limit", "must be positive");
  check(miners >= 1, "miners", "must be at least 1");
  check(convergence_window != 1, "convergence-window", "must be 0 or at least 2");
  check(std::isfinite(convergence_tol) && convergence_tol >= 0.0, "convergence-tol",
        "must be finite and >= 0");
  check(dataset == DatasetSource::kSynthetic || (!idx_images.empty() && !idx_labels.empty()),
        "idx-images", "idx datasets need both idx-images and idx-labels");
  check(synthetic_classes >= 2, "synthetic-classes", "must be at least 2");
  check(synthetic_per_class >= 1, "synthetic-per-class", "must be at least 1");
  check(synthetic_dim >= 1, "synthetic-dim", "must be at least 1");
  check(std::isfinite(synthetic_separation) && synthetic_separation >= 0.0,
        "synthetic-separation", "must be finite and >= 0");
  check(test_fraction > 0.0 && fallback_fraction >= 0.0 && test_fraction + fallback_fraction < 1.0,
        "test-fraction", "test and fallback fractions must leave training rows");
  check(test_groups >= 1, "test-groups", "must be at least 1");
  threat::MixCounts(population, mix);
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : KeyTable()) k.push_back(name);
    return k;
  }();
  return keys;
}

void SetConfigValue(RunConfig& config, std::string_view key, std::string_view value) {
  const std::string k = NormalizeKey(key);
  const auto it = KeyTable().find(k);
  Require(it != KeyTable().end(), ErrorCode::kInvalidArgument,
          "unknown config key '" + std::string(key) + "'");
  it->second.set(config, k, value);
}

void ApplyConfigText(RunConfig& config, std::string_view text) {
  std::stringstream ss{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    Require(eq != std::string::npos, ErrorCode::kParse,
            "config line " + std::to_string(line_no) + ": expected key = value");
    SetConfigValue(config, std::string_view(line).substr(0, eq),
                   std::string_view(line).substr(eq + 1));
  }
}

void ApplyConfigFile(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ApplyConfigText(config, ss.str());
}

std::string RenderConfig(const RunConfig& config) {
  std::string out;
  for (const auto& [name, key] : KeyTable()) {
    // aa-auto is folded into threshold.
    if (name == "aa-auto") continue;
    out += name + " = " + key.get(config) + "\n";
  }
  return out;
}

}  // namespace sfl::harness
