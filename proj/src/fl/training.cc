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

#include "sfl/fl/training.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "sfl/common/error.h"

namespace sfl::fl {

void TrainingConfig::Validate() const {
  Require(batch_size > 0, ErrorCode::kInvalidArgument, "batch size must be positive");
  Require(learning_rate >= 0.0, ErrorCode::kInvalidArgument, "learning rate must be >= 0");
  Require(local_epochs > 0, ErrorCode::kInvalidArgument, "local epochs must be positive");
  Require(dropout_rate >= 0.0 && dropout_rate < 1.0, ErrorCode::kInvalidArgument,
          "dropout rate must be in [0, 1)");
}

ParameterVector LocalTrain(const GlobalModel& global, const Dataset& data,
                           const TrainingConfig& config, RngStream& rng) {
  config.Validate();
  Require(!data.empty(), ErrorCode::kEmptyInput, "local training on an empty dataset");
  RequireCompatible(global.params, global.spec, data);

  ParameterVector local = global.params;
  std::vector<std::size_t> order(data.size());
  const std::size_t batch = std::min(config.batch_size, data.size());
  for (std::size_t epoch = 0; epoch < config.local_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      std::size_t end = std::min(start + batch, order.size());
      auto rows = std::span<const std::size_t>(order).subspan(start, end - start);
      auto lg = ComputeLossGradient(local, global.spec, data, rows, config.dropout_rate, &rng);
      for (std::size_t i = 0; i < local.dim(); ++i) {
        local[i] -= config.learning_rate * lg.gradient[i];
      }
    }
  }
  Require(local.AllFinite(), ErrorCode::kNonFinite, "local training diverged");
  return local - global.params;
}

ParameterVector FederatedAverage(std::span<const ParameterVector> updates) {
  Require(!updates.empty(), ErrorCode::kEmptyInput, "averaging an empty update list");
  const std::size_t dim = updates.front().dim();
  for (const auto& u : updates) RequireSameDim(updates.front(), u);

  ParameterVector mean(dim);
  std::vector<double> column(updates.size());
  const double count = static_cast<double>(updates.size());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < updates.size(); ++k) column[k] = updates[k][i];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    mean[i] = sum / count;
  }
  Require(mean.AllFinite(), ErrorCode::kNonFinite, "non-finite average");
  return mean;
}

GlobalModel ApplyUpdate(const GlobalModel& global, const ParameterVector& avg_update) {
  GlobalModel next{global.params + avg_update, global.round + 1, global.spec};
  Require(next.params.AllFinite(), ErrorCode::kNonFinite, "non-finite global model");
  return next;
}

bool HasConverged(std::span<const double> history, std::size_t window, double tol) {
  Require(window >= 2, ErrorCode::kInvalidArgument, "convergence window must be >= 2");
  if (history.size() < window) return false;
  auto tail = history.last(window);
  auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return *hi - *lo < tol;
}

}  // namespace sfl::fl
