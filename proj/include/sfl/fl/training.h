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

#ifndef SFL_FL_TRAINING_H_
#define SFL_FL_TRAINING_H_

#include <cstddef>
#include <span>

#include "sfl/common/rng.h"
#include "sfl/fl/dataset.h"
#include "sfl/fl/model.h"
#include "sfl/fl/parameter_vector.h"

namespace sfl::fl {

struct TrainingConfig {
  std::size_t batch_size = 128;
  double learning_rate = 0.0001;
  std::size_t local_epochs = 1;
  double dropout_rate = 0.5;

  void Validate() const;
};

// Mini-batch SGD on `data` starting from the global parameters. Rows are
// reshuffled from `rng` at the start of every epoch; batches hold
// min(batch_size, |data|) rows, the last one possibly fewer. Returns the
// update delta (local - global).
ParameterVector LocalTrain(const GlobalModel& global, const Dataset& data,
                           const TrainingConfig& config, RngStream& rng);

// Component-wise mean. Each coordinate is summed in sorted order, so the
// result is bitwise independent of the order of `updates`.
ParameterVector FederatedAverage(std::span<const ParameterVector> updates);

// params + avg_update, round + 1.
GlobalModel ApplyUpdate(const GlobalModel& global, const ParameterVector& avg_update);

// True iff the last `window` accuracies span less than `tol`. A history
// shorter than the window is never converged.
bool HasConverged(std::span<const double> history, std::size_t window, double tol);

}  // namespace sfl::fl

#endif  // SFL_FL_TRAINING_H_
