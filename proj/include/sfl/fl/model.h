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

#ifndef SFL_FL_MODEL_H_
#define SFL_FL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sfl/common/rng.h"
#include "sfl/fl/dataset.h"
#include "sfl/fl/parameter_vector.h"

namespace sfl::fl {

enum class ModelKind { kLogistic, kMlp };

// A softmax classifier: multinomial logistic regression, or an MLP with tanh
// hidden layers. Parameters are stored layer by layer, each layer as a
// row-major (in x out) weight matrix followed by its out-sized bias.
struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  std::size_t input_dim = 0;
  std::size_t class_count = 0;
  std::vector<std::size_t> hidden;  // only for kMlp

  static ModelSpec Logistic(std::size_t input_dim, std::size_t class_count);
  static ModelSpec Mlp(std::size_t input_dim, std::vector<std::size_t> hidden,
                       std::size_t class_count);

  // Throws kInvalidArgument on zero dimensions or an MLP without hidden layers.
  void Validate() const;
  std::size_t ParameterCount() const;
  // input_dim, hidden..., class_count
  std::vector<std::size_t> LayerSizes() const;

  bool operator==(const ModelSpec&) const = default;
};

struct GlobalModel {
  ParameterVector params;
  std::uint64_t round = 0;
  ModelSpec spec;

  bool operator==(const GlobalModel&) const = default;
};

// Uniform in [-0.05, 0.05) from a stream keyed by `seed`; round 0.
GlobalModel InitGlobalModel(const ModelSpec& spec, std::uint64_t seed);

std::vector<double> Logits(const ParameterVector& params, const ModelSpec& spec,
                           std::span<const double> x);

// Argmax of the logits; ties go to the lowest class index.
std::size_t Predict(const ParameterVector& params, const ModelSpec& spec,
                    std::span<const double> x);

struct LossGradient {
  double loss = 0.0;
  ParameterVector gradient;
};

// Mean softmax cross-entropy over `rows` and its gradient. When
// dropout_rate > 0 (MLP only) each hidden unit is dropped per example with
// that probability, using inverted scaling; `dropout_rng` must then be set.
LossGradient ComputeLossGradient(const ParameterVector& params, const ModelSpec& spec,
                                 const Dataset& data, std::span<const std::size_t> rows,
                                 double dropout_rate = 0.0, RngStream* dropout_rng = nullptr);

// Mean cross-entropy over the whole dataset, no dropout.
double ComputeLoss(const ParameterVector& params, const ModelSpec& spec, const Dataset& data);

// Fraction of rows whose prediction equals the label.
double EvaluateAccuracy(const ParameterVector& params, const ModelSpec& spec,
                        const Dataset& data);

// Throws kDimensionMismatch unless params and data fit the spec.
void RequireCompatible(const ParameterVector& params, const ModelSpec& spec,
                       const Dataset& data);

}  // namespace sfl::fl

#endif  // SFL_FL_MODEL_H_
