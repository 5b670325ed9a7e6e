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

#include "sfl/fl/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sfl/common/error.h"

namespace sfl::fl {

ModelSpec ModelSpec::Logistic(std::size_t input_dim, std::size_t class_count) {
  ModelSpec spec{ModelKind::kLogistic, input_dim, class_count, {}};
  spec.Validate();
  return spec;
}

ModelSpec ModelSpec::Mlp(std::size_t input_dim, std::vector<std::size_t> hidden,
                         std::size_t class_count) {
  ModelSpec spec{ModelKind::kMlp, input_dim, class_count, std::move(hidden)};
  spec.Validate();
  return spec;
}

void ModelSpec::Validate() const {
  Require(input_dim > 0, ErrorCode::kInvalidArgument, "model input_dim must be positive");
  Require(class_count > 0, ErrorCode::kInvalidArgument, "model class_count must be positive");
  if (kind == ModelKind::kMlp) {
    Require(!hidden.empty(), ErrorCode::kInvalidArgument, "mlp needs at least one hidden layer");
    for (std::size_t h : hidden) {
      Require(h > 0, ErrorCode::kInvalidArgument, "mlp hidden sizes must be positive");
    }
  } else {
    Require(hidden.empty(), ErrorCode::kInvalidArgument, "logistic model takes no hidden layers");
  }
}

std::vector<std::size_t> ModelSpec::LayerSizes() const {
  std::vector<std::size_t> sizes{input_dim};
  if (kind == ModelKind::kMlp) sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(class_count);
  return sizes;
}

std::size_t ModelSpec::ParameterCount() const {
  auto sizes = LayerSizes();
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) count += sizes[l] * sizes[l + 1] + sizes[l + 1];
  return count;
}

GlobalModel InitGlobalModel(const ModelSpec& spec, std::uint64_t seed) {
  spec.Validate();
  RngStream rng(seed);
  ParameterVector params(spec.ParameterCount());
  for (double& v : params.mutable_values()) v = rng.Uniform(-0.05, 0.05);
  return GlobalModel{std::move(params), 0, spec};
}

namespace {

struct Layer {
  std::size_t in;
  std::size_t out;
  std::size_t weight_offset;
  std::size_t bias_offset;
};

std::vector<Layer> Layers(const ModelSpec& spec) {
  auto sizes = spec.LayerSizes();
  std::vector<Layer> layers;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Layer layer{sizes[l], sizes[l + 1], offset, offset + sizes[l] * sizes[l + 1]};
    offset = layer.bias_offset + layer.out;
    layers.push_back(layer);
  }
  return layers;
}

// out = in * W + b for one layer.
void Affine(std::span<const double> params, const Layer& layer, std::span<const double> in,
            std::span<double> out) {
  std::copy_n(params.begin() + layer.bias_offset, layer.out, out.begin());
  for (std::size_t i = 0; i < layer.in; ++i) {
    const double xi = in[i];
    if (xi == 0.0) continue;
    const double* w = params.data() + layer.weight_offset + i * layer.out;
    for (std::size_t j = 0; j < layer.out; ++j) out[j] += xi * w[j];
  }
}

// Numerically stable log-softmax normaliser.
double LogSumExp(std::span<const double> z) {
  double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

void RequireCompatible(const ParameterVector& params, const ModelSpec& spec,
                       const Dataset& data) {
  Require(params.dim() == spec.ParameterCount(), ErrorCode::kDimensionMismatch,
          "params dim " + std::to_string(params.dim()) + " != model parameter count " +
              std::to_string(spec.ParameterCount()));
  Require(data.input_dim() == spec.input_dim, ErrorCode::kDimensionMismatch,
          "data input_dim " + std::to_string(data.input_dim()) + " != model input_dim " +
              std::to_string(spec.input_dim));
  Require(data.class_count() == spec.class_count, ErrorCode::kDimensionMismatch,
          "data class_count != model class_count");
}

std::vector<double> Logits(const ParameterVector& params, const ModelSpec& spec,
                           std::span<const double> x) {
  Require(params.dim() == spec.ParameterCount() && x.size() == spec.input_dim,
          ErrorCode::kDimensionMismatch, "logits: shape mismatch");
  auto layers = Layers(spec);
  std::vector<double> act(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    next.assign(layers[l].out, 0.0);
    Affine(params.values(), layers[l], act, next);
    if (l + 1 < layers.size()) {
      for (double& v : next) v = std::tanh(v);
    }
    act.swap(next);
  }
  return act;
}

std::size_t Predict(const ParameterVector& params, const ModelSpec& spec,
                    std::span<const double> x) {
  auto z = Logits(params, spec, x);
  // max_element returns the first maximum, i.e. the lowest index on ties.
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

LossGradient ComputeLossGradient(const ParameterVector& params, const ModelSpec& spec,
                                 const Dataset& data, std::span<const std::size_t> rows,
                                 double dropout_rate, RngStream* dropout_rng) {
  RequireCompatible(params, spec, data);
  Require(!rows.empty(), ErrorCode::kEmptyInput, "gradient over an empty batch");
  Require(dropout_rate >= 0.0 && dropout_rate < 1.0, ErrorCode::kInvalidArgument,
          "dropout rate must be in [0, 1)");
  const bool dropout = spec.kind == ModelKind::kMlp && dropout_rate > 0.0;
  Require(!dropout || dropout_rng != nullptr, ErrorCode::kInvalidArgument,
          "dropout requires an rng stream");
  const double keep_scale = dropout ? 1.0 / (1.0 - dropout_rate) : 1.0;

  auto layers = Layers(spec);
  const std::size_t depth = layers.size();
  std::span<const double> w = params.values();
  LossGradient result{0.0, ParameterVector(params.dim())};
  std::span<double> g = result.gradient.mutable_values();

  // acts[l] is the input to layer l; hidden layer l has tanh output
  // tanhs[l] and dropout scale masks[l].
  std::vector<std::vector<double>> acts(depth);
  std::vector<std::vector<double>> tanhs(depth);
  std::vector<std::vector<double>> masks(depth);
  std::vector<double> logits;
  std::vector<double> delta;
  std::vector<double> prev_delta;

  for (std::size_t r : rows) {
    Require(r < data.size(), ErrorCode::kInvalidArgument, "batch row out of range");
    acts[0].assign(data.row(r).begin(), data.row(r).end());
    for (std::size_t l = 0; l < depth; ++l) {
      std::vector<double> out(layers[l].out, 0.0);
      Affine(w, layers[l], acts[l], out);
      if (l + 1 < depth) {
        masks[l].assign(out.size(), 1.0);
        tanhs[l].resize(out.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
          tanhs[l][j] = std::tanh(out[j]);
          if (dropout) masks[l][j] = dropout_rng->NextDouble() < dropout_rate ? 0.0 : keep_scale;
          out[j] = tanhs[l][j] * masks[l][j];
        }
        acts[l + 1] = std::move(out);
      } else {
        logits = std::move(out);
      }
    }

    const Label y = data.label(r);
    const double lse = LogSumExp(logits);
    result.loss += lse - logits[y];
    delta.resize(logits.size());
    for (std::size_t j = 0; j < logits.size(); ++j) delta[j] = std::exp(logits[j] - lse);
    delta[y] -= 1.0;

    for (std::size_t l = depth; l-- > 0;) {
      const Layer& layer = layers[l];
      const auto& in = acts[l];
      for (std::size_t i = 0; i < layer.in; ++i) {
        const double xi = in[i];
        if (xi == 0.0) continue;
        double* gw = g.data() + layer.weight_offset + i * layer.out;
        for (std::size_t j = 0; j < layer.out; ++j) gw[j] += xi * delta[j];
      }
      for (std::size_t j = 0; j < layer.out; ++j) g[layer.bias_offset + j] += delta[j];
      if (l == 0) break;
      // Back through W then through the masked tanh of hidden layer l-1.
      prev_delta.assign(layer.in, 0.0);
      for (std::size_t i = 0; i < layer.in; ++i) {
        const double* wr = w.data() + layer.weight_offset + i * layer.out;
        double s = 0.0;
        for (std::size_t j = 0; j < layer.out; ++j) s += wr[j] * delta[j];
        const double t = tanhs[l - 1][i];
        prev_delta[i] = s * masks[l - 1][i] * (1.0 - t * t);
      }
      delta.swap(prev_delta);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(rows.size());
  result.loss *= inv_n;
  result.gradient *= inv_n;
  return result;
}

double ComputeLoss(const ParameterVector& params, const ModelSpec& spec, const Dataset& data) {
  RequireCompatible(params, spec, data);
  Require(!data.empty(), ErrorCode::kEmptyInput, "loss over an empty dataset");
  double total = 0.0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    auto z = Logits(params, spec, data.row(r));
    total += LogSumExp(z) - z[data.label(r)];
  }
  return total / static_cast<double>(data.size());
}

double EvaluateAccuracy(const ParameterVector& params, const ModelSpec& spec,
                        const Dataset& data) {
  RequireCompatible(params, spec, data);
  Require(!data.empty(), ErrorCode::kEmptyInput, "accuracy over an empty dataset");
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    if (Predict(params, spec, data.row(r)) == data.label(r)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace sfl::fl
