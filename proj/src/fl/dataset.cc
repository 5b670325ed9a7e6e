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

#include "sfl/fl/dataset.h"

#include <string>

#include "sfl/common/error.h"

namespace sfl::fl {

Dataset::Dataset(std::size_t input_dim, std::size_t class_count)
    : input_dim_(input_dim), class_count_(class_count) {
  Require(input_dim > 0 && class_count > 0, ErrorCode::kInvalidArgument,
          "dataset needs positive input_dim and class_count");
}

Dataset::Dataset(std::vector<double> features, std::vector<Label> labels,
                 std::size_t input_dim, std::size_t class_count)
    : Dataset(input_dim, class_count) {
  Require(features.size() == labels.size() * input_dim, ErrorCode::kInvalidArgument,
          "feature matrix has " + std::to_string(features.size()) + " values, expected " +
              std::to_string(labels.size() * input_dim));
  for (Label y : labels) {
    Require(y < class_count, ErrorCode::kInvalidArgument,
            "label " + std::to_string(y) + " out of range");
  }
  features_ = std::move(features);
  labels_ = std::move(labels);
}

void Dataset::set_label(std::size_t i, Label label) {
  Require(label < class_count_, ErrorCode::kInvalidArgument, "label out of range");
  labels_.at(i) = label;
}

void Dataset::Add(std::span<const double> x, Label y) {
  Require(x.size() == input_dim_, ErrorCode::kDimensionMismatch, "row width mismatch");
  Require(y < class_count_, ErrorCode::kInvalidArgument, "label out of range");
  features_.insert(features_.end(), x.begin(), x.end());
  labels_.push_back(y);
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  Dataset out(input_dim_, class_count_);
  out.features_.reserve(indices.size() * input_dim_);
  out.labels_.reserve(indices.size());
  for (std::size_t i : indices) {
    Require(i < size(), ErrorCode::kInvalidArgument, "subset index out of range");
    auto r = row(i);
    out.features_.insert(out.features_.end(), r.begin(), r.end());
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

std::vector<std::size_t> Dataset::ClassCounts() const {
  std::vector<std::size_t> counts(class_count_, 0);
  for (Label y : labels_) ++counts[y];
  return counts;
}

std::vector<double> Dataset::ClassDistribution() const {
  std::vector<double> dist(class_count_, 0.0);
  if (labels_.empty()) return dist;
  auto counts = ClassCounts();
  for (std::size_t c = 0; c < class_count_; ++c) {
    dist[c] = static_cast<double>(counts[c]) / static_cast<double>(labels_.size());
  }
  return dist;
}

Dataset Concat(std::span<const Dataset> parts) {
  Require(!parts.empty(), ErrorCode::kEmptyInput, "nothing to concatenate");
  Dataset out(parts.front().input_dim(), parts.front().class_count());
  for (const Dataset& part : parts) {
    Require(part.input_dim() == out.input_dim() && part.class_count() == out.class_count(),
            ErrorCode::kDimensionMismatch, "concatenating datasets of different shape");
    for (std::size_t i = 0; i < part.size(); ++i) out.Add(part.row(i), part.label(i));
  }
  return out;
}

}  // namespace sfl::fl
