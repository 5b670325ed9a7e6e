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

#ifndef SFL_FL_DATASET_H_
#define SFL_FL_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sfl::fl {

using Label = std::uint32_t;

// Row-major feature matrix with one class label per row.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t input_dim, std::size_t class_count);
  // Throws kInvalidArgument if the shapes disagree or a label is >= class_count.
  Dataset(std::vector<double> features, std::vector<Label> labels, std::size_t input_dim,
          std::size_t class_count);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t class_count() const { return class_count_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * input_dim_, input_dim_};
  }
  std::span<double> mutable_row(std::size_t i) {
    return {features_.data() + i * input_dim_, input_dim_};
  }
  Label label(std::size_t i) const { return labels_[i]; }
  void set_label(std::size_t i, Label label);

  std::span<const double> features() const { return features_; }
  std::span<const Label> labels() const { return labels_; }

  void Add(std::span<const double> x, Label y);
  Dataset Subset(std::span<const std::size_t> indices) const;

  std::vector<std::size_t> ClassCounts() const;
  // Empirical label distribution; all zeros for an empty set.
  std::vector<double> ClassDistribution() const;

  bool operator==(const Dataset& other) const = default;

 private:
  std::size_t input_dim_ = 0;
  std::size_t class_count_ = 0;
  std::vector<double> features_;
  std::vector<Label> labels_;
};

// Rows of every part in order. Parts must share input_dim and class_count.
Dataset Concat(std::span<const Dataset> parts);

}  // namespace sfl::fl

#endif  // SFL_FL_DATASET_H_
