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

#ifndef SFL_FL_PARAMETER_VECTOR_H_
#define SFL_FL_PARAMETER_VECTOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sfl::fl {

// Flat model parameters or an update delta. Binary arithmetic requires equal
// dimensions and throws kDimensionMismatch otherwise.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
  explicit ParameterVector(std::vector<double> values) : values_(std::move(values)) {}
  ParameterVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  ParameterVector& operator+=(const ParameterVector& other);
  ParameterVector& operator-=(const ParameterVector& other);
  ParameterVector& operator*=(double scale);

  double Dot(const ParameterVector& other) const;
  double L2Norm() const;
  bool AllFinite() const;

  // Exact element-wise equality (bitwise for non-NaN values).
  bool operator==(const ParameterVector& other) const = default;

 private:
  std::vector<double> values_;
};

ParameterVector operator+(ParameterVector lhs, const ParameterVector& rhs);
ParameterVector operator-(ParameterVector lhs, const ParameterVector& rhs);
ParameterVector operator*(ParameterVector v, double scale);

void RequireSameDim(const ParameterVector& a, const ParameterVector& b);

}  // namespace sfl::fl

#endif  // SFL_FL_PARAMETER_VECTOR_H_
