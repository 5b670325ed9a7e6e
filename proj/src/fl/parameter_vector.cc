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

#include "sfl/fl/parameter_vector.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfl/common/error.h"

namespace sfl::fl {

void RequireSameDim(const ParameterVector& a, const ParameterVector& b) {
  Require(a.dim() == b.dim(), ErrorCode::kDimensionMismatch,
          "parameter dims " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

ParameterVector& ParameterVector::operator+=(const ParameterVector& other) {
  RequireSameDim(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ParameterVector& ParameterVector::operator-=(const ParameterVector& other) {
  RequireSameDim(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ParameterVector& ParameterVector::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

double ParameterVector::Dot(const ParameterVector& other) const {
  RequireSameDim(*this, other);
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) sum += values_[i] * other.values_[i];
  return sum;
}

double ParameterVector::L2Norm() const {
  // Scaled accumulation avoids overflow for very large entries.
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double v : values_) {
    double r = v / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

bool ParameterVector::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ParameterVector operator+(ParameterVector lhs, const ParameterVector& rhs) {
  lhs += rhs;
  return lhs;
}

ParameterVector operator-(ParameterVector lhs, const ParameterVector& rhs) {
  lhs -= rhs;
  return lhs;
}

ParameterVector operator*(ParameterVector v, double scale) {
  v *= scale;
  return v;
}

}  // namespace sfl::fl
