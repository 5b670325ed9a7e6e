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

#include "sfl/common/rng.h"

#include <cmath>
#include <numbers>

#include "sfl/common/digest.h"
#include "sfl/common/error.h"

namespace sfl {

std::uint64_t DeriveSeed(std::uint64_t master, std::string_view role,
                         std::uint64_t index) {
  ByteWriter w;
  w.U64(master).String(role).U64(index);
  Digest d = w.Hash();
  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed |= static_cast<std::uint64_t>(d[i]) << (8 * i);
  return seed;
}

std::uint64_t RngStream::NextU64() {
  std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RngStream::NextDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::NextBelow(std::uint64_t bound) {
  Require(bound > 0, ErrorCode::kInvalidArgument, "NextBelow bound must be positive");
  // Rejection on the top of the range keeps every residue equally likely.
  const std::uint64_t limit = -bound % bound;
  for (;;) {
    std::uint64_t r = NextU64();
    if (r >= limit) return r % bound;
  }
}

double RngStream::NextGaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  double u1 = 1.0 - NextDouble();
  double u2 = NextDouble();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace sfl
