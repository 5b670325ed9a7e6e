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

#ifndef SFL_COMMON_RNG_H_
#define SFL_COMMON_RNG_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace sfl {

// Child seed = first 8 bytes (little-endian) of
// SHA-256(u64 master || length-prefixed role || u64 index).
std::uint64_t DeriveSeed(std::uint64_t master, std::string_view role,
                         std::uint64_t index);

// Counter-based generator: the i-th output is a pure function of (key, i),
// so a stream's draws never depend on what other streams did. The mixing
// function is SplitMix64. All distributions are implemented here rather than
// with <random> distributions so that outputs are identical across standard
// libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  // Convenience: a stream keyed by DeriveSeed(master, role, index).
  static RngStream Derive(std::uint64_t master, std::string_view role,
                          std::uint64_t index) {
    return RngStream(DeriveSeed(master, role, index));
  }

  std::uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double NextDouble();
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * NextDouble(); }
  // Uniform integer in [0, bound); bound must be positive. Unbiased.
  std::uint64_t NextBelow(std::uint64_t bound);
  // Standard normal via Box-Muller; the second variate is cached.
  double NextGaussian();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(NextBelow(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sfl

#endif  // SFL_COMMON_RNG_H_
