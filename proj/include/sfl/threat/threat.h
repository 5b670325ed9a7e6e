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


#ifndef SFL_THREAT_THREAT_H_
#define SFL_THREAT_THREAT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sfl/common/ids.h"
#include "sfl/common/rng.h"
#include "sfl/fl/dataset.h"
#include "sfl/ledger/chain.h"

namespace sfl::threat {

enum class BehaviorKind { kWellBehaved, kMalicious, kUnreliable };

const char* BehaviorName(BehaviorKind kind);

struct Behavior {
  BehaviorKind kind = BehaviorKind::kWellBehaved;
  double lambda = 0.0;      // kMalicious: fraction of flipped labels
  double target_emd = 0.0;  // kUnreliable

  static Behavior WellBehaved() { return {}; }
  static Behavior Malicious(double lambda) { return {BehaviorKind::kMalicious, lambda, 0.0}; }
  static Behavior Unreliable(double emd) { return {BehaviorKind::kUnreliable, 0.0, emd}; }

  bool operator==(const Behavior&) const = default;
};

// Relabels exactly round(lambda * |data|) rows, drawn without replacement,
// each to a label chosen uniformly among the other C - 1. Features are
// untouched. Throws kInvalidArgument unless lambda is in (0, 1] and C >= 2.
fl::Dataset FlipLabels(const fl::Dataset& data, double lambda, RngStream& rng);

// L1 distance between two class distributions, in [0, 2]. Throws
// kInvalidArgument for mismatched lengths, negative entries, or sums more
// than 1e-9 away from 1.
double ComputeEmd(std::span<const double> p, std::span<const double> q);

struct NonIidShard {
  std::vector<std::size_t> indices;  // into the source dataset
  double achieved_emd = 0.0;
  fl::Label concentrated_class = 0;
};

// Draws `size` rows from `available` (indices into `data`) whose label
// distribution sits target_emd away from the class distribution of `data`.
// The shard mixes a stratified draw with rows of a single concentrated class;
// the concentrated count is found by bisection. Throws kInfeasible when no
// mix lands within 0.05 of the target.
NonIidShard PartitionNonIidIndices(const fl::Dataset& data,
                                   std::span<const std::size_t> available, double target_emd,
                                   std::size_t size, RngStream& rng);

// Same, drawing from the whole dataset.
fl::Dataset PartitionNonIid(const fl::Dataset& data, double target_emd, std::size_t size,
                            RngStream& rng);

struct Mix {
  double well_behaved = 0.6;
  double malicious = 0.2;
  double unreliable = 0.2;
};

// Largest-remainder rounding of the mix to counts summing to `population`;
// ties go to the earlier category. Throws kInvalidArgument unless the
// fractions are non-negative and sum to 1 within 1e-9.
std::array<std::size_t, 3> MixCounts(std::size_t population, const Mix& mix);

struct ParticipantProfile {
  DeviceId device_id;
  ledger::WalletAddress wallet;
  Behavior behavior;
  fl::Dataset local_data;
  // Pre-filters with local evaluation before submitting.
  bool rational = false;
  std::vector<std::size_t> source_indices;
};

struct PartitionPlan {
  std::size_t population_size = 0;
  std::vector<std::size_t> per_device_counts;
  // Label-distribution distance of each local dataset from the source.
  std::vector<double> achieved_emd;
};

struct PopulationConfig {
  std::uint64_t seed = 0;
  std::size_t population = 10;
  Mix mix;
  double lambda = 0.2;
  double emd = 1.5;
  // Rows per device; 0 means |data| / population.
  std::size_t shard_size = 0;
  bool rational = false;
};

struct Population {
  std::vector<ParticipantProfile> participants;
  PartitionPlan plan;
};

// Device ids run well-behaved, then malicious, then unreliable. Unreliable
// shards are drawn first; the rest of the pool is shuffled and cut into
// disjoint IID shards. Malicious devices flip their IID shard; with
// lambda == 0 they are well-behaved. A pure function of (config, data).
Population BuildPopulation(const PopulationConfig& config, const fl::Dataset& data);

}  // namespace sfl::threat

#endif  // SFL_THREAT_THREAT_H_
