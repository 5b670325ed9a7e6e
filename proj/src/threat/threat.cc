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


#include "sfl/threat/threat.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sfl/common/error.h"

namespace sfl::threat {

namespace {

constexpr double kEmdTolerance = 0.05;

void RequireDistribution(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    Require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument,
            "distribution entries must be finite and non-negative");
    sum += v;
  }
  Require(std::abs(sum - 1.0) <= 1e-9, ErrorCode::kInvalidArgument,
          "distribution does not sum to 1");
}

// Largest-remainder apportionment of `total` by `weights` (which sum to 1);
// ties go to the lower index.
std::vector<std::size_t> Apportion(std::size_t total, std::span<const double> weights) {
  std::vector<std::size_t> out(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double exact = static_cast<double>(total) * weights[k];
    out[k] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[k];
    rem.emplace_back(exact - static_cast<double>(out[k]), k);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[rem[i % rem.size()].second];
  return out;
}

std::vector<double> Distribution(std::span<const std::size_t> counts) {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(),
                                                       std::size_t{0}));
  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) p[k] = static_cast<double>(counts[k]) / n;
  return p;
}

}  // namespace

const char* BehaviorName(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::kWellBehaved: return "well_behaved";
    case BehaviorKind::kMalicious: return "malicious";
    case BehaviorKind::kUnreliable: return "unreliable";
  }
  return "?";
}

fl::Dataset FlipLabels(const fl::Dataset& data, double lambda, RngStream& rng) {
  Require(lambda > 0.0 && lambda <= 1.0, ErrorCode::kInvalidArgument,
          "lambda must lie in (0, 1]");
  const std::size_t classes = data.class_count();
  Require(classes >= 2, ErrorCode::kInvalidArgument, "label flipping needs at least 2 classes");
  const std::size_t n = data.size();
  const auto k = static_cast<std::size_t>(std::llround(lambda * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.NextBelow(n - i));
    std::swap(idx[i], idx[j]);
  }
  fl::Dataset out = data;
  for (std::size_t i = 0; i < k; ++i) {
    const fl::Label y = data.label(idx[i]);
    const auto shift = 1 + static_cast<fl::Label>(rng.NextBelow(classes - 1));
    out.set_label(idx[i], static_cast<fl::Label>((y + shift) % classes));
  }
  return out;
}

double ComputeEmd(std::span<const double> p, std::span<const double> q) {
  Require(p.size() == q.size() && !p.empty(), ErrorCode::kInvalidArgument,
          "distributions must have the same non-zero length");
  RequireDistribution(p);
  RequireDistribution(q);
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) d += std::abs(p[k] - q[k]);
  return d;
}

NonIidShard PartitionNonIidIndices(const fl::Dataset& data,
                                   std::span<const std::size_t> available, double target_emd,
                                   std::size_t size, RngStream& rng) {
  Require(std::isfinite(target_emd) && target_emd >= 0.0 && target_emd <= 2.0,
          ErrorCode::kInvalidArgument, "target EMD must lie in [0, 2]");
  Require(size >= 1, ErrorCode::kInvalidArgument, "shard size must be positive");
  Require(size <= available.size(), ErrorCode::kInfeasible,
          "not enough rows left for the shard");
  const std::size_t classes = data.class_count();
  const std::vector<double> population = data.ClassDistribution();

  std::vector<std::vector<std::size_t>> pool(classes);
  for (std::size_t i : available) pool[data.label(i)].push_back(i);
  for (auto& rows : pool) rng.Shuffle(std::span<std::size_t>(rows));

  // Concentrate on a random class that could fill the whole shard, or on the
  // best-stocked class if none can.
  std::vector<fl::Label> roomy;
  for (std::size_t k = 0; k < classes; ++k) {
    if (pool[k].size() >= size) roomy.push_back(static_cast<fl::Label>(k));
  }
  fl::Label c = 0;
  if (!roomy.empty()) {
    c = roomy[rng.NextBelow(roomy.size())];
  } else {
    for (std::size_t k = 1; k < classes; ++k) {
      if (pool[k].size() > pool[c].size()) c = static_cast<fl::Label>(k);
    }
  }

  // Per-class counts for `conc` concentrated rows plus a stratified rest.
  // Returns false if availability cannot cover the counts.
  auto counts_for = [&](std::size_t conc, std::vector<std::size_t>& counts) {
    counts = Apportion(size - conc, population);
    counts[c] += conc;
    std::size_t deficit = 0;
    for (std::size_t k = 0; k < classes; ++k) {
      if (counts[k] > pool[k].size()) {
        deficit += counts[k] - pool[k].size();
        counts[k] = pool[k].size();
      }
    }
    for (std::size_t k = 0; k < classes && deficit > 0; ++k) {
      if (k == c) continue;
      const std::size_t spare = pool[k].size() - counts[k];
      const std::size_t take = std::min(spare, deficit);
      counts[k] += take;
      deficit -= take;
    }
    return deficit == 0;
  };
  auto emd_for = [&](std::size_t conc) {
    std::vector<std::size_t> counts;
    if (!counts_for(conc, counts)) return std::numeric_limits<double>::infinity();
    return ComputeEmd(Distribution(counts), population);
  };

  const std::size_t hi_max = std::min(size, pool[c].size());
  // Smallest concentrated count whose EMD reaches the target.
  std::size_t lo = 0;
  std::size_t hi = hi_max;
  if (emd_for(hi) < target_emd) {
    lo = hi;
  } else {
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (emd_for(mid) >= target_emd) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
  }
  std::size_t best = lo;
  if (lo > 0 && std::abs(emd_for(lo - 1) - target_emd) < std::abs(emd_for(lo) - target_emd)) {
    best = lo - 1;
  }
  const double achieved = emd_for(best);
  if (!(std::abs(achieved - target_emd) <= kEmdTolerance)) {
    Fail(ErrorCode::kInfeasible, "cannot reach target EMD " + std::to_string(target_emd) +
                                     " (closest " + std::to_string(achieved) + ")");
  }

  std::vector<std::size_t> counts;
  counts_for(best, counts);
  NonIidShard shard;
  shard.concentrated_class = c;
  shard.achieved_emd = achieved;
  for (std::size_t k = 0; k < classes; ++k) {
    shard.indices.insert(shard.indices.end(), pool[k].begin(),
                         pool[k].begin() + static_cast<std::ptrdiff_t>(counts[k]));
  }
  rng.Shuffle(std::span<std::size_t>(shard.indices));
  return shard;
}

fl::Dataset PartitionNonIid(const fl::Dataset& data, double target_emd, std::size_t size,
                            RngStream& rng) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return data.Subset(PartitionNonIidIndices(data, all, target_emd, size, rng).indices);
}

std::array<std::size_t, 3> MixCounts(std::size_t population, const Mix& mix) {
  const std::array<double, 3> w{mix.well_behaved, mix.malicious, mix.unreliable};
  for (double v : w) {
    Require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument,
            "mix fractions must be non-negative");
  }
  Require(std::abs(w[0] + w[1] + w[2] - 1.0) <= 1e-9, ErrorCode::kInvalidArgument,
          "mix fractions must sum to 1");
  const std::vector<std::size_t> c = Apportion(population, w);
  return {c[0], c[1], c[2]};
}

Population BuildPopulation(const PopulationConfig& config, const fl::Dataset& data) {
  Require(config.population >= 1, ErrorCode::kInvalidArgument, "population must be positive");
  Require(config.lambda >= 0.0 && config.lambda <= 1.0, ErrorCode::kInvalidArgument,
          "lambda must lie in [0, 1]");
  const auto [n_well, n_mal, n_unrel] = MixCounts(config.population, config.mix);
  const std::size_t size =
      config.shard_size != 0 ? config.shard_size : data.size() / config.population;
  Require(size >= 1, ErrorCode::kInfeasible, "dataset too small for the population");
  Require(size * config.population <= data.size(), ErrorCode::kInfeasible,
          "dataset too small for the requested shard size");

  RngStream rng = RngStream::Derive(config.seed, "partition", 0);
  std::vector<std::size_t> pool(data.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});

  std::vector<std::vector<std::size_t>> unreliable_shards;
  for (std::size_t u = 0; u < n_unrel; ++u) {
    NonIidShard s = PartitionNonIidIndices(data, pool, config.emd, size, rng);
    std::vector<std::size_t> taken = s.indices;
    std::sort(taken.begin(), taken.end());
    std::vector<std::size_t> rest;
    std::set_difference(pool.begin(), pool.end(), taken.begin(), taken.end(),
                        std::back_inserter(rest));
    pool = std::move(rest);
    unreliable_shards.push_back(std::move(s.indices));
  }
  rng.Shuffle(std::span<std::size_t>(pool));

  Population pop;
  pop.plan.population_size = config.population;
  const std::vector<double> source = data.ClassDistribution();
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < config.population; ++i) {
    ParticipantProfile p;
    p.device_id = DeviceId{static_cast<std::uint32_t>(i)};
    p.wallet = ledger::WalletAddress::Derive(config.seed, "device", i);
    p.rational = config.rational;
    if (i < n_well + n_mal) {
      p.source_indices.assign(pool.begin() + static_cast<std::ptrdiff_t>(cursor),
                              pool.begin() + static_cast<std::ptrdiff_t>(cursor + size));
      cursor += size;
      p.local_data = data.Subset(p.source_indices);
      if (i >= n_well && config.lambda > 0.0) {
        p.behavior = Behavior::Malicious(config.lambda);
        RngStream flip = RngStream::Derive(config.seed, "flip", i);
        p.local_data = FlipLabels(p.local_data, config.lambda, flip);
      }
    } else {
      p.behavior = Behavior::Unreliable(config.emd);
      p.source_indices = std::move(unreliable_shards[i - n_well - n_mal]);
      p.local_data = data.Subset(p.source_indices);
    }
    pop.plan.per_device_counts.push_back(p.local_data.size());
    pop.plan.achieved_emd.push_back(ComputeEmd(p.local_data.ClassDistribution(), source));
    pop.participants.push_back(std::move(p));
  }
  return pop;
}

}  // namespace sfl::threat
