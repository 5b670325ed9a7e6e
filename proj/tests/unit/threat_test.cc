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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "sfl/harness/data.h"
#include "sfl/threat/threat.h"
#include "test_util.h"

namespace sfl::threat {
namespace {

fl::Dataset Uniform(std::size_t classes, std::size_t per_class) {
  fl::Dataset d(1, classes);
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      d.Add(std::vector<double>{static_cast<double>(i * classes + c)}, static_cast<fl::Label>(c));
    }
  }
  return d;
}

double L1Oracle(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] > q[i] ? p[i] - q[i] : q[i] - p[i];
  return s;
}

TEST(FlipLabelsTest, FlipsExactlyTheRequestedCount) {
  const fl::Dataset d = Uniform(10, 10);
  RngStream rng(1);
  const fl::Dataset f = FlipLabels(d, 0.2, rng);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_TRUE(std::equal(d.row(i).begin(), d.row(i).end(), f.row(i).begin()));
    if (d.label(i) != f.label(i)) ++changed;
  }
  EXPECT_EQ(changed, 20u);
  RngStream all(2);
  const fl::Dataset g = FlipLabels(d, 1.0, all);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NE(d.label(i), g.label(i));
}

TEST(FlipLabelsTest, BinaryFlipsToTheOtherClass) {
  const fl::Dataset d = Uniform(2, 5);
  RngStream rng(3);
  const fl::Dataset f = FlipLabels(d, 1.0, rng);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(f.label(i), 1 - d.label(i));
}

TEST(FlipLabelsTest, RejectsBadArguments) {
  RngStream rng(4);
  EXPECT_SFL_ERROR(FlipLabels(Uniform(3, 2), 0.0, rng), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(FlipLabels(Uniform(3, 2), 1.5, rng), ErrorCode::kInvalidArgument);
}

TEST(FlipLabelsTest, NewLabelsAreRoughlyUniform) {
  const fl::Dataset d = Uniform(4, 3000);
  std::vector<int> to(4, 0);
  RngStream rng(5);
  const fl::Dataset f = FlipLabels(d, 1.0, rng);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.label(i) == 0) ++to[f.label(i)];
  }
  EXPECT_EQ(to[0], 0);
  for (int c = 1; c < 4; ++c) EXPECT_NEAR(to[c], 1000, 100);
}

TEST(EmdTest, Examples) {
  const std::vector<double> uniform(10, 0.1);
  std::vector<double> one(10, 0.0);
  one[3] = 1.0;
  EXPECT_NEAR(ComputeEmd(uniform, one), 1.8, 1e-12);
  EXPECT_EQ(ComputeEmd(uniform, uniform), 0.0);
  EXPECT_EQ(ComputeEmd(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 2.0);
  EXPECT_SFL_ERROR(ComputeEmd(uniform, std::vector<double>{1.0}), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(ComputeEmd(std::vector<double>{0.5, 0.4}, std::vector<double>{0.5, 0.5}),
                   ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(ComputeEmd(std::vector<double>{1.5, -0.5}, std::vector<double>{0.5, 0.5}),
                   ErrorCode::kInvalidArgument);
}

std::vector<double> RandomDistribution(RngStream& rng, std::size_t n) {
  std::vector<double> p(n);
  for (double& v : p) v = rng.NextDouble();
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
  return p;
}

TEST(EmdTest, MetricProperties) {
  RngStream rng(6);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng.NextBelow(12);
    const auto p = RandomDistribution(rng, n);
    const auto q = RandomDistribution(rng, n);
    const auto r = RandomDistribution(rng, n);
    const double pq = ComputeEmd(p, q);
    EXPECT_NEAR(pq, L1Oracle(p, q), 1e-12);
    EXPECT_EQ(pq, ComputeEmd(q, p));
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 2.0);
    EXPECT_LE(pq, ComputeEmd(p, r) + ComputeEmd(r, q) + 1e-12);
  }
}

void CheckShard(const fl::Dataset& d, const NonIidShard& s, std::size_t size, double target) {
  ASSERT_EQ(s.indices.size(), size);
  EXPECT_EQ(std::set<std::size_t>(s.indices.begin(), s.indices.end()).size(), size);
  const fl::Dataset shard = d.Subset(s.indices);
  const double emd = L1Oracle(shard.ClassDistribution(), d.ClassDistribution());
  EXPECT_NEAR(s.achieved_emd, emd, 1e-12);
  EXPECT_LE(std::abs(emd - target), 0.05);
}

TEST(PartitionTest, HitsTargetsAcrossTheRange) {
  const fl::Dataset d = Uniform(10, 100);
  std::vector<std::size_t> all(d.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (double target : {0.0, 0.5, 1.0, 1.5, 1.8}) {
    RngStream rng(7);
    CheckShard(d, PartitionNonIidIndices(d, all, target, 100, rng), 100, target);
  }
}

TEST(PartitionTest, FullConcentrationUsesOneClass) {
  const fl::Dataset d = Uniform(10, 100);
  RngStream rng(8);
  const fl::Dataset shard = PartitionNonIid(d, 1.8, 50, rng);
  const auto counts = shard.ClassCounts();
  EXPECT_EQ(*std::max_element(counts.begin(), counts.end()), 50u);
}

TEST(PartitionTest, ImpossibleTargetsAreInfeasible) {
  const fl::Dataset d = Uniform(10, 100);
  RngStream rng(9);
  // Ten rows per class cannot make a 100-row shard concentrated.
  std::vector<std::size_t> few;
  for (std::size_t i = 0; i < 100; ++i) few.push_back(i);
  EXPECT_SFL_ERROR(PartitionNonIidIndices(d, few, 1.8, 100, rng), ErrorCode::kInfeasible);
  EXPECT_SFL_ERROR(PartitionNonIid(d, 1.95, 100, rng), ErrorCode::kInfeasible);
}

TEST(MixTest, Counts) {
  EXPECT_EQ(MixCounts(10, Mix{}), (std::array<std::size_t, 3>{6, 2, 2}));
  EXPECT_EQ(MixCounts(7, Mix{}), (std::array<std::size_t, 3>{4, 2, 1}));
  EXPECT_EQ(MixCounts(3, Mix{1.0 / 3, 1.0 / 3, 1.0 / 3}), (std::array<std::size_t, 3>{1, 1, 1}));
  EXPECT_EQ(MixCounts(0, Mix{}), (std::array<std::size_t, 3>{0, 0, 0}));
  EXPECT_SFL_ERROR(MixCounts(10, Mix{0.5, 0.2, 0.2}), ErrorCode::kInvalidArgument);
  for (std::size_t n = 0; n < 50; ++n) {
    const auto c = MixCounts(n, Mix{});
    EXPECT_EQ(c[0] + c[1] + c[2], n);
  }
}

TEST(PopulationTest, DisjointShardsAndBehaviorOrder) {
  const fl::Dataset d = harness::GenerateSynthetic(10, 60, 4, 3.0, 10);
  PopulationConfig cfg;
  cfg.seed = 11;
  const Population pop = BuildPopulation(cfg, d);
  ASSERT_EQ(pop.participants.size(), 10u);
  std::set<std::size_t> used;
  std::size_t total = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& p = pop.participants[i];
    EXPECT_EQ(p.device_id.value, i);
    const BehaviorKind want = i < 6   ? BehaviorKind::kWellBehaved
                              : i < 8 ? BehaviorKind::kMalicious
                                      : BehaviorKind::kUnreliable;
    EXPECT_EQ(p.behavior.kind, want);
    EXPECT_EQ(p.local_data.size(), p.source_indices.size());
    used.insert(p.source_indices.begin(), p.source_indices.end());
    total += p.source_indices.size();
  }
  EXPECT_EQ(used.size(), total);
  for (std::size_t i = 8; i < 10; ++i) EXPECT_NEAR(pop.plan.achieved_emd[i], 1.5, 0.05);
  // Malicious shards keep their features but carry flipped labels.
  const auto& m = pop.participants[6];
  std::size_t flipped = 0;
  for (std::size_t k = 0; k < m.local_data.size(); ++k) {
    if (m.local_data.label(k) != d.label(m.source_indices[k])) ++flipped;
  }
  EXPECT_EQ(flipped, static_cast<std::size_t>(std::llround(0.2 * m.local_data.size())));
}

TEST(PopulationTest, PureFunctionOfConfigAndData) {
  const fl::Dataset d = harness::GenerateSynthetic(10, 60, 4, 3.0, 10);
  PopulationConfig cfg;
  cfg.seed = 12;
  const Population a = BuildPopulation(cfg, d);
  const Population b = BuildPopulation(cfg, d);
  for (std::size_t i = 0; i < a.participants.size(); ++i) {
    EXPECT_EQ(a.participants[i].local_data, b.participants[i].local_data);
    EXPECT_EQ(a.participants[i].wallet, b.participants[i].wallet);
  }
  cfg.seed = 13;
  EXPECT_NE(BuildPopulation(cfg, d).participants[0].source_indices,
            a.participants[0].source_indices);
}

}  // namespace
}  // namespace sfl::threat
