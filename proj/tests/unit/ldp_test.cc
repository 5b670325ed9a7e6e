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


#include <cmath>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "sfl/common/rng.h"
#include "sfl/ldp/privacy.h"
#include "test_util.h"

namespace sfl::ldp {
namespace {

using boost::multiprecision::cpp_dec_float_50;

double SigmaOracle(double epsilon, double delta, double sensitivity) {
  const cpp_dec_float_50 d(delta);
  const cpp_dec_float_50 s = cpp_dec_float_50(sensitivity) *
                             sqrt(2 * log(cpp_dec_float_50("1.25") / d)) /
                             cpp_dec_float_50(epsilon);
  return s.convert_to<double>();
}

TEST(SigmaTest, MatchesHighPrecisionOracle) {
  for (double eps : {0.5, 1.0, 4.0, 8.0, 16.0}) {
    for (double delta : {1e-5, std::exp(-5.0), 0.01, 0.5}) {
      for (double s : {0.1, 1.0, 3.0}) {
        const double want = SigmaOracle(eps, delta, s);
        EXPECT_NEAR(CalibrateSigma(eps, delta, s), want, 1e-12 * want);
      }
    }
  }
}

TEST(SigmaTest, LinearInSensitivityAndDecreasingInDelta) {
  const double base = CalibrateSigma(2.0, 1e-3, 1.0);
  EXPECT_NEAR(CalibrateSigma(2.0, 1e-3, 5.0), 5.0 * base, 1e-12);
  EXPECT_NEAR(CalibrateSigma(4.0, 1e-3, 1.0), base / 2.0, 1e-12);
  double prev = std::numeric_limits<double>::infinity();
  for (double delta = 1e-9; delta < 1.0; delta *= 3.0) {
    const double s = CalibrateSigma(2.0, delta, 1.0);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(SigmaTest, RejectsInvalidBudgets) {
  EXPECT_SFL_ERROR(CalibrateSigma(0.0, 0.1, 1.0), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(CalibrateSigma(1.0, 0.0, 1.0), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(CalibrateSigma(1.0, 1.0, 1.0), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(CalibrateSigma(1.0, 0.1, -1.0), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(PrivacyParams::WithSigmaOverride(1.0, 0.1, 1.0, -0.5),
                   ErrorCode::kInvalidArgument);
}

TEST(ClipTest, Examples) {
  const auto a = ClipUpdate(fl::ParameterVector{3.0, 4.0}, 1.0);
  EXPECT_TRUE(a.was_clipped);
  EXPECT_NEAR(a.values[0], 0.6, 1e-15);
  EXPECT_NEAR(a.values[1], 0.8, 1e-15);
  const auto b = ClipUpdate(fl::ParameterVector{3.0, 4.0}, 5.0);
  EXPECT_FALSE(b.was_clipped);
  EXPECT_EQ(b.values, (fl::ParameterVector{3.0, 4.0}));
  const auto c = ClipUpdate(fl::ParameterVector{3.0, 4.0}, 2.5);
  EXPECT_NEAR(c.values.L2Norm(), 2.5, 1e-15);
  const auto inf = ClipUpdate(fl::ParameterVector{3e100, 4e100},
                              std::numeric_limits<double>::infinity());
  EXPECT_FALSE(inf.was_clipped);
  EXPECT_SFL_ERROR(ClipUpdate(fl::ParameterVector{NAN}, 1.0), ErrorCode::kNonFinite);
}

TEST(ClipTest, NormNeverExceedsBound) {
  RngStream rng(3);
  for (int t = 0; t < 500; ++t) {
    fl::ParameterVector u(1 + rng.NextBelow(30));
    for (std::size_t i = 0; i < u.dim(); ++i) u[i] = rng.Uniform(-10, 10);
    const double s = rng.Uniform(0.01, 20);
    const auto c = ClipUpdate(u, s);
    EXPECT_LE(c.values.L2Norm(), s * (1 + 1e-12));
    EXPECT_EQ(c.was_clipped, u.L2Norm() > s);
  }
}

TEST(PerturbTest, ZeroSigmaIsIdentity) {
  const auto p = PrivacyParams::WithSigmaOverride(1.0, 0.1, 10.0, 0.0);
  RngStream rng(4);
  const fl::ParameterVector u{0.25, -1.5, 2.0};
  const auto out = Perturb(u, p, rng, DeviceId{7});
  EXPECT_EQ(out.values, u);
  EXPECT_FALSE(out.was_clipped);
  EXPECT_EQ(out.device_id, DeviceId{7});
}

TEST(PerturbTest, SameStreamSameNoise) {
  const auto p = PrivacyParams::Create(1.0, 1e-5, 1.0);
  RngStream a(9);
  RngStream b(9);
  const fl::ParameterVector u(20, 0.01);
  EXPECT_EQ(Perturb(u, p, a), Perturb(u, p, b));
}

// Noise added to a zero vector of 10^6 coordinates: mean within 5 standard
// errors of 0, standard deviation within 1% of sigma.
TEST(PerturbTest, NoiseMoments) {
  const auto p = PrivacyParams::WithSigmaOverride(1.0, 0.1, 1.0, 0.3);
  RngStream rng(DeriveSeed(5, "noise", 0));
  const auto out = Perturb(fl::ParameterVector(1'000'000), p, rng);
  double mean = 0;
  for (double v : out.values.values()) mean += v;
  mean /= 1e6;
  double var = 0;
  for (double v : out.values.values()) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / 1e6);
  EXPECT_LT(std::abs(mean), 5 * 0.3 / 1000);
  EXPECT_NEAR(sd, 0.3, 0.003);
}

}  // namespace
}  // namespace sfl::ldp
