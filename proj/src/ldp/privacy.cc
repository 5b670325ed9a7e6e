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

#include "sfl/ldp/privacy.h"

#include <cmath>

#include "sfl/common/error.h"

namespace sfl::ldp {

namespace {

void ValidateBudget(double epsilon, double delta) {
  Require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::kInvalidArgument,
          "epsilon must be positive");
  Require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument, "delta must be in (0, 1)");
}

}  // namespace

double CalibrateSigma(double epsilon, double delta, double sensitivity) {
  ValidateBudget(epsilon, delta);
  Require(sensitivity > 0.0 && std::isfinite(sensitivity), ErrorCode::kInvalidArgument,
          "sensitivity must be positive and finite");
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

PrivacyParams PrivacyParams::Create(double epsilon, double delta, double sensitivity) {
  return PrivacyParams(epsilon, delta, sensitivity, CalibrateSigma(epsilon, delta, sensitivity),
                       false);
}

PrivacyParams PrivacyParams::WithSigmaOverride(double epsilon, double delta, double sensitivity,
                                               double sigma) {
  ValidateBudget(epsilon, delta);
  Require(sensitivity > 0.0, ErrorCode::kInvalidArgument, "sensitivity must be positive");
  Require(sigma >= 0.0 && std::isfinite(sigma), ErrorCode::kInvalidArgument,
          "sigma override must be finite and >= 0");
  return PrivacyParams(epsilon, delta, sensitivity, sigma, true);
}

ClipResult ClipUpdate(const fl::ParameterVector& update, double sensitivity) {
  Require(sensitivity > 0.0, ErrorCode::kInvalidArgument, "sensitivity must be positive");
  Require(update.AllFinite(), ErrorCode::kNonFinite, "cannot clip a non-finite update");
  const double norm = update.L2Norm();
  if (norm <= sensitivity) return {update, false};
  return {update * (sensitivity / norm), true};
}

PerturbedUpdate Perturb(const fl::ParameterVector& update, const PrivacyParams& params,
                        RngStream& rng, DeviceId device_id) {
  auto clipped = ClipUpdate(update, params.sensitivity());
  PerturbedUpdate out{std::move(clipped.values), clipped.was_clipped, device_id};
  if (params.sigma() > 0.0) {
    for (double& v : out.values.mutable_values()) v += params.sigma() * rng.NextGaussian();
  }
  return out;
}

}  // namespace sfl::ldp
