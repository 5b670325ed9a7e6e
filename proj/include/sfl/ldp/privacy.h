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

// (epsilon, delta)-local differential privacy for model updates: L2
// clipping to a sensitivity bound followed by the Gaussian noise mechanism.

#ifndef SFL_LDP_PRIVACY_H_
#define SFL_LDP_PRIVACY_H_

#include <cstdint>
#include <optional>

#include "sfl/common/ids.h"
#include "sfl/common/rng.h"
#include "sfl/fl/parameter_vector.h"

namespace sfl::ldp {

// sigma = S * sqrt(2 ln(1.25 / delta)) / epsilon.
// Requires epsilon > 0, 0 < delta < 1 and finite S > 0.
double CalibrateSigma(double epsilon, double delta, double sensitivity);

class PrivacyParams {
 public:
  // Sigma from CalibrateSigma.
  static PrivacyParams Create(double epsilon, double delta, double sensitivity);
  // Sigma fixed by the caller (>= 0). The sensitivity may be +infinity here,
  // which disables clipping.
  static PrivacyParams WithSigmaOverride(double epsilon, double delta, double sensitivity,
                                         double sigma);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double sensitivity() const { return sensitivity_; }
  double sigma() const { return sigma_; }
  bool sigma_overridden() const { return overridden_; }

  bool operator==(const PrivacyParams&) const = default;

 private:
  PrivacyParams(double epsilon, double delta, double sensitivity, double sigma, bool overridden)
      : epsilon_(epsilon), delta_(delta), sensitivity_(sensitivity), sigma_(sigma),
        overridden_(overridden) {}

  double epsilon_;
  double delta_;
  double sensitivity_;
  double sigma_;
  bool overridden_;
};

struct ClipResult {
  fl::ParameterVector values;
  bool was_clipped = false;
};

// u / max(1, ||u|| / S). Throws kNonFinite on NaN/Inf entries.
ClipResult ClipUpdate(const fl::ParameterVector& update, double sensitivity);

struct PerturbedUpdate {
  fl::ParameterVector values;
  bool was_clipped = false;
  DeviceId device_id;

  bool operator==(const PerturbedUpdate&) const = default;
};

// ClipUpdate(u, S) plus i.i.d. N(0, sigma^2) noise per coordinate drawn from
// `rng`.
PerturbedUpdate Perturb(const fl::ParameterVector& update, const PrivacyParams& params,
                        RngStream& rng, DeviceId device_id = {});

}  // namespace sfl::ldp

#endif  // SFL_LDP_PRIVACY_H_
