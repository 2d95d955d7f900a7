//
// Copyright 2026 The Onestep Authors
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
//

#ifndef ONESTEP_PRIVACY_H_
#define ONESTEP_PRIVACY_H_

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "onestep/models.h"
#include "onestep/randcore.h"

namespace onestep {

enum class Mechanism { kLaplace, kTulap };

// epsilon: privacy-loss budget. sensitivity: l1 sensitivity of the released
// statistic under a change of one record.
struct PrivacySpec {
  double epsilon = 1.0;
  double sensitivity = 0.0;
  Mechanism mechanism = Mechanism::kLaplace;
};

// t + L with L_j i.i.d. Laplace(0, sensitivity / epsilon), one stream uniform
// per coordinate. Throws ArgumentError unless epsilon > 0 and the
// sensitivity is finite and positive.
Eigen::VectorXd laplace_mechanism(const Eigen::VectorXd& t,
                                  const PrivacySpec& spec, SeedStream& stream);

// Clamping threshold min[1/2, 10 / (log(n) sqrt(n))]. Requires n >= 2.
double beta_threshold(std::int64_t n);

// Joint l1 sensitivity of (mean log x, mean log(1-x)) over data clamped to
// [t, 1-t]: 2/n |log t - log(1-t)|.
double beta_sensitivity(double t, std::int64_t n);

// Means of log x and log(1-x) after clamping each x to [t, 1-t].
BetaStats clamped_beta_stats(std::span<const double> x, double t);

// epsilon-DP estimate of Beta(alpha, beta) on [1, inf)^2: clamp, privatize
// both sufficient statistics with one Laplace draw each at the joint
// sensitivity, then maximize the plug-in likelihood by projected Newton
// from a moment start on the clamped data.
ParamVector dp_beta_estimate(const Dataset& data, double epsilon,
                             SeedStream& stream);

// count + Tulap{0, exp(-epsilon), 0} noise from three stream uniforms.
double tulap_mechanism(std::int64_t count, double epsilon, SeedStream& stream);

}  // namespace onestep

#endif  // ONESTEP_PRIVACY_H_
