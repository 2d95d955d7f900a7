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

#ifndef ONESTEP_DPTEST_H_
#define ONESTEP_DPTEST_H_

#include <cstdint>
#include <vector>

#include "onestep/randcore.h"

namespace onestep {

// Noisy counts of a control (n trials) and a treatment (m trials) sample,
// each released through the Tulap mechanism at privacy level epsilon.
struct DpTwoPropProblem {
  double x_tilde = 0.0;
  double y_tilde = 0.0;
  std::int64_t n = 1;
  std::int64_t m = 1;
  double epsilon = 1.0;
};

enum class TestMethod { kOneStep, kBootstrap };

struct TestOutcome {
  double p_value = 1.0;
  std::int64_t replicates_used = 0;
  TestMethod method = TestMethod::kOneStep;
  // theta_hat(x, y) hit 0 or 1: the reference distribution is degenerate.
  bool degenerate = false;
  double theta_hat = 0.0;
};

// Default Monte Carlo sizes for a single p-value and for outer studies.
inline constexpr std::int64_t kDefaultInnerReps = 1000;
inline constexpr std::int64_t kDefaultOuterReps = 2000;

// H0: theta_X = theta_Y against H1: theta_X <= theta_Y, test statistic
// y_tilde. Reference draws Y* come from the one-step sampler on the
// two-sample Tulap model at theta_hat(x_tilde, y_tilde), one seed block per
// replicate; p = (1 + #{Y* >= y_tilde}) / (reps + 1). Requires reps >= 100.
TestOutcome dp2prop_onestep_pvalue(const DpTwoPropProblem& prob,
                                   std::int64_t reps, const SeedStream& stream);

// Same tail p-value with independent reference draws
// Binomial(m, theta_hat) + Tulap(epsilon) and no correction.
TestOutcome dp2prop_bootstrap_pvalue(const DpTwoPropProblem& prob,
                                     std::int64_t reps, const SeedStream& stream);

// Reference draws Y* used by each method (exposed for diagnostics and tests).
std::vector<double> dp2prop_onestep_reference(const DpTwoPropProblem& prob,
                                              std::int64_t reps,
                                              const SeedStream& stream);
std::vector<double> dp2prop_bootstrap_reference(const DpTwoPropProblem& prob,
                                                std::int64_t reps,
                                                const SeedStream& stream);

// Add-one upper-tail Monte Carlo p-value.
double upper_tail_pvalue(const std::vector<double>& reference, double observed);

// Simulates released statistics for true proportions (theta_x, theta_y).
DpTwoPropProblem simulate_dp2prop(std::int64_t n, std::int64_t m, double theta_x,
                                  double theta_y, double epsilon,
                                  SeedStream& stream);

}  // namespace onestep

#endif  // ONESTEP_DPTEST_H_
