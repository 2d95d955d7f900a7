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

#include "onestep/dptest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "onestep/dists.h"
#include "onestep/errors.h"
#include "onestep/models.h"
#include "onestep/randcore.h"
#include "onestep/synth.h"

namespace onestep {
namespace {

DpTwoPropProblem problem(double x, double y, std::int64_t n, std::int64_t m, double eps) {
  DpTwoPropProblem p;
  p.x_tilde = x;
  p.y_tilde = y;
  p.n = n;
  p.m = m;
  p.epsilon = eps;
  return p;
}

TEST(TailPvalueTest, AddOneFormula) {
  const std::vector<double> ref = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(upper_tail_pvalue(ref, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(upper_tail_pvalue(ref, 3.0), 3.0 / 5.0);  // ties count
  EXPECT_DOUBLE_EQ(upper_tail_pvalue(ref, 9.0), 1.0 / 5.0);
}

TEST(DpTwoPropTest, ValidatesInputs) {
  const SeedStream s(1, {});
  EXPECT_THROW(dp2prop_onestep_pvalue(problem(10, 10, 50, 50, 1), 99, s), ArgumentError);
  EXPECT_THROW(dp2prop_bootstrap_pvalue(problem(10, 10, 0, 50, 1), 100, s), ArgumentError);
  EXPECT_THROW(dp2prop_onestep_pvalue(problem(10, 10, 50, 50, 0), 100, s), ArgumentError);
}

TEST(DpTwoPropTest, PvaluesMonotoneInObservedTreatmentCount) {
  // With x_tilde + y_tilde held fixed the reference draws are unchanged, so
  // the tail count can only shrink as y_tilde grows.
  const SeedStream s(2, {});
  for (auto method : {TestMethod::kOneStep, TestMethod::kBootstrap}) {
    const DpTwoPropProblem base = problem(60, 60, 200, 200, 1.0);
    const auto ref = method == TestMethod::kOneStep
                         ? dp2prop_onestep_reference(base, 300, s)
                         : dp2prop_bootstrap_reference(base, 300, s);
    double prev = 1.0;
    for (double y = 30; y <= 100; y += 0.5) {
      const double p = upper_tail_pvalue(ref, y);
      ASSERT_LE(p, prev);
      ASSERT_GT(p, 0.0);
      ASSERT_LE(p, 1.0);
      prev = p;
    }
    const TestOutcome out = method == TestMethod::kOneStep
                                ? dp2prop_onestep_pvalue(base, 300, s)
                                : dp2prop_bootstrap_pvalue(base, 300, s);
    EXPECT_EQ(out.p_value, upper_tail_pvalue(ref, 60));
    EXPECT_EQ(out.replicates_used, 300);
    EXPECT_EQ(out.method, method);
  }
}

TEST(DpTwoPropTest, DeterministicGivenStream) {
  const DpTwoPropProblem p = problem(55.2, 71.9, 200, 200, 1.0);
  EXPECT_EQ(dp2prop_onestep_pvalue(p, 200, SeedStream(3, {})).p_value,
            dp2prop_onestep_pvalue(p, 200, SeedStream(3, {})).p_value);
  EXPECT_EQ(dp2prop_bootstrap_pvalue(p, 200, SeedStream(3, {})).p_value,
            dp2prop_bootstrap_pvalue(p, 200, SeedStream(3, {})).p_value);
}

TEST(DpTwoPropTest, DegenerateEstimateFlagged) {
  const TestOutcome out =
      dp2prop_onestep_pvalue(problem(-8, -5, 50, 50, 1.0), 100, SeedStream(4, {}));
  EXPECT_TRUE(out.degenerate);
  EXPECT_EQ(out.theta_hat, 0.0);
  EXPECT_GT(out.p_value, 0.0);
  EXPECT_LE(out.p_value, 1.0);
  const TestOutcome fine =
      dp2prop_bootstrap_pvalue(problem(20, 25, 50, 50, 1.0), 100, SeedStream(4, {}));
  EXPECT_FALSE(fine.degenerate);
  EXPECT_NEAR(fine.theta_hat, 0.45, 1e-15);
}

TEST(DpTwoPropTest, DegenerateLargeEpsilonMethodsAgree) {
  // theta_hat = 0 and nearly noiseless Tulap: both references collapse into
  // (-1/2, 1/2), so an observation outside that range fixes the tail count.
  for (double y : {-0.6, 0.6}) {
    const DpTwoPropProblem p = problem(-0.7, y, 40, 40, 1e4);
    const TestOutcome a = dp2prop_onestep_pvalue(p, 400, SeedStream(5, {}));
    const TestOutcome b = dp2prop_bootstrap_pvalue(p, 400, SeedStream(6, {}));
    EXPECT_TRUE(a.degenerate);
    EXPECT_TRUE(b.degenerate);
    EXPECT_EQ(a.p_value, b.p_value);
    EXPECT_EQ(a.p_value, y < 0 ? 1.0 : 1.0 / 401.0);
  }
}

TEST(DpTwoPropTest, BootstrapMatchesBinomialTailForHugeEpsilon) {
  // Tulap(eps -> inf) is Uniform(-1/2, 1/2), so for y = k + 1/4 the tail
  // P(B + U >= y) is P(B >= k+1) + P(B = k) / 4.
  const std::int64_t m = 60;
  const DpTwoPropProblem p = problem(20.0, 23.25, 60, m, 50.0);
  const double theta = (20.0 + 23.25) / 120.0;
  const DistSpec b = DistSpec::binomial(m, theta);
  const double exact = (1.0 - cdf(b, 23)) + 0.25 * (cdf(b, 23) - cdf(b, 22));
  const std::int64_t reps = 40000;
  const double p_hat = dp2prop_bootstrap_pvalue(p, reps, SeedStream(7, {})).p_value;
  EXPECT_NEAR(p_hat, exact, 4 * std::sqrt(exact * (1 - exact) / reps) + 1.0 / reps);
}

TEST(DpTwoPropTest, OneStepDrawsPreserveNullEstimator) {
  double prev = 1e300;
  for (std::int64_t total : {100, 400, 1600}) {
    const std::int64_t n = total / 2;
    const TulapTwoSampleModel model(n, n, 1.0);
    std::vector<double> gaps;
    for (int r = 0; r < 300; ++r) {
      SeedStream s(8, {static_cast<std::uint64_t>(total), static_cast<std::uint64_t>(r)});
      const DpTwoPropProblem obs = simulate_dp2prop(n, n, 0.3, 0.3, 1.0, s);
      ParamVector hat(1);
      hat[0] = std::clamp((obs.x_tilde + obs.y_tilde) / total, 0.0, 1.0);
      const SyntheticResult res = one_step(model, hat, 1, s);
      const double star = (res.data.observations(0, 0) + res.data.observations(0, 1)) / total;
      gaps.push_back(std::abs(star - hat[0]));
    }
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    const double med = gaps[gaps.size() / 2];
    EXPECT_LT(med, prev) << total;
    prev = med;
  }
}

TEST(DpTwoPropTest, SimulatedCountsLookRight) {
  SeedStream s(9, {});
  double sx = 0, sy = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const DpTwoPropProblem p = simulate_dp2prop(200, 100, 0.3, 0.5, 1.0, s);
    EXPECT_EQ(p.n, 200);
    EXPECT_EQ(p.m, 100);
    sx += p.x_tilde;
    sy += p.y_tilde;
  }
  // Tulap noise is symmetric about zero; Binomial sd / sqrt(reps) is ~0.15.
  EXPECT_NEAR(sx / reps, 60.0, 0.6);
  EXPECT_NEAR(sy / reps, 50.0, 0.6);
}

// Small-scale calibration smoke check; the full study is in the acceptance run.
TEST(DpTwoPropTest, NullRejectionRatesSmallScale) {
  int rej_one = 0, rej_boot = 0;
  const int outer = 300;
  for (int r = 0; r < outer; ++r) {
    SeedStream s(10, {static_cast<std::uint64_t>(r)});
    const DpTwoPropProblem p = simulate_dp2prop(200, 200, 0.3, 0.3, 1.0, s);
    rej_one += dp2prop_onestep_pvalue(p, 200, s.child(1)).p_value <= 0.05;
    rej_boot += dp2prop_bootstrap_pvalue(p, 200, s.child(2)).p_value <= 0.05;
  }
  const double se = std::sqrt(0.05 * 0.95 / outer);
  EXPECT_NEAR(rej_one / static_cast<double>(outer), 0.05, 4 * se);
  EXPECT_LT(rej_boot / static_cast<double>(outer), 0.05 + 2 * se);
}

}  // namespace
}  // namespace onestep
