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

#include "onestep/privacy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "onestep/dists.h"
#include "onestep/errors.h"
#include "onestep/goftest.h"
#include "onestep/models.h"
#include "onestep/randcore.h"
#include "onestep/synth.h"

namespace onestep {
namespace {

TEST(LaplaceMechanismTest, RejectsBadSpecs) {
  SeedStream s(1, {});
  const Eigen::VectorXd t = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(laplace_mechanism(t, {0.0, 1.0, Mechanism::kLaplace}, s), ArgumentError);
  EXPECT_THROW(laplace_mechanism(t, {1.0, 0.0, Mechanism::kLaplace}, s), ArgumentError);
  EXPECT_THROW(laplace_mechanism(t, {1.0, INFINITY, Mechanism::kLaplace}, s), ArgumentError);
}

TEST(LaplaceMechanismTest, NoiseScaleMatchesSensitivityOverEpsilon) {
  SeedStream s(2, {});
  const double delta = 0.3, eps = 0.7;
  const int n = 100000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = laplace_mechanism(Eigen::VectorXd::Constant(1, 5.0),
                                       {eps, delta, Mechanism::kLaplace}, s)[0] - 5.0;
    sum += v;
    sum2 += v * v;
  }
  const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
  EXPECT_NEAR(sd / (std::sqrt(2.0) * delta / eps), 1.0, 0.03);
}

TEST(LaplaceMechanismTest, NoiseVanishesForHugeEpsilon) {
  SeedStream s(3, {});
  double sum2 = 0;
  for (int i = 0; i < 10000; ++i) {
    const double v = laplace_mechanism(Eigen::VectorXd::Zero(1),
                                       {1e6, 1.0, Mechanism::kLaplace}, s)[0];
    sum2 += v * v;
  }
  EXPECT_LT(std::sqrt(sum2 / 10000), 1e-3);
}

TEST(LaplaceMechanismTest, DensityRatioBoundedByEpsilon) {
  // Neighbouring statistics t, t' with ||t - t'||_1 = Delta: the product
  // Laplace densities differ by at most a factor e^epsilon at every output.
  const double delta = 0.4, eps = 1.3;
  const DistSpec lap = DistSpec::laplace(0.0, delta / eps);
  const Eigen::Vector2d t(0.1, -0.2);
  for (double split = 0.0; split <= 1.0; split += 0.125) {
    const Eigen::Vector2d t2 = t + Eigen::Vector2d(split * delta, -(1 - split) * delta);
    for (double a = -3; a <= 3; a += 0.05) {
      for (double b = -3; b <= 3; b += 0.05) {
        const double l1 = log_pdf(lap, a - t[0]) + log_pdf(lap, b - t[1]);
        const double l2 = log_pdf(lap, a - t2[0]) + log_pdf(lap, b - t2[1]);
        ASSERT_LE(std::abs(l1 - l2), eps + 1e-12);
      }
    }
  }
}

TEST(BetaThresholdTest, Values) {
  EXPECT_NEAR(beta_threshold(10000), 10.0 / (std::log(1e4) * 100.0), 1e-15);
  EXPECT_NEAR(beta_threshold(10000), 0.0108573, 1e-7);
  EXPECT_EQ(beta_threshold(2), 0.5);
  EXPECT_THROW(beta_threshold(1), ArgumentError);
  double prev = 1.0;
  for (std::int64_t n = 3; n < 100000; n = n * 3 / 2 + 1) {
    const double t = beta_threshold(n);
    EXPECT_LE(t, prev);
    prev = t;
  }
}

TEST(BetaSensitivityTest, FeedsLaplaceScale) {
  const std::int64_t n = 10000;
  const double t = beta_threshold(n);
  EXPECT_NEAR(beta_sensitivity(t, n), 2.0 / n * std::abs(std::log(t) - std::log(1 - t)), 1e-18);
  EXPECT_EQ(beta_sensitivity(0.5, 7), 0.0);
}

// Exhaustive: every n = 5 dataset on a grid and every single-record change.
TEST(BetaSensitivityTest, ExhaustiveOnFiveRecords) {
  const std::vector<double> grid = {1e-6, 0.004, 0.03, 0.2, 0.5, 0.77, 0.96, 0.999, 1 - 1e-7};
  const int n = 5;
  for (double t : {0.01, 0.1, 0.3, beta_threshold(n)}) {
    const double delta = beta_sensitivity(t, n);
    double worst = 0.0;
    std::vector<int> idx(n, 0);
    const int g = static_cast<int>(grid.size());
    // Datasets as non-decreasing index tuples; the statistics are symmetric.
    std::function<void(int, int)> rec = [&](int pos, int start) {
      if (pos == n) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = grid[idx[i]];
        const BetaStats base = clamped_beta_stats(x, t);
        for (int i = 0; i < n; ++i) {
          for (int v = 0; v < g; ++v) {
            std::vector<double> y = x;
            y[i] = grid[v];
            const BetaStats s = clamped_beta_stats(y, t);
            const double change = std::abs(s.mean_log_x - base.mean_log_x) +
                                  std::abs(s.mean_log_1mx - base.mean_log_1mx);
            worst = std::max(worst, change);
          }
        }
        return;
      }
      for (int v = start; v < g; ++v) {
        idx[pos] = v;
        rec(pos + 1, v);
      }
    };
    rec(0, 0);
    EXPECT_LE(worst, delta * (1 + 1e-12) + 1e-15) << t;
    // The bound is attained by moving one record from t to 1 - t.
    if (t < 0.5) EXPECT_NEAR(worst, delta, 1e-12 * delta) << t;
  }
}

TEST(DpBetaTest, LargeEpsilonAgreesWithMle) {
  const BetaModel model;
  SeedStream xs(4, {});
  const Dataset x = parametric_bootstrap(model, (ParamVector(2) << 5, 3).finished(), 100000, xs);
  SeedStream noise(4, {1});
  const ParamVector dp = dp_beta_estimate(x, 1e6, noise);
  EXPECT_LT((dp - model.estimate(x)).norm(), 0.05);
}

TEST(DpBetaTest, DeterministicAndSupportChecked) {
  const BetaModel model;
  SeedStream xs(5, {});
  const Dataset x = parametric_bootstrap(model, (ParamVector(2) << 2, 2).finished(), 500, xs);
  SeedStream a(5, {1}), b(5, {1});
  EXPECT_EQ(dp_beta_estimate(x, 1.0, a), dp_beta_estimate(x, 1.0, b));
  Dataset bad = x;
  bad.observations(3, 0) = 1.0;
  SeedStream c(5, {1});
  EXPECT_THROW(dp_beta_estimate(bad, 1.0, c), ArgumentError);
  EXPECT_THROW(dp_beta_estimate(x, 0.0, c), ArgumentError);
}

TEST(DpBetaTest, NoiseBelowUnitBoxClampsAtBoundary) {
  // Statistics of a near-uniform sample: the optimum sits at or below (1, 1).
  std::vector<double> x;
  for (int i = 1; i <= 400; ++i) x.push_back((i - 0.5) / 400.0);
  x[0] = 1e-9;
  x[399] = 1 - 1e-9;
  const BetaStats st = beta_stats(x);
  const ParamVector mle = beta_box_mle(st, 400, (ParamVector(2) << 3, 3).finished());
  EXPECT_EQ(mle[0], 1.0);
  EXPECT_EQ(mle[1], 1.0);
  const Eigen::Vector2d g = beta_log_likelihood_gradient(st, 400, 1.0, 1.0);
  EXPECT_LE(g[0], 0.0);  // points out of the box
  EXPECT_LE(g[1], 0.0);
}

TEST(DpBetaTest, BiasAndNoiseSmallAtLargeN) {
  const BetaModel model;
  const int reps = 100;
  const std::int64_t n = 100000;
  std::vector<double> gaps;
  std::vector<Eigen::Vector2d> mles;
  for (int r = 0; r < reps; ++r) {
    SeedStream xs(6, {static_cast<std::uint64_t>(r), 0});
    const Dataset x = parametric_bootstrap(model, (ParamVector(2) << 5, 3).finished(), n, xs);
    SeedStream noise(6, {static_cast<std::uint64_t>(r), 1});
    const ParamVector mle = model.estimate(x);
    gaps.push_back((dp_beta_estimate(x, 1.0, noise) - mle).norm());
    mles.emplace_back(mle[0], mle[1]);
  }
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& m : mles) mean += m;
  mean /= reps;
  double ss = 0;
  for (const auto& m : mles) ss += (m - mean).squaredNorm();
  const double sd = std::sqrt(ss / (reps - 1));
  double mean_gap = 0;
  for (double g : gaps) mean_gap += g;
  mean_gap /= reps;
  EXPECT_LT(mean_gap, 3 * sd);
}

TEST(TulapMechanismTest, NoiseIsTulapDistributed) {
  SeedStream s(7, {});
  std::vector<double> noise(20000), ref(20000);
  for (double& v : noise) v = tulap_mechanism(42, 1.0, s) - 42.0;
  SeedStream r(8, {});
  for (double& v : ref) v = quantile(DistSpec::tulap(1.0), r.next_uniform());
  EXPECT_GT(ks_two_sample(noise, ref).p_value, 0.01);
}

TEST(TulapMechanismTest, HugeEpsilonStaysWithinHalf) {
  SeedStream s(9, {});
  for (int i = 0; i < 1000; ++i) {
    const double v = tulap_mechanism(17, 1e3, s);
    EXPECT_GT(v, 16.5);
    EXPECT_LT(v, 17.5);
  }
  SeedStream a(10, {}), b(10, {});
  EXPECT_EQ(tulap_mechanism(3, 1.0, a), tulap_mechanism(3, 1.0, b));
}

}  // namespace
}  // namespace onestep
