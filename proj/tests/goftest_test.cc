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

#include "onestep/goftest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "onestep/dists.h"
#include "onestep/errors.h"
#include "onestep/randcore.h"

namespace onestep {
namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

// Brute-force D_n: largest gap between the ecdf and F on either side of each
// order statistic.
double enumerate_gaps(std::vector<double> x, const CdfFunction& f) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, std::abs((i + 1) / n - f(x[i])));
    d = std::max(d, std::abs(f(x[i]) - i / n));
  }
  return d;
}

TEST(KsStatisticTest, ThreePointExample) {
  const std::vector<double> x = {0.75, 0.25, 0.5};
  EXPECT_NEAR(ks_statistic(x, uniform_cdf), enumerate_gaps(x, uniform_cdf), 1e-15);
  EXPECT_NEAR(ks_statistic(x, uniform_cdf), 0.25, 1e-15);
}

TEST(KsStatisticTest, ExactQuantilesGiveHalfStep) {
  const DistSpec burr = DistSpec::burr(2, 4);
  for (int n : {1, 7, 100, 1000}) {
    std::vector<double> x;
    for (int i = 1; i <= n; ++i) x.push_back(quantile(burr, (i - 0.5) / n));
    EXPECT_NEAR(ks_statistic(x, [&](double v) { return cdf(burr, v); }), 0.5 / n, 1e-9) << n;
  }
}

TEST(KsStatisticTest, RejectsEmptySample) {
  EXPECT_THROW(ks_statistic(std::vector<double>{}, uniform_cdf), ArgumentError);
}

TEST(KsStatisticTest, AgreesWithEnumerationOnRandomSamples) {
  SeedStream s(1, {});
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(s.next_uniform() * 60);
    std::vector<double> x(n);
    for (double& v : x) v = s.next_uniform() * 1.4 - 0.2;
    const double d = ks_statistic(x, uniform_cdf);
    ASSERT_NEAR(d, enumerate_gaps(x, uniform_cdf), 1e-14);
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, 1.0);
  }
}

TEST(KsStatisticTest, InvariantUnderJointMonotoneTransform) {
  SeedStream s(2, {});
  const DistSpec burr = DistSpec::burr(2, 4);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(80), cubed(80);
    for (int i = 0; i < 80; ++i) {
      x[i] = quantile(burr, s.next_uniform()) * (0.8 + 0.4 * s.next_uniform());
      cubed[i] = x[i] * x[i] * x[i];
    }
    const double d = ks_statistic(x, [&](double v) { return cdf(burr, v); });
    const double d3 = ks_statistic(cubed, [&](double v) { return cdf(burr, std::cbrt(v)); });
    ASSERT_NEAR(d, d3, 1e-12);
  }
}

TEST(KsStatisticTest, NullDrawsStayBelowOnePercentCritical) {
  SeedStream s(3, {});
  const int n = 10000, trials = 300;
  int below = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> x(n);
    for (double& v : x) v = s.next_uniform();
    below += ks_statistic(x, uniform_cdf) < 1.63 / std::sqrt(n);
  }
  EXPECT_NEAR(static_cast<double>(below) / trials, 0.99, 0.02);
}

TEST(KolmogorovTest, SeriesValues) {
  // Reference values of 1 - K(x) from the alternating series.
  auto alternating = [](double x) {
    double s = 0.0;
    for (int j = 1; j <= 200; ++j) s += (j % 2 ? 2.0 : -2.0) * std::exp(-2.0 * j * j * x * x);
    return s;
  };
  for (double x : {0.6, 0.8, 1.0, 1.1, 1.18, 1.2, 1.36, 1.63, 2.0, 3.0}) {
    EXPECT_NEAR(kolmogorov_pvalue(x), alternating(x), 1e-12) << x;
  }
  EXPECT_EQ(kolmogorov_pvalue(0.0), 1.0);
  EXPECT_NEAR(kolmogorov_pvalue(0.1), 1.0, 1e-12);
  EXPECT_NEAR(kolmogorov_pvalue(1.3580986), 0.05, 1e-6);
}

TEST(KolmogorovTest, CriticalValueInvertsPvalue) {
  EXPECT_NEAR(ks_critical(0.05, 1), 1.3580986, 1e-6);
  EXPECT_NEAR(ks_critical(0.01, 10000), 1.6276236 / 100.0, 1e-8);
  EXPECT_THROW(ks_critical(0.0, 10), ArgumentError);
  EXPECT_THROW(ks_critical(0.05, 0), ArgumentError);
}

TEST(KsTestTest, RejectsIffStatisticAboveCritical) {
  SeedStream s(4, {});
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(100);
    const double shift = 0.15 * s.next_uniform();
    for (double& v : x) v = s.next_uniform() + shift;
    const KsResult r = ks_test(x, uniform_cdf, 0.05);
    ASSERT_GE(r.p_value, 0.0);
    ASSERT_LE(r.p_value, 1.0);
    ASSERT_EQ(r.reject_at.at(0.05), r.statistic > ks_critical(0.05, 100));
    ASSERT_EQ(r.reject_at.at(0.05), r.p_value < 0.05);
  }
  EXPECT_THROW(ks_test(std::vector<double>{0.5}, uniform_cdf, 1.0), ArgumentError);
}

TEST(KsTestTest, NullPvaluesAreRoughlyUniform) {
  SeedStream s(5, {});
  std::vector<double> p(2000);
  for (double& v : p) {
    std::vector<double> x(200);
    for (double& u : x) u = s.next_uniform();
    v = ks_test(x, uniform_cdf, 0.05).p_value;
  }
  EXPECT_LT(ks_statistic(p, uniform_cdf), 0.04);
}

TEST(EmpiricalPowerTest, FarOffSampleAlwaysRejected) {
  const SampleGenerator far = [](SeedStream&, std::int64_t) {
    return std::vector<double>(50, 5.0);
  };
  const PowerEstimate est = empirical_power(far, uniform_cdf, 0.05, 100, SeedStream(6, {}));
  EXPECT_EQ(est.power, 1.0);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.reps, 100);
}

TEST(EmpiricalPowerTest, NullRejectionNearNominalAndDeterministic) {
  const SampleGenerator truth = [](SeedStream& s, std::int64_t) {
    std::vector<double> x(1000);
    for (double& v : x) v = s.next_uniform();
    return x;
  };
  const PowerEstimate a = empirical_power(truth, uniform_cdf, 0.05, 10000, SeedStream(7, {}), 4);
  const PowerEstimate b = empirical_power(truth, uniform_cdf, 0.05, 10000, SeedStream(7, {}), 1);
  EXPECT_EQ(a.power, b.power);
  EXPECT_NEAR(a.std_error, 0.0022, 0.0002);
  EXPECT_NEAR(a.std_error, binomial_std_error(a.power, 10000), 1e-15);
  // The asymptotic series is slightly conservative at n = 1000.
  EXPECT_GT(a.power, 0.040);
  EXPECT_LT(a.power, 0.056);
  EXPECT_THROW(empirical_power(truth, uniform_cdf, 0.05, 0, SeedStream(7, {})), ArgumentError);
}

TEST(TwoSampleKsTest, DetectsShiftAndAcceptsSameLaw) {
  SeedStream s(8, {});
  std::vector<double> a(3000), b(3000), c(3000);
  for (double& v : a) v = s.next_uniform();
  for (double& v : b) v = s.next_uniform();
  for (double& v : c) v = s.next_uniform() + 0.1;
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
  EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_EQ(ks_two_sample(a, a).statistic, 0.0);
}

}  // namespace
}  // namespace onestep
