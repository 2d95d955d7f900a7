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
#include <numbers>

#include "onestep/errors.h"
#include "onestep/parallel.h"

namespace onestep {

double ks_statistic(std::span<const double> sample, const CdfFunction& cdf) {
  if (sample.empty()) throw ArgumentError("ks_statistic: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::stable_sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return std::clamp(d, 0.0, 1.0);
}

double kolmogorov_pvalue(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.18) {
    // P(K <= x) = sqrt(2 pi)/x sum_j exp(-(2j-1)^2 pi^2 / (8 x^2))
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
      const double k = 2.0 * j - 1.0;
      const double term = std::exp(-k * k * w);
      sum += term;
      if (term < 1e-300) break;
    }
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / x * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical(double alpha, std::int64_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("ks_critical: alpha must lie in (0, 1)");
  }
  if (n < 1) throw ArgumentError("ks_critical: n must be positive");
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_pvalue(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi / std::sqrt(static_cast<double>(n));
}

KsResult ks_test(std::span<const double> sample, const CdfFunction& cdf,
                 double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("ks_test: alpha must lie in (0, 1)");
  }
  KsResult r;
  r.statistic = ks_statistic(sample, cdf);
  r.p_value = kolmogorov_pvalue(
      std::sqrt(static_cast<double>(sample.size())) * r.statistic);
  for (double a : {0.01, 0.05, 0.10, alpha}) r.reject_at[a] = r.p_value < a;
  return r;
}

TwoSampleKs ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx -
                             static_cast<double>(j) / ny));
  }
  TwoSampleKs r;
  r.statistic = d;
  r.p_value = kolmogorov_pvalue(std::sqrt(nx * ny / (nx + ny)) * d);
  return r;
}

double binomial_std_error(double p, std::int64_t reps) {
  if (reps < 1) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

PowerEstimate empirical_power(const SampleGenerator& generator,
                              const CdfFunction& cdf, double alpha,
                              std::int64_t reps, const SeedStream& stream,
                              int threads) {
  if (reps < 1) throw ArgumentError("empirical_power: reps must be positive");
  std::vector<char> rejected(static_cast<std::size_t>(reps), 0);
  parallel_for(reps, threads, [&](std::int64_t r) {
    SeedStream s = stream.child(static_cast<std::uint64_t>(r));
    const std::vector<double> sample = generator(s, r);
    rejected[static_cast<std::size_t>(r)] =
        ks_test(sample, cdf, alpha).p_value < alpha ? 1 : 0;
  });
  PowerEstimate est;
  est.reps = reps;
  est.power = static_cast<double>(
                  std::count(rejected.begin(), rejected.end(), char{1})) /
              static_cast<double>(reps);
  est.std_error = binomial_std_error(est.power, reps);
  return est;
}

}  // namespace onestep
