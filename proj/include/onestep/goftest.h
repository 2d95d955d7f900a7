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

#ifndef ONESTEP_GOFTEST_H_
#define ONESTEP_GOFTEST_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "onestep/models.h"
#include "onestep/randcore.h"

namespace onestep {

struct KsResult {
  double statistic = 0.0;  // D_n in [0, 1]
  double p_value = 1.0;
  // Reject decision at the requested alpha and at the usual .01/.05/.10.
  std::map<double, bool> reject_at;
};

// sup_x |F_n(x) - F(x)|, computed at the order statistics as
// max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n). Throws on an empty sample.
double ks_statistic(std::span<const double> sample, const CdfFunction& cdf);

// Asymptotic Kolmogorov tail P(K > x) = 2 sum_{j>=1} (-1)^(j-1) e^{-2 j^2 x^2}.
// Uses the theta-function dual series for small x, where the alternating
// series converges slowly.
double kolmogorov_pvalue(double x);

// Smallest D with kolmogorov_pvalue(sqrt(n) D) <= alpha.
double ks_critical(double alpha, std::int64_t n);

// One-sample test with p-value from the asymptotic distribution of
// sqrt(n) D_n; reject iff p < alpha.
KsResult ks_test(std::span<const double> sample, const CdfFunction& cdf,
                 double alpha);

struct TwoSampleKs {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample statistic with the asymptotic p-value at sqrt(nm/(n+m)) D.
TwoSampleKs ks_two_sample(std::span<const double> a, std::span<const double> b);

struct PowerEstimate {
  double power = 0.0;
  double std_error = 0.0;  // sqrt(p(1-p)/reps)
  std::int64_t reps = 0;
};

// Replicate r draws its sample from stream.child(r); the estimate is the
// fraction of replicates rejected at alpha. Deterministic in the stream.
using SampleGenerator =
    std::function<std::vector<double>(SeedStream& stream, std::int64_t rep)>;

PowerEstimate empirical_power(const SampleGenerator& generator,
                              const CdfFunction& cdf, double alpha,
                              std::int64_t reps, const SeedStream& stream,
                              int threads = 1);

// Binomial standard error of a proportion estimated from `reps` trials.
double binomial_std_error(double p, std::int64_t reps);

}  // namespace onestep

#endif  // ONESTEP_GOFTEST_H_
