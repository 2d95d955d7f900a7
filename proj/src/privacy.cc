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
#include <vector>

#include "onestep/dists.h"
#include "onestep/errors.h"

namespace onestep {

Eigen::VectorXd laplace_mechanism(const Eigen::VectorXd& t,
                                  const PrivacySpec& spec, SeedStream& stream) {
  if (!(spec.epsilon > 0.0)) {
    throw ArgumentError("laplace_mechanism: epsilon must be positive");
  }
  if (!(spec.sensitivity > 0.0) || !std::isfinite(spec.sensitivity)) {
    throw ArgumentError(
        "laplace_mechanism: sensitivity must be finite and positive");
  }
  const DistSpec noise = DistSpec::laplace(0.0, spec.sensitivity / spec.epsilon);
  Eigen::VectorXd out = t;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out[j] += quantile(noise, stream.next_uniform());
  }
  return out;
}

double beta_threshold(std::int64_t n) {
  if (n < 2) throw ArgumentError("beta_threshold: need n >= 2");
  const double nn = static_cast<double>(n);
  return std::min(0.5, 10.0 / (std::log(nn) * std::sqrt(nn)));
}

double beta_sensitivity(double t, std::int64_t n) {
  return 2.0 / static_cast<double>(n) * std::abs(std::log(t) - std::log1p(-t));
}

BetaStats clamped_beta_stats(std::span<const double> x, double t) {
  std::vector<double> clamped(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) {
      throw ArgumentError("dp_beta: observation " + std::to_string(i + 1) +
                          " is outside (0, 1)");
    }
    clamped[i] = std::clamp(x[i], t, 1.0 - t);
  }
  return beta_stats(clamped);
}

ParamVector dp_beta_estimate(const Dataset& data, double epsilon,
                             SeedStream& stream) {
  if (!(epsilon > 0.0)) throw ArgumentError("dp_beta: epsilon must be positive");
  if (data.cols() != 1 || data.rows() < 2) {
    throw ArgumentError("dp_beta: expected a single column of at least 2 rows");
  }
  const std::span<const double> x(data.observations.data(),
                                  static_cast<std::size_t>(data.rows()));
  const std::int64_t n = data.rows();
  const double t = beta_threshold(n);
  const BetaStats exact = clamped_beta_stats(x, t);

  Eigen::VectorXd stats(2);
  stats << exact.mean_log_x, exact.mean_log_1mx;
  const double sensitivity = beta_sensitivity(t, n);
  // With t = 1/2 every clamped value is 1/2: the statistics are constant and
  // releasing them costs no budget.
  if (sensitivity > 0.0) {
    stats = laplace_mechanism(
        stats, PrivacySpec{epsilon, sensitivity, Mechanism::kLaplace}, stream);
  }

  std::vector<double> clamped(x.begin(), x.end());
  for (double& v : clamped) v = std::clamp(v, t, 1.0 - t);
  return beta_box_mle(BetaStats{stats[0], stats[1]}, n,
                      beta_moment_start(clamped));
}

double tulap_mechanism(std::int64_t count, double epsilon, SeedStream& stream) {
  if (!(epsilon > 0.0)) throw ArgumentError("tulap_mechanism: need epsilon > 0");
  const double u1 = stream.next_uniform();
  const double u2 = stream.next_uniform();
  const double u3 = stream.next_uniform();
  return static_cast<double>(count) + tulap_from_uniforms(u1, u2, u3, epsilon);
}

}  // namespace onestep
