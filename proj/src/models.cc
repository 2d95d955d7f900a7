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

#include "onestep/models.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "onestep/dists.h"
#include "onestep/errors.h"
#include "onestep/special.h"

namespace onestep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

std::span<const double> column_span(const Dataset& data) {
  if (data.cols() != 1) {
    throw ArgumentError("expected a single-column dataset");
  }
  return {data.observations.data(),
          static_cast<std::size_t>(data.observations.rows())};
}

void require_rows(const Dataset& data) {
  if (data.rows() < 1) throw ArgumentError("dataset is empty");
}

// log(1 + e^t) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Profile score of the Burr log-likelihood in c, with k at k(c).
struct BurrProfile {
  double k;
  double score;
  double slope;  // d score / dc
};

BurrProfile burr_profile(std::span<const double> log_x, double sum_log_x,
                         double c) {
  const double n = static_cast<double>(log_x.size());
  double t = 0.0;    // sum log(1 + x^c)
  double w = 0.0;    // sum x^c log x / (1 + x^c)
  double v = 0.0;    // sum x^c (log x)^2 / (1 + x^c)^2
  for (double lx : log_x) {
    const double z = c * lx;
    const double s = sigmoid(z);
    t += softplus(z);
    w += s * lx;
    v += s * (1.0 - s) * lx * lx;
  }
  const double k = n / t;
  BurrProfile p;
  p.k = k;
  p.score = n / c + sum_log_x - (k + 1.0) * w;
  p.slope = -n / (c * c) + k * k * w * w / n - (k + 1.0) * v;
  return p;
}

}  // namespace

Dataset column_dataset(std::span<const double> values) {
  Dataset d;
  d.observations.resize(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    d.observations(static_cast<Eigen::Index>(i), 0) = values[i];
  }
  return d;
}

bool ParamBox::contains(const ParamVector& theta) const {
  if (theta.size() != lo.size()) return false;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (!(theta[j] >= lo[j] && theta[j] <= hi[j])) return false;
  }
  return true;
}

ParamVector ParamBox::clamp(const ParamVector& theta) const {
  return theta.cwiseMax(lo).cwiseMin(hi);
}

ParamBox ParamBox::unbounded(int dim) {
  return {Eigen::VectorXd::Constant(dim, -kInf),
          Eigen::VectorXd::Constant(dim, kInf)};
}

ParamBox ParamBox::uniform(int dim, double lo, double hi) {
  return {Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
}

ParamVector Model::project(const ParamVector& theta) const {
  if (theta.size() != param_dim()) {
    throw ArgumentError("project: parameter has wrong dimension");
  }
  return box_.clamp(theta);
}

CdfFunction Model::reference_cdf(const ParamVector&) const {
  throw UnsupportedError(std::string(name()) +
                         ": reference cdf is only defined for scalar models");
}

void Model::check_theta(const ParamVector& theta) const {
  if (!box_.contains(theta) || !theta.allFinite()) {
    std::ostringstream os;
    os << name() << ": parameter (" << theta.transpose()
       << ") lies outside the parameter space";
    throw DomainError(os.str());
  }
}

void Model::check_block(const UniformBlock& block) const {
  if (block.cols() != uniforms_per_obs()) {
    throw ArgumentError(std::string(name()) + ": block has " +
                        std::to_string(block.cols()) +
                        " columns, model consumes " +
                        std::to_string(uniforms_per_obs()));
  }
}

// ---------------------------------------------------------------- Normal

NormalLocationModel::NormalLocationModel() : Model(ParamBox::unbounded(1)) {}

Dataset NormalLocationModel::sample_from_seeds(const ParamVector& theta,
                                               const UniformBlock& block) const {
  check_theta(theta);
  check_block(block);
  Dataset d;
  d.observations.resize(block.rows(), 1);
  for (std::int64_t i = 0; i < block.rows(); ++i) {
    d.observations(i, 0) = theta[0] + normal_quantile(block(i, 0));
  }
  return d;
}

ParamVector NormalLocationModel::estimate(const Dataset& data) const {
  require_rows(data);
  const auto x = column_span(data);
  ParamVector theta(1);
  theta[0] = std::accumulate(x.begin(), x.end(), 0.0) /
             static_cast<double>(x.size());
  return theta;
}

CdfFunction NormalLocationModel::reference_cdf(const ParamVector& theta) const {
  check_theta(theta);
  const double mu = theta[0];
  return [mu](double x) { return normal_cdf(x - mu); };
}

// ---------------------------------------------------------------- Burr

BurrModel::BurrModel() : Model(ParamBox::uniform(2, kFloor, kInf)) {}

Dataset BurrModel::sample_from_seeds(const ParamVector& theta,
                                     const UniformBlock& block) const {
  check_theta(theta);
  check_block(block);
  const double inv_c = 1.0 / theta[0];
  const double inv_k = 1.0 / theta[1];
  Dataset d;
  d.observations.resize(block.rows(), 1);
  for (std::int64_t i = 0; i < block.rows(); ++i) {
    d.observations(i, 0) =
        std::pow(std::expm1(-std::log1p(-block(i, 0)) * inv_k), inv_c);
  }
  return d;
}

double BurrModel::log_likelihood(std::span<const double> x, double c,
                                 double k) {
  double ll = 0.0;
  for (double xi : x) {
    const double lx = std::log(xi);
    ll += std::log(c) + std::log(k) + (c - 1.0) * lx - (k + 1.0) * softplus(c * lx);
  }
  return ll;
}

Eigen::Vector2d BurrModel::log_likelihood_gradient(std::span<const double> x,
                                                   double c, double k) {
  const double n = static_cast<double>(x.size());
  double sum_log = 0.0, t = 0.0, w = 0.0;
  for (double xi : x) {
    const double lx = std::log(xi);
    sum_log += lx;
    t += softplus(c * lx);
    w += sigmoid(c * lx) * lx;
  }
  return {n / c + sum_log - (k + 1.0) * w, n / k - t};
}

ParamVector BurrModel::estimate(const Dataset& data) const {
  require_rows(data);
  const auto x = column_span(data);
  std::vector<double> log_x(x.size());
  double sum_log = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) {
      throw ArgumentError("burr: observation " + std::to_string(i + 1) +
                          " is outside (0, inf)");
    }
    log_x[i] = std::log(x[i]);
    sum_log += log_x[i];
  }
  const double n = static_cast<double>(x.size());
  const double mean_log = sum_log / n;
  double var_log = 0.0;
  for (double lx : log_x) var_log += (lx - mean_log) * (lx - mean_log);
  var_log /= n;

  // The profile score is positive at the left end of the bracket; a
  // maximizer inside the bracket needs a sign change at the right end.
  double lo = kShapeLo;
  double hi = kShapeHi;
  const BurrProfile at_hi = burr_profile(log_x, sum_log, hi);
  if (at_hi.score > 0.0) {
    throw EstimationError("burr: profile likelihood increases up to c = 1e3",
                          {hi, at_hi.k}, std::abs(at_hi.score));
  }
  double c = var_log > 0.0 ? std::clamp(1.28 / std::sqrt(var_log), lo * 10, hi / 10)
                           : 1.0;
  BurrProfile p = burr_profile(log_x, sum_log, c);
  for (int iter = 0; iter < 200; ++iter) {
    if (p.score > 0.0) {
      lo = c;
    } else {
      hi = c;
    }
    if (std::abs(p.score) <= 1e-11 * n) {
      ParamVector theta(2);
      theta << c, p.k;
      return theta;
    }
    double next = c - p.score / p.slope;
    if (!(p.slope < 0.0) || !(next > lo && next < hi)) {
      next = std::sqrt(lo * hi);
    }
    if (std::abs(next - c) <= 1e-15 * c) {
      ParamVector theta(2);
      theta << next, burr_profile(log_x, sum_log, next).k;
      return theta;
    }
    c = next;
    p = burr_profile(log_x, sum_log, c);
  }
  throw EstimationError("burr: profile Newton did not converge", {c, p.k},
                        std::abs(p.score));
}

CdfFunction BurrModel::reference_cdf(const ParamVector& theta) const {
  check_theta(theta);
  const DistSpec d = DistSpec::burr(theta[0], theta[1]);
  return [d](double x) { return cdf(d, x); };
}

// ---------------------------------------------------------------- Beta

BetaModel::BetaModel() : Model(ParamBox::uniform(2, 1.0, kInf)) {}

Dataset BetaModel::sample_from_seeds(const ParamVector& theta,
                                     const UniformBlock& block) const {
  check_theta(theta);
  check_block(block);
  const DistSpec dist = DistSpec::beta(theta[0], theta[1]);
  Dataset d;
  d.observations.resize(block.rows(), 1);
  for (std::int64_t i = 0; i < block.rows(); ++i) {
    d.observations(i, 0) = quantile(dist, block(i, 0));
  }
  return d;
}

BetaStats beta_stats(std::span<const double> x) {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) {
      throw ArgumentError("beta: observation " + std::to_string(i + 1) +
                          " is outside (0, 1)");
    }
    s1 += std::log(x[i]);
    s2 += std::log1p(-x[i]);
  }
  const double n = static_cast<double>(x.size());
  return {s1 / n, s2 / n};
}

Eigen::Vector2d beta_log_likelihood_gradient(const BetaStats& stats,
                                             std::int64_t n, double a,
                                             double b) {
  const double nn = static_cast<double>(n);
  const double dab = digamma(a + b);
  return {nn * (stats.mean_log_x - digamma(a) + dab),
          nn * (stats.mean_log_1mx - digamma(b) + dab)};
}

ParamVector beta_moment_start(std::span<const double> x) {
  ParamVector start(2);
  start << 1.0, 1.0;
  if (x.size() < 2) return start;
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double var = 0.0;
  for (double xi : x) var += (xi - mean) * (xi - mean);
  var /= n;
  if (!(var > 0.0) || !(mean > 0.0 && mean < 1.0)) return start;
  const double common = mean * (1.0 - mean) / var - 1.0;
  if (!(common > 0.0)) return start;
  start << std::max(mean * common, 1.0), std::max((1.0 - mean) * common, 1.0);
  return start;
}

namespace {

double projected_gradient_norm(const BetaStats& stats, std::int64_t n,
                               const Eigen::Vector2d& theta) {
  Eigen::Vector2d g = beta_log_likelihood_gradient(stats, n, theta[0], theta[1]);
  for (int j = 0; j < 2; ++j) {
    if (theta[j] <= 1.0 && g[j] <= 0.0) g[j] = 0.0;
  }
  return g.norm();
}

}  // namespace

ParamVector beta_box_mle(const BetaStats& stats, std::int64_t n,
                         const ParamVector& start) {
  constexpr double kLower = 1.0;
  constexpr double kDiverged = 1e8;
  const double nn = static_cast<double>(n);
  auto objective = [&](double a, double b) {
    return nn * ((a - 1.0) * stats.mean_log_x + (b - 1.0) * stats.mean_log_1mx -
                 log_beta(a, b));
  };
  Eigen::Vector2d theta(std::max(start[0], kLower), std::max(start[1], kLower));
  double value = objective(theta[0], theta[1]);
  double pg_norm = kInf;
  for (int iter = 0; iter < 500; ++iter) {
    const Eigen::Vector2d g =
        beta_log_likelihood_gradient(stats, n, theta[0], theta[1]);
    // Coordinates pinned at the bound with the gradient pointing outward.
    std::array<bool, 2> active{};
    Eigen::Vector2d pg = g;
    for (int j = 0; j < 2; ++j) {
      active[j] = theta[j] <= kLower && g[j] <= 0.0;
      if (active[j]) pg[j] = 0.0;
    }
    pg_norm = pg.norm();
    if (pg_norm <= 1e-10 * nn) {
      return theta;
    }
    const double tab = trigamma(theta[0] + theta[1]);
    Eigen::Matrix2d h;
    h << tab - trigamma(theta[0]), tab, tab, tab - trigamma(theta[1]);
    h *= nn;
    Eigen::Vector2d dir = Eigen::Vector2d::Zero();
    if (!active[0] && !active[1]) {
      dir = -h.ldlt().solve(g);
    } else if (!active[0]) {
      dir[0] = -g[0] / h(0, 0);
    } else if (!active[1]) {
      dir[1] = -g[1] / h(1, 1);
    }
    if (!dir.allFinite() || g.dot(dir) <= 0.0) dir = pg / nn;

    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving <= 50; ++halving) {
      Eigen::Vector2d cand = (theta + step * dir).cwiseMax(kLower);
      const double cand_value = objective(cand[0], cand[1]);
      // Near the optimum the objective stops resolving ascent; a shrinking
      // projected gradient is accepted instead.
      if (cand_value >= value ||
          projected_gradient_norm(stats, n, cand) < 0.5 * pg_norm) {
        const bool stalled = (cand - theta).norm() <= 1e-15 * theta.norm();
        theta = cand;
        value = cand_value;
        improved = !stalled;
        break;
      }
      step *= 0.5;
    }
    if (theta.maxCoeff() > kDiverged) {
      throw EstimationError("beta: likelihood has no finite maximizer",
                            {theta[0], theta[1]}, pg_norm);
    }
    if (!improved) {
      // No ascent possible at machine precision: accept if nearly stationary.
      if (pg_norm <= 1e-6 * nn) return theta;
      throw EstimationError("beta: Newton step halving failed",
                            {theta[0], theta[1]}, pg_norm);
    }
  }
  throw EstimationError("beta: Newton did not converge", {theta[0], theta[1]},
                        pg_norm);
}

ParamVector BetaModel::estimate(const Dataset& data) const {
  require_rows(data);
  const auto x = column_span(data);
  const BetaStats stats = beta_stats(x);
  return beta_box_mle(stats, static_cast<std::int64_t>(x.size()),
                      beta_moment_start(x));
}

CdfFunction BetaModel::reference_cdf(const ParamVector& theta) const {
  check_theta(theta);
  const double a = theta[0];
  const double b = theta[1];
  return [a, b](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return reg_inc_beta(a, b, x);
  };
}

// ---------------------------------------------------------------- Bern + U

BernoulliUniformModel::BernoulliUniformModel()
    : Model(ParamBox::uniform(1, 0.0, 1.0)) {}

Dataset BernoulliUniformModel::sample_from_seeds(const ParamVector& theta,
                                                 const UniformBlock& block) const {
  check_theta(theta);
  check_block(block);
  Dataset d;
  d.observations.resize(block.rows(), 1);
  for (std::int64_t i = 0; i < block.rows(); ++i) {
    const double w = block(i, 0) > 1.0 - theta[0] ? 1.0 : 0.0;
    d.observations(i, 0) = w + block(i, 1);
  }
  return d;
}

ParamVector BernoulliUniformModel::estimate(const Dataset& data) const {
  require_rows(data);
  const auto x = column_span(data);
  const double mean =
      std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  ParamVector theta(1);
  theta[0] = std::clamp(mean - 0.5, 0.0, 1.0);
  return theta;
}

CdfFunction BernoulliUniformModel::reference_cdf(const ParamVector& theta) const {
  check_theta(theta);
  const double p = theta[0];
  return [p](double x) {
    return (1.0 - p) * std::clamp(x, 0.0, 1.0) +
           p * std::clamp(x - 1.0, 0.0, 1.0);
  };
}

// ---------------------------------------------------------------- Regression

RegressionModel::RegressionModel(Eigen::MatrixXd design)
    : Model(ParamBox::unbounded(static_cast<int>(design.cols()))),
      design_(std::move(design)) {
  if (design_.rows() < design_.cols() || design_.cols() < 1) {
    throw ArgumentError("regression: design must have at least as many rows "
                        "as columns");
  }
  gram_.compute(design_.transpose() * design_);
  if (gram_.info() != Eigen::Success || !gram_.isPositive()) {
    throw ArgumentError("regression: design is rank deficient");
  }
}

Dataset RegressionModel::sample_from_seeds(const ParamVector& theta,
                                           const UniformBlock& block) const {
  check_theta(theta);
  check_block(block);
  if (block.rows() != design_.rows()) {
    throw ArgumentError("regression: block rows must equal design rows");
  }
  Dataset d;
  d.observations = design_ * theta;
  for (std::int64_t i = 0; i < block.rows(); ++i) {
    d.observations(i, 0) += normal_quantile(block(i, 0));
  }
  return d;
}

ParamVector RegressionModel::estimate(const Dataset& data) const {
  if (data.rows() != design_.rows() || data.cols() != 1) {
    throw ArgumentError("regression: response must be a column of length n");
  }
  return gram_.solve(design_.transpose() * data.observations.col(0));
}

// ---------------------------------------------------------------- Log-linear

namespace {

// Pairs of factors (g=0, l=1, s=2, i=3) in coefficient order.
constexpr std::array<std::array<int, 2>, 6> kPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int level(int cell, int factor) { return (cell >> (3 - factor)) & 1; }

}  // namespace

const std::array<double, LogLinearModel::kCells>& seatbelt_counts() {
  static const std::array<double, LogLinearModel::kCells> counts = {
      7287, 996,  11587, 759, 3246,  973, 6134, 757,
      10381, 812, 10969, 380, 6123, 1084, 6693, 513};
  return counts;
}

LogLinearModel::LogLinearModel() : Model(ParamBox::unbounded(kCoefficients)) {
  design_.setZero();
  for (int cell = 0; cell < kCells; ++cell) {
    design_(cell, 0) = 1.0;
    for (int f = 0; f < 4; ++f) {
      design_(cell, 1 + f) = level(cell, f) == 0 ? 1.0 : 0.0;
    }
    for (int p = 0; p < 6; ++p) {
      const bool both = level(cell, kPairs[p][0]) == 0 &&
                        level(cell, kPairs[p][1]) == 0;
      design_(cell, 5 + p) = both ? 1.0 : 0.0;
    }
  }
}

Eigen::VectorXd LogLinearModel::probabilities(const ParamVector& theta) const {
  if (theta.size() != kCoefficients) {
    throw ArgumentError("loglinear: expected 11 coefficients");
  }
  Eigen::VectorXd eta = design_ * theta;
  eta.array() -= eta.maxCoeff();
  Eigen::VectorXd p = eta.array().exp();
  return p / p.sum();
}

Dataset LogLinearModel::sample_from_seeds(const ParamVector& theta,
                                          const UniformBlock& block) const {
  check_theta(theta);
  check_block(block);
  const Eigen::VectorXd p = probabilities(theta);
  std::array<double, kCells> cum{};
  double acc = 0.0;
  for (int c = 0; c < kCells; ++c) {
    acc += p[c];
    cum[c] = acc;
  }
  cum[kCells - 1] = 1.0;
  Dataset d;
  d.observations = Eigen::MatrixXd::Zero(1, kCells);
  for (std::int64_t i = 0; i < block.rows(); ++i) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), block(i, 0));
    d.observations(0, it - cum.begin()) += 1.0;
  }
  return d;
}

LogLinearModel::Fit LogLinearModel::fit(const Dataset& data) const {
  if (data.rows() != 1 || data.cols() != kCells) {
    throw ArgumentError("loglinear: expected one row of 16 counts");
  }
  Eigen::VectorXd counts = data.observations.row(0).transpose();
  for (int c = 0; c < kCells; ++c) {
    if (counts[c] < 0.0 || counts[c] != std::floor(counts[c])) {
      throw ArgumentError("loglinear: cell " + std::to_string(c + 1) +
                          " is not a non-negative integer count");
    }
  }
  const double total = counts.sum();
  if (!(total > 0.0)) throw ArgumentError("loglinear: table is empty");
  const Eigen::VectorXd observed = counts / total;

  // observed two-way margins, indexed [pair][2 * level_a + level_b]
  std::array<std::array<double, 4>, 6> target{};
  for (int c = 0; c < kCells; ++c) {
    for (int p = 0; p < 6; ++p) {
      target[p][2 * level(c, kPairs[p][0]) + level(c, kPairs[p][1])] +=
          observed[c];
    }
  }

  Eigen::VectorXd fitted = Eigen::VectorXd::Constant(kCells, 1.0 / kCells);
  double max_gap = kInf;
  int sweep = 0;
  while (sweep < kIpfMaxSweeps) {
    ++sweep;
    for (int p = 0; p < 6; ++p) {
      std::array<double, 4> margin{};
      for (int c = 0; c < kCells; ++c) {
        margin[2 * level(c, kPairs[p][0]) + level(c, kPairs[p][1])] += fitted[c];
      }
      for (int c = 0; c < kCells; ++c) {
        const int idx = 2 * level(c, kPairs[p][0]) + level(c, kPairs[p][1]);
        fitted[c] = margin[idx] > 0.0 ? fitted[c] * target[p][idx] / margin[idx]
                                      : 0.0;
      }
    }
    max_gap = 0.0;
    for (int p = 0; p < 6; ++p) {
      std::array<double, 4> margin{};
      for (int c = 0; c < kCells; ++c) {
        margin[2 * level(c, kPairs[p][0]) + level(c, kPairs[p][1])] += fitted[c];
      }
      for (int idx = 0; idx < 4; ++idx) {
        max_gap = std::max(max_gap, std::abs(margin[idx] - target[p][idx]));
      }
    }
    if (max_gap <= kIpfTolerance) break;
  }
  if (max_gap > kIpfTolerance) {
    throw EstimationError("loglinear: IPF did not converge", to_vector(fitted),
                          max_gap);
  }
  Fit result;
  result.probabilities = fitted / fitted.sum();
  result.coefficients = coefficients(result.probabilities, total);
  result.sweeps = sweep;
  return result;
}

Eigen::VectorXd LogLinearModel::coefficients(const Eigen::VectorXd& probabilities,
                                             double total) const {
  const double floor = 0.5 / total;
  Eigen::VectorXd log_p(kCells);
  for (int c = 0; c < kCells; ++c) {
    log_p[c] = std::log(probabilities[c] > 0.0 ? probabilities[c] : floor);
  }
  return (design_.transpose() * design_).ldlt().solve(design_.transpose() * log_p);
}

ParamVector LogLinearModel::estimate(const Dataset& data) const {
  return fit(data).coefficients;
}

// ---------------------------------------------------------------- Tulap pair

TulapTwoSampleModel::TulapTwoSampleModel(std::int64_t n, std::int64_t m,
                                         double epsilon)
    : Model(ParamBox::uniform(1, 0.0, 1.0)), n_(n), m_(m), epsilon_(epsilon) {
  if (n < 1 || m < 1) throw ArgumentError("tulap-two-sample: need n, m >= 1");
  if (!(epsilon > 0.0)) throw ArgumentError("tulap-two-sample: need epsilon > 0");
}

Dataset TulapTwoSampleModel::sample_from_seeds(const ParamVector& theta,
                                               const UniformBlock& block) const {
  check_theta(theta);
  check_block(block);
  if (block.rows() != 1) {
    throw ArgumentError("tulap-two-sample: the dataset is a single (x, y) row");
  }
  const auto u = block.row(0);
  const DistSpec bx = DistSpec::binomial(n_, theta[0]);
  const DistSpec by = DistSpec::binomial(m_, theta[0]);
  Dataset d;
  d.observations.resize(1, 2);
  d.observations(0, 0) =
      quantile(bx, u[0]) + tulap_from_uniforms(u[1], u[2], u[3], epsilon_);
  d.observations(0, 1) =
      quantile(by, u[4]) + tulap_from_uniforms(u[5], u[6], u[7], epsilon_);
  return d;
}

ParamVector TulapTwoSampleModel::estimate(const Dataset& data) const {
  if (data.rows() != 1 || data.cols() != 2) {
    throw ArgumentError("tulap-two-sample: expected one (x, y) row");
  }
  ParamVector theta(1);
  theta[0] = std::clamp((data.observations(0, 0) + data.observations(0, 1)) /
                            static_cast<double>(n_ + m_),
                        0.0, 1.0);
  return theta;
}

std::unique_ptr<Model> make_scalar_model(std::string_view name) {
  if (name == "normal") return std::make_unique<NormalLocationModel>();
  if (name == "burr") return std::make_unique<BurrModel>();
  if (name == "beta") return std::make_unique<BetaModel>();
  if (name == "bernoulli-uniform") {
    return std::make_unique<BernoulliUniformModel>();
  }
  throw ArgumentError("unknown model '" + std::string(name) +
                      "' (expected normal, burr, beta or bernoulli-uniform)");
}

}  // namespace onestep
