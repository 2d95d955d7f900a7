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

#ifndef ONESTEP_MODELS_H_
#define ONESTEP_MODELS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "onestep/randcore.h"

namespace onestep {

using ParamVector = Eigen::VectorXd;
using CdfFunction = std::function<double(double)>;

// Observations, one row per unit. Scalar models use a single column; the
// log-linear model stores one row of 16 cell counts; the Tulap two-sample
// model stores the single row (x_tilde, y_tilde).
struct Dataset {
  Eigen::MatrixXd observations;

  std::int64_t rows() const { return observations.rows(); }
  std::int64_t cols() const { return observations.cols(); }
};

Dataset column_dataset(std::span<const double> values);

// Axis-aligned parameter space. Bounds may be infinite.
struct ParamBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  bool contains(const ParamVector& theta) const;
  // Euclidean projection onto the box.
  ParamVector clamp(const ParamVector& theta) const;

  static ParamBox unbounded(int dim);
  static ParamBox uniform(int dim, double lo, double hi);
};

// A parametric family with a seeded sampler X_theta(omega), an efficient
// estimator and a box-shaped parameter space.
//
// sample_from_seeds consumes exactly uniforms_per_obs() uniforms per row of
// the block for every theta, so one block drives the sampler at two
// parameter values with aligned seeds.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string_view name() const = 0;
  int param_dim() const { return static_cast<int>(box_.lo.size()); }
  const ParamBox& param_box() const { return box_; }
  virtual int uniforms_per_obs() const = 0;

  // Deterministic in (theta, block). Throws DomainError if theta is outside
  // the box and ArgumentError on a block shape mismatch.
  virtual Dataset sample_from_seeds(const ParamVector& theta,
                                    const UniformBlock& block) const = 0;

  // Efficient estimator. Throws EstimationError on non-convergence and
  // ArgumentError on data outside the model's support.
  virtual ParamVector estimate(const Dataset& data) const = 0;

  // Coordinate-wise clamp onto the parameter box.
  ParamVector project(const ParamVector& theta) const;

  // x -> P_theta(X <= x). Throws UnsupportedError for vector-valued models.
  virtual CdfFunction reference_cdf(const ParamVector& theta) const;

 protected:
  explicit Model(ParamBox box) : box_(std::move(box)) {}

  void check_theta(const ParamVector& theta) const;
  void check_block(const UniformBlock& block) const;

 private:
  ParamBox box_;
};

// X ~ N(mu, 1); theta = mu; estimator: sample mean.
class NormalLocationModel final : public Model {
 public:
  NormalLocationModel();
  std::string_view name() const override { return "normal"; }
  int uniforms_per_obs() const override { return 1; }
  Dataset sample_from_seeds(const ParamVector& theta,
                            const UniformBlock& block) const override;
  ParamVector estimate(const Dataset& data) const override;
  CdfFunction reference_cdf(const ParamVector& theta) const override;
};

// Burr Type XII; theta = (c, k) on [1e-8, inf)^2; estimator: MLE by profile
// Newton in c with k(c) = n / sum log(1 + x_i^c).
class BurrModel final : public Model {
 public:
  static constexpr double kFloor = 1e-8;
  static constexpr double kShapeLo = 1e-3;
  static constexpr double kShapeHi = 1e3;

  BurrModel();
  std::string_view name() const override { return "burr"; }
  int uniforms_per_obs() const override { return 1; }
  Dataset sample_from_seeds(const ParamVector& theta,
                            const UniformBlock& block) const override;
  ParamVector estimate(const Dataset& data) const override;
  CdfFunction reference_cdf(const ParamVector& theta) const override;

  // Gradient of the full log-likelihood in (c, k).
  static Eigen::Vector2d log_likelihood_gradient(std::span<const double> x,
                                                 double c, double k);
  static double log_likelihood(std::span<const double> x, double c, double k);
};

// Beta(alpha, beta) on [1, inf)^2; estimator: MLE by projected Newton.
class BetaModel final : public Model {
 public:
  BetaModel();
  std::string_view name() const override { return "beta"; }
  int uniforms_per_obs() const override { return 1; }
  Dataset sample_from_seeds(const ParamVector& theta,
                            const UniformBlock& block) const override;
  ParamVector estimate(const Dataset& data) const override;
  CdfFunction reference_cdf(const ParamVector& theta) const override;
};

// Sufficient statistics of a Beta sample: means of log x and log(1 - x).
struct BetaStats {
  double mean_log_x;
  double mean_log_1mx;
};

BetaStats beta_stats(std::span<const double> x);

// Gradient of n[(a-1) s1 + (b-1) s2 - log B(a, b)].
Eigen::Vector2d beta_log_likelihood_gradient(const BetaStats& stats,
                                             std::int64_t n, double a, double b);

// Maximizes n[(a-1) s1 + (b-1) s2 - log B(a, b)] over [1, inf)^2 by
// projected Newton with step halving, starting from `start` (projected).
ParamVector beta_box_mle(const BetaStats& stats, std::int64_t n,
                         const ParamVector& start);

// Method-of-moments start (projected onto [1, inf)^2).
ParamVector beta_moment_start(std::span<const double> x);

// Bern(theta) + U(0, 1) with k = 2 uniforms per observation:
// obs_i = 1{u1_i > 1 - theta} + u2_i. Estimator: mean - 1/2 clamped to [0, 1].
class BernoulliUniformModel final : public Model {
 public:
  BernoulliUniformModel();
  std::string_view name() const override { return "bernoulli-uniform"; }
  int uniforms_per_obs() const override { return 2; }
  Dataset sample_from_seeds(const ParamVector& theta,
                            const UniformBlock& block) const override;
  ParamVector estimate(const Dataset& data) const override;
  CdfFunction reference_cdf(const ParamVector& theta) const override;
};

// y = Z beta + e, e ~ N(0, I), with Z fixed. Estimator: least squares.
class RegressionModel final : public Model {
 public:
  explicit RegressionModel(Eigen::MatrixXd design);
  std::string_view name() const override { return "regression"; }
  int uniforms_per_obs() const override { return 1; }
  Dataset sample_from_seeds(const ParamVector& theta,
                            const UniformBlock& block) const override;
  ParamVector estimate(const Dataset& data) const override;

  const Eigen::MatrixXd& design() const { return design_; }

 private:
  Eigen::MatrixXd design_;
  Eigen::LDLT<Eigen::MatrixXd> gram_;
};

// Hierarchical log-linear model with all main effects and two-way
// interactions on a 2x2x2x2 table (gender, location, seatbelt, injury).
//
// Cells are ordered as the rows of the seatbelt table times its injury
// columns: index = ((g * 2 + l) * 2 + s) * 2 + i, level 0 first.
// theta holds 11 dummy-coded coefficients with the last level of each factor
// as baseline, ordered
//   (intercept, G, L, S, I, GL, GS, GI, LS, LI, SI).
class LogLinearModel final : public Model {
 public:
  static constexpr int kCells = 16;
  static constexpr int kCoefficients = 11;

  struct Fit {
    Eigen::VectorXd probabilities;  // 16 fitted cell probabilities
    Eigen::VectorXd coefficients;   // 11 coefficients
    int sweeps = 0;
  };

  LogLinearModel();
  std::string_view name() const override { return "loglinear"; }
  int uniforms_per_obs() const override { return 1; }
  // One uniform per subject against the cumulative cell probabilities.
  Dataset sample_from_seeds(const ParamVector& theta,
                            const UniformBlock& block) const override;
  ParamVector estimate(const Dataset& data) const override;

  // Iterative proportional fitting on the six two-way margins.
  Fit fit(const Dataset& data) const;

  // Cell probabilities for a coefficient vector (softmax of Z theta).
  Eigen::VectorXd probabilities(const ParamVector& theta) const;

  // Coefficients of strictly positive cell probabilities; zero cells are
  // first raised to half a count out of `total`.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& probabilities,
                               double total) const;

  const Eigen::Matrix<double, kCells, kCoefficients>& design() const {
    return design_;
  }

  static constexpr double kIpfTolerance = 1e-12;
  static constexpr int kIpfMaxSweeps = 10000;

 private:
  Eigen::Matrix<double, kCells, kCoefficients> design_;
};

// Observed seatbelt table (68,694 passengers), in LogLinearModel cell order.
const std::array<double, LogLinearModel::kCells>& seatbelt_counts();

// The (x_tilde, y_tilde) pair of the private two-sample proportion problem
// under H0: theta_X = theta_Y = theta. k = 8 uniforms:
//   x_tilde = BinomialQuantile(n, theta)(u1) + tulap(u2, u3, u4)
//   y_tilde = BinomialQuantile(m, theta)(u5) + tulap(u6, u7, u8)
// Estimator: min[max{(x_tilde + y_tilde) / (n + m), 0}, 1].
class TulapTwoSampleModel final : public Model {
 public:
  TulapTwoSampleModel(std::int64_t n, std::int64_t m, double epsilon);
  std::string_view name() const override { return "tulap-two-sample"; }
  int uniforms_per_obs() const override { return 8; }
  Dataset sample_from_seeds(const ParamVector& theta,
                            const UniformBlock& block) const override;
  ParamVector estimate(const Dataset& data) const override;

  std::int64_t n() const { return n_; }
  std::int64_t m() const { return m_; }
  double epsilon() const { return epsilon_; }

 private:
  std::int64_t n_;
  std::int64_t m_;
  double epsilon_;
};

// Constructs one of the scalar models by CLI name
// ("normal", "burr", "beta", "bernoulli-uniform"). Throws ArgumentError.
std::unique_ptr<Model> make_scalar_model(std::string_view name);

}  // namespace onestep

#endif  // ONESTEP_MODELS_H_
