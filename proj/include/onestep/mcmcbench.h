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

#ifndef ONESTEP_MCMCBENCH_H_
#define ONESTEP_MCMCBENCH_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "onestep/randcore.h"

namespace onestep {

enum class SweepMode {
  kNaive,        // full O(n d) log-density per update, O(n^2 d) per sweep
  kIncremental,  // O(d) cached update per coordinate
};

// State of a one-at-a-time Metropolis chain on responses y, conditioning a
// Gaussian linear regression on its least-squares estimate beta_hat. The
// target is
//   log f(y) = -1/2 ||y - Z beta_hat||^2 - ||Z'(y - Z beta_hat)||^2 / (2 sigma^2 d)
// up to a constant. The Hessian of the log-likelihood is -Z'Z, constant in
// y, so its determinant factor only shifts the constant.
class McmcState {
 public:
  McmcState(Eigen::VectorXd y, Eigen::MatrixXd design, Eigen::VectorXd beta_hat,
            double sigma);

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& design() const { return design_; }
  const Eigen::VectorXd& beta_hat() const { return beta_hat_; }
  double sigma() const { return sigma_; }
  const Eigen::VectorXd& residual() const { return residual_; }  // y - Z beta_hat
  const Eigen::VectorXd& gradient() const { return gradient_; }  // Z' residual
  std::int64_t acceptance_count() const { return acceptance_count_; }
  std::int64_t proposal_count() const { return proposal_count_; }
  double acceptance_rate() const;

  // Recomputes residual and gradient from y.
  void refresh_cache();

 private:
  friend void mcmc_sweep(McmcState& state, double step_sd, SweepMode mode,
                         SeedStream& stream);

  Eigen::VectorXd y_;
  Eigen::MatrixXd design_;
  Eigen::VectorXd beta_hat_;
  double sigma_;
  Eigen::VectorXd fitted_;  // Z beta_hat, constant
  Eigen::VectorXd residual_;
  Eigen::VectorXd gradient_;
  std::int64_t acceptance_count_ = 0;
  std::int64_t proposal_count_ = 0;
};

// Log target density of the state's current y, from its caches.
double conditional_logdensity(const McmcState& state);

// Same quantity evaluated from scratch for an arbitrary y.
double conditional_logdensity_at(const McmcState& state, const Eigen::VectorXd& y);

// One sweep: for i = 0..n-1 propose y_i' = y_i + step_sd * Phi^{-1}(u) and
// accept with the Metropolis rule, two stream uniforms per update. Both
// modes make identical accept decisions up to rounding.
void mcmc_sweep(McmcState& state, double step_sd, SweepMode mode,
                SeedStream& stream);

// Regression data for the benchmark: Z_i ~ N(0, I_d), y = Z beta + N(0, 1).
struct RegressionData {
  Eigen::MatrixXd design;
  Eigen::VectorXd y;
  Eigen::VectorXd beta_hat;
};

RegressionData simulate_regression(std::int64_t n, const Eigen::VectorXd& beta,
                                   SeedStream& stream);

struct BenchRow {
  std::int64_t n = 0;
  double seconds_per_mcmc_round = 0.0;
  double seconds_per_onestep = 0.0;
  double acceptance_rate = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double mcmc_slope = 0.0;     // least-squares slope of log time vs log n
  double onestep_slope = 0.0;
};

struct BenchOptions {
  std::vector<std::int64_t> n_grid;
  int sweeps = 100;          // sweeps per timed repetition
  int onestep_reps = 1000;   // one-step runs per timed repetition
  double step_sd = 0.1;
  int repetitions = 5;       // timed repetitions; the median is reported
  SweepMode mode = SweepMode::kNaive;
  std::uint64_t seed = kDefaultMasterSeed;
};

// Times MCMC rounds and one-step runs on each n (serially; warmup discarded,
// median of the timed repetitions) and fits log-log slopes.
BenchReport run_benchmark(const BenchOptions& options);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace onestep

#endif  // ONESTEP_MCMCBENCH_H_
