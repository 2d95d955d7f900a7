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

#include "onestep/mcmcbench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "onestep/dists.h"
#include "onestep/errors.h"
#include "onestep/models.h"
#include "onestep/synth.h"

namespace onestep {
namespace {

using Clock = std::chrono::steady_clock;

double penalty_weight(const McmcState& s) {
  const double d = static_cast<double>(s.design().cols());
  return 1.0 / (2.0 * s.sigma() * s.sigma() * d);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Median seconds per unit of `work(batch)`, doubling the batch until one
// timed call spans at least 2 ms.
template <class Work>
double time_per_unit(int batch, int repetitions, Work&& work) {
  work(1);  // warmup
  for (;;) {
    const auto t0 = Clock::now();
    work(batch);
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (elapsed >= 2e-3) break;
    batch *= 2;
  }
  std::vector<double> per_unit;
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = Clock::now();
    work(batch);
    per_unit.push_back(
        std::chrono::duration<double>(Clock::now() - t0).count() / batch);
  }
  return median(std::move(per_unit));
}

}  // namespace

McmcState::McmcState(Eigen::VectorXd y, Eigen::MatrixXd design,
                     Eigen::VectorXd beta_hat, double sigma)
    : y_(std::move(y)),
      design_(std::move(design)),
      beta_hat_(std::move(beta_hat)),
      sigma_(sigma) {
  if (design_.rows() != y_.size() || design_.cols() != beta_hat_.size()) {
    throw ArgumentError("McmcState: inconsistent shapes");
  }
  if (!(sigma_ > 0.0)) throw ArgumentError("McmcState: sigma must be positive");
  fitted_ = design_ * beta_hat_;
  refresh_cache();
}

void McmcState::refresh_cache() {
  residual_ = y_ - fitted_;
  gradient_ = design_.transpose() * residual_;
}

double McmcState::acceptance_rate() const {
  return proposal_count_ == 0 ? 0.0
                              : static_cast<double>(acceptance_count_) /
                                    static_cast<double>(proposal_count_);
}

double conditional_logdensity(const McmcState& s) {
  return -0.5 * s.residual().squaredNorm() -
         penalty_weight(s) * s.gradient().squaredNorm();
}

double conditional_logdensity_at(const McmcState& s, const Eigen::VectorXd& y) {
  const Eigen::VectorXd r = y - s.design() * s.beta_hat();
  const Eigen::VectorXd g = s.design().transpose() * r;
  return -0.5 * r.squaredNorm() - penalty_weight(s) * g.squaredNorm();
}

void mcmc_sweep(McmcState& state, double step_sd, SweepMode mode,
                SeedStream& stream) {
  if (!(step_sd > 0.0)) throw ArgumentError("mcmc_sweep: step_sd must be positive");
  const Eigen::Index n = state.y_.size();
  const double weight = penalty_weight(state);
  const auto& z = state.design_;

  if (mode == SweepMode::kNaive) {
    Eigen::VectorXd scratch(n);
    Eigen::VectorXd grad(z.cols());
    auto full_logdensity = [&]() {
      scratch.noalias() = state.y_ - state.fitted_;
      grad.noalias() = z.transpose() * scratch;
      return -0.5 * scratch.squaredNorm() - weight * grad.squaredNorm();
    };
    double current = full_logdensity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double step = step_sd * normal_quantile(stream.next_uniform());
      const double log_u = std::log(stream.next_uniform());
      const double old = state.y_[i];
      state.y_[i] = old + step;
      const double proposed = full_logdensity();
      ++state.proposal_count_;
      if (log_u < proposed - current) {
        current = proposed;
        ++state.acceptance_count_;
      } else {
        state.y_[i] = old;
      }
    }
    state.refresh_cache();
    return;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = step_sd * normal_quantile(stream.next_uniform());
    const double log_u = std::log(stream.next_uniform());
    const double r = state.residual_[i];
    const auto zi = z.row(i);
    const double d_rr = step * (2.0 * r + step);
    const double d_gg =
        step * (2.0 * zi.dot(state.gradient_) + step * zi.squaredNorm());
    ++state.proposal_count_;
    if (log_u < -0.5 * d_rr - weight * d_gg) {
      state.y_[i] += step;
      state.residual_[i] += step;
      state.gradient_ += step * zi.transpose();
      ++state.acceptance_count_;
    }
  }
  state.refresh_cache();
}

RegressionData simulate_regression(std::int64_t n, const Eigen::VectorXd& beta,
                                   SeedStream& stream) {
  if (n < beta.size()) throw ArgumentError("simulate_regression: n < d");
  RegressionData data;
  data.design.resize(n, beta.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      data.design(i, j) = normal_quantile(stream.next_uniform());
    }
  }
  data.y = data.design * beta;
  for (Eigen::Index i = 0; i < n; ++i) {
    data.y[i] += normal_quantile(stream.next_uniform());
  }
  data.beta_hat = (data.design.transpose() * data.design)
                      .ldlt()
                      .solve(data.design.transpose() * data.y);
  return data;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ArgumentError("loglog_slope: need at least two matched points");
  }
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchReport run_benchmark(const BenchOptions& options) {
  if (options.n_grid.empty()) throw ArgumentError("run_benchmark: empty n grid");
  if (!std::is_sorted(options.n_grid.begin(), options.n_grid.end())) {
    throw ArgumentError("run_benchmark: n grid must be ascending");
  }
  if (options.sweeps < 1 || options.onestep_reps < 1 || options.repetitions < 1) {
    throw ArgumentError("run_benchmark: counts must be positive");
  }
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(5, 0.2);
  BenchReport report;
  std::vector<double> ns, mcmc_times, onestep_times;
  for (std::size_t cell = 0; cell < options.n_grid.size(); ++cell) {
    const std::int64_t n = options.n_grid[cell];
    SeedStream data_stream = derive_stream(options.seed, {7, cell, 0});
    const RegressionData data = simulate_regression(n, beta, data_stream);

    McmcState state(data.y, data.design, data.beta_hat,
                    1.0 / static_cast<double>(n));
    SeedStream chain = derive_stream(options.seed, {7, cell, 1});
    const double mcmc_round = time_per_unit(options.sweeps, options.repetitions,
                                            [&](int sweeps) {
      for (int s = 0; s < sweeps; ++s) {
        mcmc_sweep(state, options.step_sd, options.mode, chain);
      }
    });

    const RegressionModel model(data.design);
    const SeedStream base = derive_stream(options.seed, {7, cell, 2});
    std::uint64_t counter = 0;
    double sink = 0.0;
    const double onestep = time_per_unit(options.onestep_reps, options.repetitions,
                                         [&](int reps) {
      for (int r = 0; r < reps; ++r) {
        SeedStream s = base.child(counter++);
        sink += one_step(model, data.beta_hat, n, s).theta_hat_y[0];
      }
    });
    if (!std::isfinite(sink)) throw ArgumentError("run_benchmark: non-finite output");

    BenchRow row;
    row.n = n;
    row.seconds_per_mcmc_round = mcmc_round;
    row.seconds_per_onestep = onestep;
    row.acceptance_rate = state.acceptance_rate();
    report.rows.push_back(row);
    ns.push_back(static_cast<double>(n));
    mcmc_times.push_back(mcmc_round);
    onestep_times.push_back(onestep);
  }
  if (ns.size() >= 2) {
    report.mcmc_slope = loglog_slope(ns, mcmc_times);
    report.onestep_slope = loglog_slope(ns, onestep_times);
  }
  return report;
}

}  // namespace onestep
