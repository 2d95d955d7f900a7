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

#include "onestep/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "onestep/dptest.h"
#include "onestep/errors.h"
#include "onestep/goftest.h"
#include "onestep/mcmcbench.h"
#include "onestep/models.h"
#include "onestep/parallel.h"
#include "onestep/privacy.h"
#include "onestep/synth.h"

#ifndef ONESTEP_VERSION
#define ONESTEP_VERSION "0.0.0"
#endif
#ifndef ONESTEP_GIT_COMMIT
#define ONESTEP_GIT_COMMIT "unknown"
#endif

namespace onestep {
namespace {

constexpr std::pair<ExperimentKind, std::string_view> kNames[] = {
    {ExperimentKind::kBurrKs, "burr-ks"},
    {ExperimentKind::kLogLinear, "loglinear"},
    {ExperimentKind::kBetaDp, "beta-dp"},
    {ExperimentKind::kDp2PropNull, "dp2prop-null"},
    {ExperimentKind::kDp2PropPower, "dp2prop-power"},
    {ExperimentKind::kBenchMcmc, "bench-mcmc"},
    {ExperimentKind::kSynth, "synth"},
};

// Stream path roots, one per study.
constexpr std::uint64_t kBurrStudy = 1;
constexpr std::uint64_t kLogLinearStudy = 2;
constexpr std::uint64_t kBetaStudy = 3;
constexpr std::uint64_t kDp2PropStudy = 4;
constexpr std::uint64_t kSynthStudy = 6;

// Per-replicate children.
constexpr std::uint64_t kTruthPurpose = 0;
constexpr std::uint64_t kOneStepPurpose = 1;
constexpr std::uint64_t kBootstrapPurpose = 2;
constexpr std::uint64_t kNoisePurpose = 3;

double param(const ExperimentConfig& c, const std::string& key, double fallback) {
  const auto it = c.model_params.find(key);
  if (it == c.model_params.end()) return fallback;
  const auto values = parse_double_list(it->second);
  if (values.size() != 1) throw ArgumentError("parameter " + key + ": expected one number");
  return values[0];
}

std::int64_t int_param(const ExperimentConfig& c, const std::string& key,
                       std::int64_t fallback) {
  const double v = param(c, key, static_cast<double>(fallback));
  if (v != std::floor(v)) throw ArgumentError("parameter " + key + ": expected an integer");
  return static_cast<std::int64_t>(v);
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

void stamp(ResultTable& t, const ExperimentConfig& c) {
  t.metadata = {
      {"experiment", std::string(experiment_name(c.experiment))},
      {"version", version_stamp()},
      {"master_seed", std::to_string(c.master_seed)},
      {"n_grid", join(c.n_grid)},
      {"reps", std::to_string(c.reps)},
      {"alpha", format_double(c.alpha)},
      {"epsilon", format_double(c.epsilon)},
      {"full", c.full ? "true" : "false"},
  };
  if (c.experiment == ExperimentKind::kDp2PropNull ||
      c.experiment == ExperimentKind::kDp2PropPower) {
    t.metadata.emplace_back("outer_reps", std::to_string(c.outer_reps));
  }
  for (const auto& [k, v] : c.model_params) t.metadata.emplace_back("param." + k, v);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  if (v.empty()) return r;
  const double n = static_cast<double>(v.size());
  for (double x : v) r.mean += x;
  r.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

std::vector<double> column_values(const Dataset& d) {
  return {d.observations.data(), d.observations.data() + d.observations.size()};
}

// ---------------------------------------------------------------- Burr K-S

ResultTable burr_ks(const ExperimentConfig& c) {
  const BurrModel model;
  ParamVector truth(2);
  truth << param(c, "c", 2.0), param(c, "k", 4.0);
  const CdfFunction true_cdf = model.reference_cdf(truth);

  ResultTable t;
  t.headers = {"n", "sample", "power", "std_error", "reps", "failures"};
  for (std::size_t cell = 0; cell < c.n_grid.size(); ++cell) {
    const std::int64_t n = c.n_grid[cell];
    // -1 marks a replicate whose fit failed.
    std::vector<std::array<int, 3>> rejected(static_cast<std::size_t>(c.reps));
    parallel_for(c.reps, c.threads, [&](std::int64_t r) {
      const SeedStream base = derive_stream(c.master_seed, {kBurrStudy, cell, static_cast<std::uint64_t>(r)});
      SeedStream truth_stream = base.child(kTruthPurpose);
      SeedStream onestep_stream = base.child(kOneStepPurpose);
      auto& out = rejected[static_cast<std::size_t>(r)];
      try {
        const Dataset x = parametric_bootstrap(model, truth, n, truth_stream);
        const SyntheticResult s =
            one_step(model, model.estimate(x), n, onestep_stream);
        const Dataset* samples[3] = {&x, &s.intermediate, &s.data};
        for (int j = 0; j < 3; ++j) {
          out[j] = ks_test(column_values(*samples[j]), true_cdf, c.alpha).p_value <
                   c.alpha;
        }
      } catch (const EstimationError&) {
        out = {-1, -1, -1};
      }
    });
    std::int64_t failures = 0;
    std::array<std::int64_t, 3> counts{};
    for (const auto& r : rejected) {
      if (r[0] < 0) {
        ++failures;
        continue;
      }
      for (int j = 0; j < 3; ++j) counts[j] += r[j];
    }
    const std::int64_t used = c.reps - failures;
    const char* names[3] = {"X", "Z", "Y"};
    for (int j = 0; j < 3; ++j) {
      const double p = used > 0 ? static_cast<double>(counts[j]) / used : 0.0;
      t.add_row({n, std::string(names[j]), p, binomial_std_error(p, used), used,
                 failures});
    }
  }
  return t;
}

// ------------------------------------------------------- MSE studies shared

void mse_rows(ResultTable& t, std::int64_t n,
              const std::vector<std::string>& names,
              const std::vector<std::vector<double>>& errors,
              std::int64_t failures) {
  for (std::size_t j = 0; j < names.size(); ++j) {
    const MeanSe m = mean_se(errors[j]);
    t.add_row({n, names[j], m.mean, m.se,
               static_cast<std::int64_t>(errors[j].size()), failures});
  }
}

void mse_summary(ResultTable& t, const ExperimentConfig& c,
                 const std::vector<std::string>& names) {
  if (c.n_grid.size() < 2) return;
  std::vector<double> ns(c.n_grid.begin(), c.n_grid.end());
  for (const auto& name : names) {
    std::vector<double> mse;
    for (std::int64_t n : c.n_grid) {
      mse.push_back(t.number(t.find_row({{"n", n}, {"estimator", name}}), "mse"));
    }
    t.summary.emplace_back("slope." + name, format_double(loglog_slope(ns, mse)));
  }
  const std::int64_t last = c.n_grid.back();
  const double base =
      std::log(t.number(t.find_row({{"n", last}, {"estimator", names[0]}}), "mse"));
  for (std::size_t j = 1; j < names.size(); ++j) {
    const double v =
        std::log(t.number(t.find_row({{"n", last}, {"estimator", names[j]}}), "mse"));
    t.summary.emplace_back("log_gap." + names[j], format_double(std::abs(v - base)));
  }
}

// ------------------------------------------------------------- log-linear

ResultTable loglinear(const ExperimentConfig& c) {
  const LogLinearModel model;
  const auto& counts = seatbelt_counts();
  Dataset table;
  table.observations = Eigen::Map<const Eigen::RowVectorXd>(counts.data(),
                                                            LogLinearModel::kCells);
  const LogLinearModel::Fit truth_fit = model.fit(table);
  const ParamVector truth = truth_fit.coefficients;
  const Eigen::VectorXd truth_p = model.probabilities(truth);

  ResultTable t;
  t.headers = {"n", "estimator", "mse", "std_error", "reps", "failures"};
  const std::vector<std::string> names = {"X", "Z", "Y"};
  for (std::size_t cell = 0; cell < c.n_grid.size(); ++cell) {
    const std::int64_t n = c.n_grid[cell];
    std::vector<std::array<double, 3>> err(static_cast<std::size_t>(c.reps));
    parallel_for(c.reps, c.threads, [&](std::int64_t r) {
      const SeedStream base = derive_stream(c.master_seed, {kLogLinearStudy, cell, static_cast<std::uint64_t>(r)});
      SeedStream truth_stream = base.child(kTruthPurpose);
      SeedStream onestep_stream = base.child(kOneStepPurpose);
      auto& out = err[static_cast<std::size_t>(r)];
      try {
        const Dataset x = parametric_bootstrap(model, truth, n, truth_stream);
        const SyntheticResult s = one_step(model, model.estimate(x), n, onestep_stream);
        const Dataset* samples[3] = {&x, &s.intermediate, &s.data};
        for (int j = 0; j < 3; ++j) {
          out[j] = (model.fit(*samples[j]).probabilities - truth_p).squaredNorm();
        }
      } catch (const EstimationError&) {
        out = {-1.0, -1.0, -1.0};
      }
    });
    std::vector<std::vector<double>> errors(3);
    std::int64_t failures = 0;
    for (const auto& e : err) {
      if (e[0] < 0) {
        ++failures;
        continue;
      }
      for (int j = 0; j < 3; ++j) errors[j].push_back(e[j]);
    }
    mse_rows(t, n, names, errors, failures);
  }
  mse_summary(t, c, names);
  return t;
}

// ---------------------------------------------------------------- Beta DP

ResultTable beta_dp(const ExperimentConfig& c) {
  const BetaModel model;
  ParamVector truth(2);
  truth << param(c, "alpha", 5.0), param(c, "beta", 3.0);

  ResultTable t;
  t.headers = {"n", "estimator", "mse", "std_error", "reps", "failures"};
  const std::vector<std::string> names = {"MLE", "DP", "Z", "Y"};
  for (std::size_t cell = 0; cell < c.n_grid.size(); ++cell) {
    const std::int64_t n = c.n_grid[cell];
    std::vector<std::array<double, 4>> err(static_cast<std::size_t>(c.reps));
    parallel_for(c.reps, c.threads, [&](std::int64_t r) {
      const SeedStream base = derive_stream(c.master_seed, {kBetaStudy, cell, static_cast<std::uint64_t>(r)});
      SeedStream truth_stream = base.child(kTruthPurpose);
      SeedStream onestep_stream = base.child(kOneStepPurpose);
      SeedStream noise_stream = base.child(kNoisePurpose);
      auto& out = err[static_cast<std::size_t>(r)];
      try {
        const Dataset x = parametric_bootstrap(model, truth, n, truth_stream);
        const ParamVector mle = model.estimate(x);
        const ParamVector dp = dp_beta_estimate(x, c.epsilon, noise_stream);
        const SyntheticResult s = one_step(model, dp, n, onestep_stream);
        const ParamVector* est[4] = {&mle, &dp, &s.theta_hat_z, &s.theta_hat_y};
        for (int j = 0; j < 4; ++j) out[j] = (*est[j] - truth).squaredNorm();
      } catch (const EstimationError&) {
        out = {-1.0, -1.0, -1.0, -1.0};
      }
    });
    std::vector<std::vector<double>> errors(4);
    std::int64_t failures = 0;
    for (const auto& e : err) {
      if (e[0] < 0) {
        ++failures;
        continue;
      }
      for (int j = 0; j < 4; ++j) errors[j].push_back(e[j]);
    }
    mse_rows(t, n, names, errors, failures);
  }
  mse_summary(t, c, names);
  return t;
}

// ---------------------------------------------------------------- dp2prop

struct Dp2PropSetup {
  std::int64_t n;
  std::int64_t m;
  double theta_x;
};

Dp2PropSetup dp2prop_setup(const ExperimentConfig& c) {
  return {int_param(c, "n", 200), int_param(c, "m", 200), param(c, "theta_x", 0.3)};
}

struct PairedPvalues {
  std::vector<double> onestep;
  std::vector<double> bootstrap;
};

PairedPvalues paired_pvalues(std::int64_t n, std::int64_t m, double theta_x,
                             double theta_y, double epsilon,
                             std::int64_t inner, std::int64_t outer,
                             std::uint64_t seed, std::uint64_t cell,
                             int threads) {
  PairedPvalues p;
  p.onestep.resize(static_cast<std::size_t>(outer));
  p.bootstrap.resize(static_cast<std::size_t>(outer));
  parallel_for(outer, threads, [&](std::int64_t r) {
    const SeedStream base = derive_stream(seed, {kDp2PropStudy, cell, static_cast<std::uint64_t>(r)});
    SeedStream truth_stream = base.child(kTruthPurpose);
    const DpTwoPropProblem prob =
        simulate_dp2prop(n, m, theta_x, theta_y, epsilon, truth_stream);
    const auto i = static_cast<std::size_t>(r);
    p.onestep[i] =
        dp2prop_onestep_pvalue(prob, inner, base.child(kOneStepPurpose)).p_value;
    p.bootstrap[i] =
        dp2prop_bootstrap_pvalue(prob, inner, base.child(kBootstrapPurpose)).p_value;
  });
  return p;
}

double reject_fraction(const std::vector<double>& p, double alpha) {
  const auto k = std::count_if(p.begin(), p.end(), [alpha](double v) { return v <= alpha; });
  return static_cast<double>(k) / static_cast<double>(p.size());
}

ResultTable dp2prop_null(const ExperimentConfig& c) {
  const Dp2PropSetup s = dp2prop_setup(c);
  const NullPvalues p = dp2prop_null_pvalues(s.n, s.m, s.theta_x, c.epsilon, c.reps,
                                             c.outer_reps, c.master_seed, c.threads);
  ResultTable t;
  t.headers = {"u", "onestep_ecdf", "bootstrap_ecdf"};
  auto ecdf = [](const std::vector<double>& v, double u) {
    return static_cast<double>(std::count_if(v.begin(), v.end(),
                                             [u](double x) { return x <= u; })) /
           static_cast<double>(v.size());
  };
  for (int i = 1; i <= 100; ++i) {
    const double u = i / 100.0;
    t.add_row({u, ecdf(p.onestep, u), ecdf(p.bootstrap, u)});
  }
  const auto outer = static_cast<std::int64_t>(p.onestep.size());
  for (const auto& [name, v] : {std::pair{"onestep", &p.onestep},
                                std::pair{"bootstrap", &p.bootstrap}}) {
    const double frac = reject_fraction(*v, c.alpha);
    t.summary.emplace_back(std::string("sup_distance.") + name,
                           format_double(uniform_sup_distance(*v)));
    t.summary.emplace_back(std::string("reject_fraction.") + name, format_double(frac));
    t.summary.emplace_back(std::string("reject_std_error.") + name,
                           format_double(binomial_std_error(frac, outer)));
  }
  return t;
}

ResultTable dp2prop_power(const ExperimentConfig& c) {
  const Dp2PropSetup s = dp2prop_setup(c);
  std::vector<double> grid = {0.30, 0.35, 0.40, 0.45, 0.50};
  if (c.full) {
    grid.clear();
    for (int i = 0; i <= 20; ++i) grid.push_back(0.30 + 0.01 * i);
  }
  if (const auto it = c.model_params.find("theta_y"); it != c.model_params.end()) {
    grid = parse_double_list(it->second);
  }
  ResultTable t;
  t.headers = {"theta_y", "onestep_power", "onestep_se", "bootstrap_power",
               "bootstrap_se"};
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    const PairedPvalues p =
        paired_pvalues(s.n, s.m, s.theta_x, grid[cell], c.epsilon, c.reps,
                       c.outer_reps, c.master_seed, 100 + cell, c.threads);
    const double a = reject_fraction(p.onestep, c.alpha);
    const double b = reject_fraction(p.bootstrap, c.alpha);
    t.add_row({grid[cell], a, binomial_std_error(a, c.outer_reps), b,
               binomial_std_error(b, c.outer_reps)});
  }
  return t;
}

// -------------------------------------------------------------- benchmark

ResultTable bench(const ExperimentConfig& c) {
  BenchOptions o;
  o.n_grid = c.n_grid;
  o.sweeps = static_cast<int>(int_param(c, "sweeps", 100));
  o.onestep_reps = static_cast<int>(int_param(c, "onestep_reps", 1000));
  o.step_sd = param(c, "step", 0.1);
  o.repetitions = static_cast<int>(int_param(c, "repetitions", 5));
  const auto it = c.model_params.find("mode");
  if (it != c.model_params.end()) {
    if (it->second == "incremental") {
      o.mode = SweepMode::kIncremental;
    } else if (it->second != "naive") {
      throw ArgumentError("mode must be naive or incremental");
    }
  }
  o.seed = c.master_seed;
  const BenchReport report = run_benchmark(o);
  ResultTable t;
  t.headers = {"n", "mcmc_round_seconds", "onestep_seconds", "acceptance_rate"};
  for (const BenchRow& r : report.rows) {
    t.add_row({r.n, r.seconds_per_mcmc_round, r.seconds_per_onestep,
               r.acceptance_rate});
  }
  t.summary.emplace_back("slope.mcmc", format_double(report.mcmc_slope));
  t.summary.emplace_back("slope.onestep", format_double(report.onestep_slope));
  const BenchRow& last = report.rows.back();
  t.summary.emplace_back("speedup_at_max_n",
                         format_double(last.seconds_per_mcmc_round /
                                       last.seconds_per_onestep));
  return t;
}

// ------------------------------------------------------------------ synth

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

// Support check per model, by name.
bool in_support(std::string_view model, double x) {
  if (!std::isfinite(x)) return false;
  if (model == "beta") return x > 0.0 && x < 1.0;
  if (model == "burr") return x > 0.0;
  if (model == "bernoulli-uniform") return x >= 0.0 && x < 2.0;
  return true;
}

std::vector<double> read_column(const std::string& path, std::string_view model) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open input " + path);
  std::vector<double> values;
  std::string line;
  std::int64_t row = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    double x = 0.0;
    if (!parse_number(s, x)) {
      if (!seen_content) {  // header line
        seen_content = true;
        continue;
      }
      throw ArgumentError("row " + std::to_string(row) + ": not a number: '" + s + "'");
    }
    seen_content = true;
    if (!in_support(model, x)) {
      throw ArgumentError("row " + std::to_string(row) + ": value " + s +
                          " outside the support of model " + std::string(model));
    }
    values.push_back(x);
  }
  if (values.empty()) throw ArgumentError("input " + path + " has no data rows");
  return values;
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_name(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

ExperimentConfig default_config(ExperimentKind kind, bool full) {
  ExperimentConfig c;
  c.experiment = kind;
  c.full = full;
  switch (kind) {
    case ExperimentKind::kBurrKs:
      c.n_grid = full ? std::vector<std::int64_t>{100, 1000, 10000}
                      : std::vector<std::int64_t>{100, 1000};
      c.reps = full ? 10000 : 2000;
      break;
    case ExperimentKind::kLogLinear:
      c.n_grid = full ? std::vector<std::int64_t>{100, 1000, 10000, 100000}
                      : std::vector<std::int64_t>{100, 1000, 10000};
      c.reps = 200;
      break;
    case ExperimentKind::kBetaDp:
      c.n_grid = full ? std::vector<std::int64_t>{1000, 10000, 100000, 1000000}
                      : std::vector<std::int64_t>{1000, 10000, 100000};
      c.reps = full ? 200 : 100;
      break;
    case ExperimentKind::kDp2PropNull:
    case ExperimentKind::kDp2PropPower:
      c.n_grid = {200};
      c.reps = kDefaultInnerReps;
      c.outer_reps = full ? 10000 : kDefaultOuterReps;
      break;
    case ExperimentKind::kBenchMcmc:
      for (std::int64_t n = 64; n <= (full ? 16384 : 4096); n *= 2) c.n_grid.push_back(n);
      c.reps = 1;
      break;
    case ExperimentKind::kSynth:
      c.n_grid = {1};
      c.reps = 1;
      break;
  }
  return c;
}

void validate_config(const ExperimentConfig& c) {
  if (c.reps < 1) throw ArgumentError("reps must be at least 1");
  if (c.outer_reps < 1) throw ArgumentError("outer reps must be at least 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
  if (!(c.epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  if (c.n_grid.empty()) throw ArgumentError("n grid is empty");
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (c.n_grid[i] < 1) throw ArgumentError("n grid entries must be positive");
    if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1]) {
      throw ArgumentError("n grid must be strictly ascending");
    }
  }
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != headers.size()) {
    throw ArgumentError("ResultTable: row width does not match the header");
  }
  rows.push_back(std::move(row));
}

std::size_t ResultTable::column(std::string_view name) const {
  const auto it = std::find(headers.begin(), headers.end(), name);
  if (it == headers.end()) throw ArgumentError("no column " + std::string(name));
  return static_cast<std::size_t>(it - headers.begin());
}

double ResultTable::number(std::size_t row, std::string_view column_name) const {
  const Cell& cell = rows.at(row).at(column(column_name));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw ArgumentError("column " + std::string(column_name) + " is not numeric");
}

std::size_t ResultTable::find_row(
    const std::vector<std::pair<std::string, Cell>>& values) const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    bool match = true;
    for (const auto& [name, v] : values) {
      if (rows[r][column(name)] != v) {
        match = false;
        break;
      }
    }
    if (match) return r;
  }
  throw ArgumentError("ResultTable: no matching row");
}

std::optional<std::string> ResultTable::summary_value(std::string_view key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
  for (const auto& [k, v] : summary) out << "# summary." << k << ": " << v << '\n';
  for (std::size_t j = 0; j < headers.size(); ++j) {
    out << (j ? "," : "") << headers[j];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j ? "," : "") << format_cell(row[j]);
    }
    out << '\n';
  }
  return out.str();
}

void ResultTable::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_csv();
  if (!out) throw std::runtime_error("error writing " + path);
}

std::string version_stamp() {
  return std::string(ONESTEP_VERSION) + "+" + ONESTEP_GIT_COMMIT;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ResultTable t;
  switch (config.experiment) {
    case ExperimentKind::kBurrKs:
      t = burr_ks(config);
      break;
    case ExperimentKind::kLogLinear:
      t = loglinear(config);
      break;
    case ExperimentKind::kBetaDp:
      t = beta_dp(config);
      break;
    case ExperimentKind::kDp2PropNull:
      t = dp2prop_null(config);
      break;
    case ExperimentKind::kDp2PropPower:
      t = dp2prop_power(config);
      break;
    case ExperimentKind::kBenchMcmc:
      t = bench(config);
      break;
    case ExperimentKind::kSynth:
      throw ArgumentError("synth is not a study; use synth_command");
  }
  stamp(t, config);
  if (!config.out_path.empty()) t.write_csv(config.out_path);
  return t;
}

NullPvalues dp2prop_null_pvalues(std::int64_t n, std::int64_t m, double theta,
                                 double epsilon, std::int64_t inner_reps,
                                 std::int64_t outer_reps, std::uint64_t seed,
                                 int threads) {
  PairedPvalues p = paired_pvalues(n, m, theta, theta, epsilon, inner_reps,
                                   outer_reps, seed, 0, threads);
  return {std::move(p.onestep), std::move(p.bootstrap)};
}

double uniform_sup_distance(const std::vector<double>& p_values) {
  return ks_statistic(p_values, [](double u) { return std::clamp(u, 0.0, 1.0); });
}

SynthOutput synth_command(const SynthRequest& req) {
  const std::unique_ptr<Model> model = make_scalar_model(req.model);
  SynthOutput out;
  out.input = read_column(req.input_path, req.model);
  const auto n = static_cast<std::int64_t>(out.input.size());
  const Dataset x = column_dataset(out.input);

  const SeedStream base = derive_stream(req.seed, {kSynthStudy});
  ParamVector theta;
  if (req.epsilon) {
    if (req.model != "beta") {
      throw ArgumentError("--epsilon is only supported for the beta model");
    }
    SeedStream noise = base.child(kNoisePurpose);
    theta = dp_beta_estimate(x, *req.epsilon, noise);
    out.audit = "fully synthetic; epsilon-DP with epsilon=" +
                format_double(*req.epsilon) +
                "; released theta is the DP estimate";
  } else {
    theta = model->estimate(x);
    out.audit = "partially synthetic; θ̂_X released exactly";
  }
  SeedStream onestep_stream = base.child(kOneStepPurpose);
  const SyntheticResult s = one_step(*model, theta, n, onestep_stream);
  out.synthetic = column_values(s.data);
  out.released_theta.assign(theta.data(), theta.data() + theta.size());

  ResultTable& t = out.table;
  t.headers = {"value"};
  for (double v : out.synthetic) t.add_row({v});
  t.metadata = {
      {"experiment", "synth"},
      {"version", version_stamp()},
      {"master_seed", std::to_string(req.seed)},
      {"model", req.model},
      {"epsilon", req.epsilon ? format_double(*req.epsilon) : "none"},
      {"n", std::to_string(n)},
      {"audit", out.audit},
      {"theta", join(out.released_theta)},
      {"retries", std::to_string(s.retries)},
  };
  if (!req.out_path.empty()) t.write_csv(req.out_path);
  return out;
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  for (double v : parse_double_list(text)) {
    if (v != std::floor(v) || std::abs(v) > 9e15) {
      throw ArgumentError("expected integers in '" + std::string(text) + "'");
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const std::string s = trim(item);
    double v = 0.0;
    if (!parse_number(s, v)) {
      throw ArgumentError("cannot parse number '" + s + "' in '" + std::string(text) + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ArgumentError("empty list");
  return out;
}

}  // namespace onestep
