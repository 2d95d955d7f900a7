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

#ifndef ONESTEP_EXPERIMENT_H_
#define ONESTEP_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "onestep/randcore.h"

namespace onestep {

enum class ExperimentKind {
  kBurrKs,        // K-S power of X, Z, Y against the true Burr law
  kLogLinear,     // MSE of fitted cell probabilities on the seatbelt model
  kBetaDp,        // MSE of MLE, DP, Z and Y estimates of a Beta law
  kDp2PropNull,   // null p-value distributions of the private two-sample test
  kDp2PropPower,  // power curves of the same test
  kBenchMcmc,     // MCMC vs one-step runtimes
  kSynth,         // synthetic data for a user-supplied sample
};

std::string_view experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_name(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kBurrKs;
  std::vector<std::int64_t> n_grid;
  std::int64_t reps = 2000;  // replicates per cell; inner reps for dp2prop
  std::int64_t outer_reps = 2000;  // dp2prop only
  double alpha = 0.05;
  double epsilon = 1.0;
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::string out_path;
  // Study-specific settings, e.g. "c", "k" for the Burr study, "alpha" and
  // "beta" for the Beta study, "n", "m", "theta_x", "theta_y" (comma list)
  // for dp2prop, "sweeps", "step" for the benchmark.
  std::map<std::string, std::string> model_params;
  int threads = 1;  // never changes the output
  bool full = false;
};

// Desk-scale defaults per experiment; `full` selects the larger settings.
ExperimentConfig default_config(ExperimentKind kind, bool full = false);

// Throws ArgumentError unless reps >= 1, 0 < alpha < 1, epsilon > 0 and the
// n grid is nonempty, positive and strictly ascending.
void validate_config(const ExperimentConfig& config);

using Cell = std::variant<double, std::int64_t, std::string>;

struct ResultTable {
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
  // Written as "# key: value" lines ahead of the header row.
  std::vector<std::pair<std::string, std::string>> metadata;
  // Derived quantities (slopes, sup-distances); also written as comments.
  std::vector<std::pair<std::string, std::string>> summary;

  // Throws ArgumentError if the row width differs from the header.
  void add_row(std::vector<Cell> row);
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view column_name) const;
  // Index of the first row whose cells equal `values` at the named columns.
  std::size_t find_row(
      const std::vector<std::pair<std::string, Cell>>& values) const;
  std::optional<std::string> summary_value(std::string_view key) const;

  // Deterministic CSV: doubles as %.10g, comments first.
  std::string to_csv() const;
  // Throws std::runtime_error if the path cannot be written.
  void write_csv(const std::string& path) const;
};

std::string format_cell(const Cell& cell);
std::string format_double(double x);

// "0.1.0+<commit>".
std::string version_stamp();

// Runs a study and returns its table. Synth is not a study; use
// synth_command. Replicates are spread over config.threads workers with
// streams derived from (seed, study, n index, replicate), so the table does
// not depend on the worker count. Timing columns of the benchmark are the
// only nondeterministic output.
ResultTable run_experiment(const ExperimentConfig& config);

// Null-study p-values of both tests, one per outer replicate.
struct NullPvalues {
  std::vector<double> onestep;
  std::vector<double> bootstrap;
};
NullPvalues dp2prop_null_pvalues(std::int64_t n, std::int64_t m, double theta,
                                 double epsilon, std::int64_t inner_reps,
                                 std::int64_t outer_reps, std::uint64_t seed,
                                 int threads);

// sup_u |F_N(u) - u| for the empirical cdf of p-values.
double uniform_sup_distance(const std::vector<double>& p_values);

struct SynthRequest {
  std::string input_path;
  std::string model;  // "normal", "burr", "beta", "bernoulli-uniform"
  std::optional<double> epsilon;
  std::uint64_t seed = kDefaultMasterSeed;
  std::string out_path;
};

struct SynthOutput {
  std::vector<double> input;
  std::vector<double> synthetic;
  std::vector<double> released_theta;  // the theta the output conditions on
  std::string audit;
  ResultTable table;  // one "value" column with metadata and audit comments
};

// Reads one numeric column (optional header line, '#' comments skipped) and
// returns one-step synthetic data. Without epsilon the output is partially
// synthetic and preserves the non-private estimate; with epsilon (Beta only)
// the release conditions on the DP estimate and is epsilon-DP. Throws
// ArgumentError naming the row on a parse or support error.
SynthOutput synth_command(const SynthRequest& request);

// Parses "64,128,256" into an ascending grid.
std::vector<std::int64_t> parse_int_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

}  // namespace onestep

#endif  // ONESTEP_EXPERIMENT_H_
