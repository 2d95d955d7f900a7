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

// Command-line front end for the simulation studies and the synth command.
//
//   onestep burr-ks --n-grid 100,1000 --reps 2000 --out burr.csv
//   onestep dp2prop-power --n 200 --m 200 --theta-x 0.3 --theta-y 0.4,0.45
//   onestep synth --input data.csv --model beta --epsilon 1 --out synth.csv
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "onestep/errors.h"
#include "onestep/experiment.h"

namespace {

constexpr int kUsageError = 2;
constexpr int kNumericalError = 3;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> reps;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<std::string> n_grid;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> config;
  bool full = false;
  // Study-specific flags, stored as model parameters.
  std::map<std::string, std::string> params;
  std::optional<std::int64_t> outer;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--seed", f.seed, "master seed (default 20240)");
  app->add_option("--reps", f.reps, "replicates per cell (inner replicates for dp2prop)");
  app->add_option("--alpha", f.alpha, "test level");
  app->add_option("--epsilon", f.epsilon, "privacy budget (default 1.0)");
  app->add_option("--n-grid", f.n_grid, "comma-separated ascending sample sizes");
  app->add_option("--out", f.out, "output CSV path");
  app->add_option("--threads", f.threads, "worker threads; 0 uses all cores");
  app->add_option("--config", f.config, "JSON config file; flags override it");
  app->add_flag("--full", f.full, "larger, slower settings");
}

void add_param(CLI::App* app, CommonFlags& f, const std::string& flag,
               const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&f, key](const std::string& v) { f.params[key] = v; }, help);
}

// Reads a JSON object whose keys mirror the long flags, e.g.
// {"seed": 7, "reps": 500, "n_grid": [100, 1000], "params": {"c": 2}}.
void apply_json(const std::string& path, onestep::ExperimentConfig& c) {
  std::ifstream in(path);
  if (!in) throw onestep::ArgumentError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw onestep::ArgumentError("config " + path + ": " + e.what());
  }
  try {
    if (j.contains("seed")) c.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("reps")) c.reps = j["reps"].get<std::int64_t>();
    if (j.contains("outer")) c.outer_reps = j["outer"].get<std::int64_t>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("out")) c.out_path = j["out"].get<std::string>();
    if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<std::vector<std::int64_t>>();
    if (j.contains("params")) {
      for (const auto& [k, v] : j["params"].items()) {
        c.model_params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw onestep::ArgumentError("config " + path + ": " + e.what());
  }
}

onestep::ExperimentConfig build_config(onestep::ExperimentKind kind,
                                       const CommonFlags& f) {
  onestep::ExperimentConfig c = onestep::default_config(kind, f.full);
  if (f.config) apply_json(*f.config, c);
  if (f.seed) c.master_seed = *f.seed;
  if (f.reps) c.reps = *f.reps;
  if (f.outer) c.outer_reps = *f.outer;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.epsilon) c.epsilon = *f.epsilon;
  if (f.n_grid) c.n_grid = onestep::parse_int_list(*f.n_grid);
  if (f.out) c.out_path = *f.out;
  if (f.threads) c.threads = *f.threads;
  for (const auto& [k, v] : f.params) c.model_params[k] = v;
  return c;
}

void print_summary(const onestep::ResultTable& t, bool with_rows) {
  if (with_rows) {
    for (std::size_t j = 0; j < t.headers.size(); ++j) {
      std::cout << (j ? "\t" : "") << t.headers[j];
    }
    std::cout << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        std::cout << (j ? "\t" : "") << onestep::format_cell(row[j]);
      }
      std::cout << '\n';
    }
  }
  for (const auto& [k, v] : t.summary) std::cout << k << ": " << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-step synthetic data: simulation studies and synthesis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", onestep::version_stamp());

  struct Study {
    const char* name;
    onestep::ExperimentKind kind;
    const char* help;
  };
  const Study studies[] = {
      {"burr-ks", onestep::ExperimentKind::kBurrKs, "K-S power of X, Z, Y for a Burr law"},
      {"loglinear", onestep::ExperimentKind::kLogLinear, "seatbelt log-linear MSE curves"},
      {"beta-dp", onestep::ExperimentKind::kBetaDp, "DP Beta synthetic data MSE curves"},
      {"dp2prop-null", onestep::ExperimentKind::kDp2PropNull, "null p-value calibration"},
      {"dp2prop-power", onestep::ExperimentKind::kDp2PropPower, "power curves"},
      {"bench-mcmc", onestep::ExperimentKind::kBenchMcmc, "MCMC vs one-step runtime"},
  };
  CommonFlags flags;
  std::optional<onestep::ExperimentKind> chosen;
  for (const Study& s : studies) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, flags);
    sub->callback([&chosen, kind = s.kind] { chosen = kind; });
    switch (s.kind) {
      case onestep::ExperimentKind::kBurrKs:
        add_param(sub, flags, "--c", "c", "Burr shape c (default 2)");
        add_param(sub, flags, "--k", "k", "Burr shape k (default 4)");
        break;
      case onestep::ExperimentKind::kBetaDp:
        add_param(sub, flags, "--shape-alpha", "alpha", "true alpha (default 5)");
        add_param(sub, flags, "--shape-beta", "beta", "true beta (default 3)");
        break;
      case onestep::ExperimentKind::kDp2PropNull:
      case onestep::ExperimentKind::kDp2PropPower:
        add_param(sub, flags, "--n", "n", "control sample size (default 200)");
        add_param(sub, flags, "--m", "m", "treatment sample size (default 200)");
        add_param(sub, flags, "--theta-x", "theta_x", "control proportion (default 0.3)");
        if (s.kind == onestep::ExperimentKind::kDp2PropPower) {
          add_param(sub, flags, "--theta-y", "theta_y", "comma-separated treatment proportions");
        }
        sub->add_option("--outer", flags.outer, "outer replicates (default 2000)");
        break;
      case onestep::ExperimentKind::kBenchMcmc:
        add_param(sub, flags, "--sweeps", "sweeps", "sweeps per timed repetition (default 100)");
        add_param(sub, flags, "--step", "step", "proposal sd (default 0.1)");
        add_param(sub, flags, "--onestep-reps", "onestep_reps", "one-step runs per timed repetition");
        add_param(sub, flags, "--mode", "mode", "naive or incremental");
        break;
      default:
        break;
    }
  }

  onestep::SynthRequest synth;
  std::optional<double> synth_epsilon;
  CLI::App* synth_cmd = app.add_subcommand("synth", "one-step synthetic data for a CSV column");
  synth_cmd->add_option("--input", synth.input_path, "input CSV, one numeric column")->required();
  synth_cmd->add_option("--model", synth.model, "normal, burr, beta or bernoulli-uniform")->required();
  synth_cmd->add_option("--epsilon", synth_epsilon, "privacy budget; beta only");
  synth_cmd->add_option("--seed", synth.seed, "master seed (default 20240)");
  synth_cmd->add_option("--out", synth.out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  } catch (const onestep::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (synth_cmd->parsed()) {
      synth.epsilon = synth_epsilon;
      const onestep::SynthOutput out = onestep::synth_command(synth);
      std::cout << "audit: " << out.audit << '\n'
                << "rows: " << out.synthetic.size() << '\n'
                << "wrote " << synth.out_path << '\n';
      return 0;
    }
    const onestep::ExperimentConfig config = build_config(*chosen, flags);
    const onestep::ResultTable table = onestep::run_experiment(config);
    print_summary(table, table.rows.size() <= 40);
    if (!config.out_path.empty()) std::cout << "wrote " << config.out_path << '\n';
    return 0;
  } catch (const onestep::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const onestep::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const onestep::EstimationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const onestep::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
