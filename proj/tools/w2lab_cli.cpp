// Copyright 2026 The w2lab Authors
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

// w2lab <experiment> [options]
//
// Precedence: command-line flags override the --config file, which
// overrides built-in defaults. Errors print one line starting "error:" with
// a JSON payload and exit with status 2.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "w2lab/experiment.hpp"

namespace {

struct Flags {
  std::vector<double> n;
  std::optional<std::size_t> reps;
  std::optional<double> rho;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> grid_m;
  std::optional<double> grid_delta;
  std::optional<std::size_t> m_sample;
  std::vector<std::size_t> k;
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.n, "sample size(s); repeatable")->delimiter(',');
  cmd->add_option("--reps", f.reps, "replications");
  cmd->add_option("--rho", f.rho, "correlation");
  cmd->add_option("--seed", f.seed, "master seed (required)");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--grid-m", f.grid_m, "limit grid size");
  cmd->add_option("--grid-delta", f.grid_delta, "limit grid truncation");
  cmd->add_option("--m-sample", f.m_sample, "coupling sample size");
  cmd->add_option("--k", f.k, "order statistic offsets")->delimiter(',');
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--out", f.out, "output directory (stdout when absent)");
}

w2lab::ExperimentConfig build_config(const std::string& name, const Flags& f) {
  w2lab::ExperimentConfig cfg;
  cfg.kind = w2lab::experiment_kind_from_string(name);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument("cannot open config file " + f.config);
    cfg.merge_json(nlohmann::json::parse(in));
    if (cfg.kind != w2lab::experiment_kind_from_string(name)) {
      throw std::invalid_argument("config experiment does not match subcommand " + name);
    }
  }
  if (!f.n.empty()) cfg.n = f.n;
  if (f.reps) cfg.reps = *f.reps;
  if (f.rho) cfg.rho = *f.rho;
  if (f.seed) cfg.seed = *f.seed;
  if (f.workers) cfg.workers = *f.workers;
  if (f.grid_m) cfg.grid_m = *f.grid_m;
  if (f.grid_delta) cfg.grid_delta = *f.grid_delta;
  if (f.m_sample) cfg.m_sample = *f.m_sample;
  if (!f.k.empty()) cfg.k = f.k;
  if (!f.out.empty()) cfg.output_path = f.out;
  return cfg;
}

void fail(const std::string& kind, const std::string& message) {
  nlohmann::json j = {{"status", "error"}, {"kind", kind}, {"message", message}};
  std::cout << "error: " << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein-2 laboratory for Gaussian samples"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::string> names = {"one-sample", "two-sample", "limit-compare",
                                          "expansions", "integrals",  "moments"};
  for (const auto& name : names) add_common(app.add_subcommand(name), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("usage", e.what());
    return 2;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const auto cfg = build_config(name, flags);
    const auto report = w2lab::run_experiment(cfg);
    if (cfg.output_path.empty()) {
      for (const auto& t : report.tables) std::cout << w2lab::to_csv(t);
    } else {
      w2lab::write_report(report, cfg.output_path);
    }
  } catch (const std::invalid_argument& e) {
    fail("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    fail("runtime", e.what());
    return 2;
  }
  return 0;
}
