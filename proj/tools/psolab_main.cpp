//
// Copyright 2026 The psolab Authors
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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "psolab/adversaries.hpp"
#include "psolab/baseline.hpp"
#include "psolab/errors.hpp"
#include "psolab/harness.hpp"
#include "psolab/mechanisms.hpp"
#include "psolab/rational.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw psolab::ConfigError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw psolab::ConfigError("malformed config '" + path + "': " + e.what());
  }
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw psolab::ConfigError("--values is empty");
  return out;
}

unsigned workers_for(std::optional<unsigned> flag, const psolab::ExperimentConfig& cfg) {
  return psolab::resolve_workers(flag ? flag : std::optional<unsigned>(cfg.workers));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predicate singling-out experiments"};
  app.require_subcommand(1);

  auto* baseline = app.add_subcommand("baseline", "Evaluate B(n, w) = n w (1-w)^(n-1)");
  std::uint64_t base_n = 0;
  std::string base_w;
  baseline->add_option("--n", base_n, "Dataset size")->required();
  baseline->add_option("--w", base_w, "Weight: decimal, a/b or 2^-k")->required();

  auto* run = app.add_subcommand("run", "Run one experiment");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::uint64_t> run_trials;
  std::string run_out = "csv";
  std::optional<unsigned> run_workers;
  bool run_verbose = false;
  run->add_option("--config", run_config, "Experiment config (JSON)")->required();
  run->add_option("--seed", run_seed, "Override the master seed");
  run->add_option("--trials", run_trials, "Override the trial count");
  run->add_option("--out", run_out, "Report format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--workers", run_workers, "Worker threads");
  run->add_flag("--verbose", run_verbose, "Include per-trial summaries (json)");

  auto* sweep = app.add_subcommand("sweep", "Run one experiment per axis value");
  std::string sweep_config;
  std::string sweep_axis;
  std::string sweep_values;
  std::optional<unsigned> sweep_workers;
  sweep->add_option("--config", sweep_config, "Base config (JSON)")->required();
  sweep->add_option("--axis", sweep_axis, "epsilon, m, k, n, r, w_low or seed")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
  sweep->add_option("--workers", sweep_workers, "Worker threads");

  auto* list = app.add_subcommand("list", "List mechanism and adversary registries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*baseline) {
      const psolab::Rational w = psolab::parse_rational(base_w);
      if (w < 0 || w > 1) throw psolab::ConfigError("--w must lie in [0, 1]");
      if (base_n == 0) throw psolab::ConfigError("--n must be >= 1");
      std::printf("%.15Lg\n", psolab::b_formula(base_n, psolab::to_long_double(w)));
    } else if (*run) {
      nlohmann::json j = read_json(run_config);
      if (run_seed) j["seed"] = *run_seed;
      if (run_trials) j["trials"] = *run_trials;
      const psolab::ExperimentConfig cfg = psolab::parse_config(j);
      const psolab::Experiment experiment(cfg);
      const auto report = experiment.run(workers_for(run_workers, cfg), run_verbose);
      if (run_out == "json") {
        std::cout << psolab::to_json(report).dump(2) << '\n';
      } else {
        std::cout << psolab::csv_header() << '\n' << psolab::csv_row(report) << '\n';
      }
      if (report.lambda_warning) {
        std::cerr << "warning: min-entropy " << report.lambda << " < 5m = " << 5 * report.m
                  << "; hash-based weights may be off target\n";
      }
    } else if (*sweep) {
      const nlohmann::json j = read_json(sweep_config);
      const psolab::ExperimentConfig cfg = psolab::parse_config(j);
      const auto values = split_values(sweep_values);
      const auto rows =
          psolab::sweep(j, sweep_axis, values, workers_for(sweep_workers, cfg));
      std::cout << psolab::sweep_csv(rows);
    } else if (*list) {
      std::cout << "mechanisms:\n";
      for (const auto& name : psolab::mechanism_names()) std::cout << "  " << name << '\n';
      std::cout << "adversaries:\n";
      for (const auto& name : psolab::adversary_names()) std::cout << "  " << name << '\n';
    }
  } catch (const psolab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
