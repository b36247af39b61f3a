// Copyright 2026 The degas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "degas/delay.hpp"
#include "degas/errors.hpp"
#include "degas/theory.hpp"
#include "degas_tools/config.hpp"
#include "degas_tools/experiments.hpp"

namespace {

namespace fs = std::filesystem;
using degas::tools::ExperimentConfig;

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kConfigError = 2;

// Loads and validates; prints diagnostics. Returns nullopt on any config problem.
std::optional<ExperimentConfig> load_config(const std::string& path, bool quiet_warnings = false) {
  nlohmann::json doc;
  try {
    doc = degas::tools::load_config_document(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
  ExperimentConfig cfg;
  const auto report = degas::tools::validate_config(doc, fs::path(path).parent_path(), cfg);
  for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
  if (!quiet_warnings) {
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  }
  if (!report.ok()) return std::nullopt;
  return cfg;
}

int cmd_validate(const std::string& path, bool estimate) {
  auto cfg = load_config(path);
  if (!cfg) return kConfigError;
  std::cout << "ok\n";
  if (estimate) {
    try {
      std::printf("estimated wall time: %.2f s\n", degas::tools::estimate_wall_seconds(*cfg));
    } catch (const degas::tools::ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    }
  }
  return kOk;
}

int cmd_run(const std::string& path, const degas::tools::RunOverrides& overrides) {
  auto cfg = load_config(path);
  if (!cfg) return kConfigError;
  try {
    const auto summary = degas::tools::run_experiment(*cfg, overrides, std::cerr);
    for (const auto& v : summary.bound_violations) std::cerr << "bound violated: " << v << "\n";
    if (!summary.bound_violations.empty()) return kRuntimeFailure;
  } catch (const degas::tools::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degas: delay-agnostic asynchronous coordinate update experiments"};
  app.require_subcommand(1);

  std::string config_path;
  degas::tools::RunOverrides overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t runs = 0;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "YAML or JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  run->add_option("--seed", seed, "base seed (overrides the config)");
  run->add_option("--runs", runs, "Monte Carlo runs (overrides the config)")->check(CLI::PositiveNumber);
  run->add_flag("--check-bounds", overrides.check_bounds, "fail if a mean curve exceeds its bound by 3 std errors");

  bool no_estimate = false;
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("--config", config_path, "YAML or JSON config")->required();
  validate->add_flag("--no-estimate", no_estimate, "skip the timed probe behind the wall time estimate");

  double c = 0.8;
  int m = 20;
  int tau_bar = 20;
  std::string distribution;
  int workers_for_rates = 0;
  auto* rates = app.add_subcommand("rates", "print the rate report as JSON");
  rates->add_option("--c", c, "contraction modulus in (0, 1)");
  rates->add_option("--m", m, "number of blocks");
  rates->add_option("--tau-bar", tau_bar, "delay bound");
  rates->add_option("--distribution", distribution, "small, uniform or large");
  rates->add_option("--workers", workers_for_rates, "report the speedup ratio for this many workers");

  degas::tools::AsyncRunRequest request;
  std::size_t straggler_index = 0;
  std::string trace_out;
  auto* async = app.add_subcommand("async-run", "one master-worker run on a problem config");
  async->add_option("--config", config_path, "lasso or logistic config (default: synthetic lasso)");
  async->add_option("--workers", request.workers, "worker threads")->check(CLI::PositiveNumber);
  async->add_option("--budget", request.budget, "master updates K")->required();
  auto* straggler_opt = async->add_option("--straggler-index", straggler_index, "slowed worker");
  async->add_option("--straggler-multiple", request.straggler.multiple, "sleep this multiple of compute time")
      ->check(CLI::NonNegativeNumber);
  async->add_option("--trace-out", trace_out, "delay trace CSV (default OUT/trace.csv)");
  async->add_option("--out", out_dir, "output directory");
  async->add_option("--seed", seed, "block sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      if (!out_dir.empty()) overrides.out_dir = out_dir;
      if (run->count("--seed") > 0) overrides.seed = seed;
      if (runs > 0) overrides.runs = runs;
      return cmd_run(config_path, overrides);
    }
    if (*validate) return cmd_validate(config_path, !no_estimate);
    if (*rates) {
      std::optional<degas::DelayDistribution> dist;
      if (!distribution.empty()) {
        dist = degas::make_polynomial_distribution(degas::parse_polynomial_kind(distribution), tau_bar);
      }
      std::optional<int> w;
      if (workers_for_rates > 0) w = workers_for_rates;
      const auto report = degas::theory::make_rate_report(c, m, tau_bar, dist ? &*dist : nullptr, w);
      std::cout << degas::theory::to_json(report).dump(2) << "\n";
      return kOk;
    }
    if (*async) {
      ExperimentConfig cfg;
      cfg.kind = degas::tools::ExperimentKind::kLasso;
      if (!config_path.empty()) {
        auto loaded = load_config(config_path, true);
        if (!loaded) return kConfigError;
        cfg = *loaded;
      }
      if (straggler_opt->count() > 0) {
        if (straggler_index >= request.workers) {
          std::cerr << "error: --straggler-index must be < --workers\n";
          return kConfigError;
        }
        request.straggler.worker = straggler_index;
      }
      if (!trace_out.empty()) request.trace_out = trace_out;
      if (!out_dir.empty()) request.out_dir = out_dir;
      request.seed = seed;
      degas::tools::run_async_command(cfg, request, std::cerr);
      return kOk;
    }
  } catch (const degas::tools::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const degas::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}
