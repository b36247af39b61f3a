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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "degas/operator.hpp"
#include "degas/problems.hpp"
#include "degas/runtime.hpp"
#include "degas_tools/config.hpp"

namespace degas::tools {

/// A config that validated but cannot be executed as written (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  bool check_bounds = false;
};

struct RunSummary {
  std::vector<std::string> files;
  /// Bound-dominance failures found in --check-bounds mode.
  std::vector<std::string> bound_violations;
  nlohmann::json manifest;
};

/// Runs the experiment and writes its outputs plus manifest.json into the
/// output directory. Progress goes to `log`.
RunSummary run_experiment(ExperimentConfig cfg, const RunOverrides& overrides, std::ostream& log);

/// Extrapolates the wall time of run_experiment from one timed probe run per curve.
double estimate_wall_seconds(const ExperimentConfig& cfg);

/// The problem, its BCD operator at gamma = step_scale / L, and the fixed
/// point attached as the operator's distance reference.
struct BuiltProblem {
  CompositeProblem problem;
  Operator op;
  double fixed_point_residual = 0.0;
};

BuiltProblem build_problem(const ExperimentConfig& cfg);

/// Near-equal block sizes; the first (dim % blocks) blocks get one extra entry.
PartitionPtr balanced_partition(std::size_t dim, std::size_t blocks);

/// Plain-text table of convergence rate orders per delay regime.
std::string rates_table_text(const ExperimentConfig& cfg);
nlohmann::json rates_table_json(const ExperimentConfig& cfg);

struct AsyncRunRequest {
  std::size_t workers = 4;
  std::int64_t budget = 0;
  StragglerConfig straggler;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> trace_out;
  std::filesystem::path out_dir = "out";
};

/// One master-worker run on the configured problem. Writes the trajectory,
/// the delay trace and its histogram summary.
RunSummary run_async_command(const ExperimentConfig& cfg, const AsyncRunRequest& request, std::ostream& log);

}  // namespace degas::tools
