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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "degas/dataset.hpp"
#include "degas/delay.hpp"
#include "degas/engines.hpp"

namespace degas::tools {

enum class ExperimentKind { kDemonstration, kLasso, kLogistic, kRatesTable, kSequenceTightness, kStraggler };

std::string to_string(ExperimentKind kind);

/// A delay model plus the metadata the rate formulas need.
struct DelaySpec {
  std::string label;
  DelayModel model;
  /// Present for bounded i.i.d. models.
  std::optional<DelayDistribution> distribution;
  /// Present for growth models.
  std::optional<double> growth_beta;
};

/// "theoretical" resolves to 1/(2 tau_bar/sqrt(m) + 1) once tau_bar is known.
struct ArockStep {
  std::optional<double> value;
};

struct DataSpec {
  std::optional<std::filesystem::path> path;
  DataFormat format = DataFormat::kLibsvm;
  LoadOptions load;
  std::uint64_t synth_seed = 0;
  std::size_t synth_n = 200;
  std::size_t synth_d = 20;
  double synth_sparsity = 0.2;
  double synth_noise = 0.01;
};

struct RatesRow {
  std::string label;
  std::optional<int> tau_bar;
  std::optional<double> growth_beta;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kDemonstration;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  std::int64_t iterations = 100;
  std::size_t threads = 1;

  std::vector<EngineKind> engines;
  std::vector<ArockStep> arock_steps;
  /// tau_bar used for the theoretical ARock step when the delays do not fix one.
  std::optional<int> arock_tau_bar;
  std::vector<DelaySpec> delays;

  // demonstration, rates-table
  double c = 0.8;
  int blocks = 20;

  // lasso, logistic, straggler
  DataSpec data;
  double lambda1 = 1e-3;
  double lambda2 = 1e-4;
  double step_scale = 1.0;

  // rates-table
  std::vector<RatesRow> rows;

  // sequence-tightness
  double p = 0.95;
  double q = 0.032;
  int tau_bar = 20;
  int horizon = 500;

  // straggler
  std::size_t workers = 4;
  std::int64_t budget = 0;
  std::optional<std::size_t> straggler_worker;
  double straggler_multiple = 2.0;
  std::int64_t sweeps = 0;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Parses YAML or JSON (by extension; .json is JSON, anything else YAML).
/// Throws ParseError on syntax errors and std::runtime_error if unreadable.
nlohmann::json load_config_document(const std::filesystem::path& path);

/// Schema and semantic checks. On success `out` holds the typed config with
/// relative dataset paths resolved against `base_dir`.
ValidationReport validate_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                 ExperimentConfig& out);

}  // namespace degas::tools
