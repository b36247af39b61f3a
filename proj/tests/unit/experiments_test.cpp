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

#include "degas_tools/experiments.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "degas/errors.hpp"
#include "degas_tools/config.hpp"

namespace degas::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("degas_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig must_validate(const json& doc) {
  ExperimentConfig cfg;
  const auto report = validate_config(doc, ".", cfg);
  EXPECT_TRUE(report.ok()) << (report.errors.empty() ? "" : report.errors.front());
  return cfg;
}

std::vector<std::string> errors_of(const json& doc) {
  ExperimentConfig cfg;
  return validate_config(doc, ".", cfg).errors;
}

TEST(Config, ShippedConfigsValidate) {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(DEGAS_CONFIG_DIR)) {
    ExperimentConfig cfg;
    const auto report = validate_config(load_config_document(entry.path()), entry.path().parent_path(), cfg);
    EXPECT_TRUE(report.ok()) << entry.path() << ": " << (report.errors.empty() ? "" : report.errors.front());
    ++count;
  }
  EXPECT_GE(count, 7u);
}

TEST(Config, YamlScalarsKeepTheirTypes) {
  const auto dir = scratch("yaml");
  std::ofstream(dir / "c.yaml") << "a: 3\nb: 1.0e-3\nc: true\nd: small\ne: \"7\"\nf: [1, x]\n";
  const auto doc = load_config_document(dir / "c.yaml");
  EXPECT_TRUE(doc["a"].is_number_integer());
  EXPECT_DOUBLE_EQ(doc["b"].get<double>(), 1e-3);
  EXPECT_TRUE(doc["c"].get<bool>());
  EXPECT_EQ(doc["d"], "small");
  EXPECT_EQ(doc["e"], "7");
  EXPECT_EQ(doc["f"][1], "x");
}

TEST(Config, SyntaxErrorsCarryLineNumbers) {
  const auto dir = scratch("syntax");
  std::ofstream(dir / "bad.yaml") << "experiment: demonstration\nruns: [1, 2\n";
  EXPECT_THROW(load_config_document(dir / "bad.yaml"), ParseError);
  EXPECT_THROW(load_config_document(dir / "missing.yaml"), std::runtime_error);
}

TEST(Config, DemonstrationDefaults) {
  const auto cfg = must_validate({{"experiment", "demonstration"}});
  EXPECT_EQ(cfg.runs, 2000u);
  EXPECT_EQ(cfg.iterations, 100);
  ASSERT_EQ(cfg.delays.size(), 3u);
  EXPECT_EQ(cfg.delays[0].label, "small");
  EXPECT_EQ(cfg.delays[2].distribution->tau_bar(), 20u);
  EXPECT_EQ(cfg.engines, (std::vector<EngineKind>{EngineKind::kDegas, EngineKind::kArock}));
}

TEST(Config, ErrorsNameTheField) {
  auto has = [](const std::vector<std::string>& errs, const std::string& field) {
    for (const auto& e : errs) {
      if (e.rfind(field + ":", 0) == 0) return true;
    }
    return false;
  };
  EXPECT_TRUE(has(errors_of({{"experiment", "lasso"}, {"data", {{"synthetic", json::object()}}}, {"step_scale", 2.0}}),
                  "step_scale"));
  EXPECT_TRUE(has(errors_of({{"experiment", "demonstration"}, {"runs", 0}}), "runs"));
  EXPECT_TRUE(has(errors_of({{"experiment", "demonstration"}, {"operator", {{"c", 1.5}}}}), "operator.c"));
  EXPECT_TRUE(has(errors_of({{"experiment", "demonstration"}, {"colour", 1}}), "colour"));
  EXPECT_TRUE(has(errors_of({{"experiment", "demonstration"}, {"arock", {{"step", 1.5}}}}), "arock.step"));
  EXPECT_TRUE(has(errors_of({{"experiment", "lasso"}}), "data"));
  EXPECT_TRUE(has(errors_of({{"experiment", "lasso"}, {"data", {{"path", "/nonexistent/file"}}}}), "data.path"));
  EXPECT_TRUE(has(errors_of({{"experiment", "demonstration"},
                             {"delays", json::array({{{"kind", "growth"}, {"beta", 1.5}}})}}),
                  "delays[0].beta"));
  EXPECT_TRUE(has(errors_of({{"experiment", "nope"}}), "experiment"));
  EXPECT_TRUE(has(errors_of({{"experiment", "straggler"}, {"data", {{"synthetic", json::object()}}},
                             {"workers", 2}, {"straggler_index", 2}}),
                  "straggler_index"));
}

TEST(Config, TheoreticalArockStepWithoutBoundWarns) {
  ExperimentConfig cfg;
  const json doc{{"experiment", "demonstration"},
                 {"delays", json::array({{{"kind", "growth"}, {"beta", 0.5}}})},
                 {"engines", {"arock"}}};
  const auto report = validate_config(doc, ".", cfg);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("arock.tau_bar"), std::string::npos);
  std::ostringstream log;
  cfg.out_dir = scratch("warn");
  EXPECT_THROW(run_experiment(cfg, {}, log), ConfigError);
}

TEST(Experiments, BalancedPartition) {
  const auto p = balanced_partition(10, 4);
  EXPECT_EQ(p->size(0), 3u);
  EXPECT_EQ(p->size(1), 3u);
  EXPECT_EQ(p->size(3), 2u);
  EXPECT_EQ(p->dim(), 10u);
  EXPECT_THROW(balanced_partition(3, 4), InvalidArgument);
}

TEST(Experiments, RatesTableRows) {
  const auto cfg = must_validate({{"experiment", "rates-table"}});
  const auto text = rates_table_text(cfg);
  EXPECT_NE(text.find("rho_c = 1 - (1 - c^2)/m = 0.98199999999999998"), std::string::npos);
  EXPECT_NE(text.find("O(rho_c^(k^0.5))"), std::string::npos);
  EXPECT_NE(text.find("O(1/k)"), std::string::npos);
  const auto j = rates_table_json(cfg);
  ASSERT_EQ(j["rows"].size(), 4u);
  EXPECT_NEAR(j["rows"][1]["report"]["rho_a"].get<double>(), 0.9909591313469995973, 1e-15);
  EXPECT_EQ(j["rows"][3]["kind"], "inverse-k");
}

TEST(Experiments, DemonstrationOutputsAreDeterministic) {
  json doc{{"experiment", "demonstration"},
           {"runs", 30},
           {"iterations", 40},
           {"threads", 2},
           {"engines", {"degas", "arock", "sync", "centralized-cd"}},
           {"arock", {{"step", {"theoretical", 0.5}}}}};
  auto cfg = must_validate(doc);
  std::ostringstream log;
  RunOverrides a{scratch("det_a"), 5, std::nullopt, true};
  RunOverrides b{scratch("det_b"), 5, std::nullopt, true};
  const auto first = run_experiment(cfg, a, log);
  const auto second = run_experiment(cfg, b, log);
  EXPECT_TRUE(first.bound_violations.empty());
  ASSERT_EQ(first.files, second.files);
  for (const auto& f : first.files) EXPECT_EQ(slurp(*a.out_dir / f), slurp(*b.out_dir / f)) << f;
  for (const char* f : {"curve_degas_small.csv", "curve_arock_large.csv", "curve_arock_eta0.5_uniform.csv",
                        "curve_sync.csv", "curve_centralized.csv", "bound_small.csv", "rates_large.json",
                        "manifest.json"}) {
    EXPECT_TRUE(fs::exists(*a.out_dir / f)) << f;
  }
  const auto curve = slurp(*a.out_dir / "curve_degas_small.csv");
  EXPECT_EQ(curve.substr(0, curve.find('\n')), "k,evals,mean_dist_sq,std_error,runs");
  EXPECT_NE(curve.find("\n0,0,20,0,30\n"), std::string::npos);
  // Two sweeps cover 40 evaluations on 20 blocks.
  const auto sync = slurp(*a.out_dir / "curve_sync.csv");
  EXPECT_NE(sync.find("\n2,40,"), std::string::npos);
  const auto manifest = json::parse(slurp(*a.out_dir / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["curves"].size(), 11u);
}

TEST(Experiments, SequenceTightness) {
  auto cfg = must_validate({{"experiment", "sequence-tightness"}});
  cfg.out_dir = scratch("sequence");
  std::ostringstream log;
  const auto summary = run_experiment(cfg, {}, log);
  EXPECT_TRUE(summary.manifest["sequence"]["holds"].get<bool>());
  EXPECT_NEAR(summary.manifest["sequence"]["complexity_ratio"].get<double>(), 2.0 / 21.0, 1e-15);
  const auto csv = slurp(cfg.out_dir / "sequence.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 502);
}

TEST(Experiments, LassoCurvesAndNoBoundWithoutModulus) {
  auto cfg = must_validate({{"experiment", "lasso"},
                            {"runs", 3},
                            {"iterations", 400},
                            {"blocks", 10},
                            {"data", {{"synthetic", {{"n", 100}, {"d", 10}}}}}});
  cfg.out_dir = scratch("lasso");
  std::ostringstream log;
  const auto summary = run_experiment(cfg, {}, log);
  EXPECT_LE(summary.manifest["operator"]["fixed_point_residual"].get<double>(), 1e-12);
  EXPECT_EQ(summary.manifest["bounds"]["omitted"], "operator has no contraction modulus");
  EXPECT_TRUE(fs::exists(cfg.out_dir / "curve_degas_uniform.csv"));
  EXPECT_TRUE(fs::exists(cfg.out_dir / "curve_sync.csv"));
}

TEST(Experiments, LogisticEmitsBounds) {
  auto cfg = must_validate({{"experiment", "logistic"},
                            {"runs", 10},
                            {"iterations", 200},
                            {"blocks", 10},
                            {"lambda2", 0.05},
                            {"data", {{"synthetic", {{"n", 100}, {"d", 10}, {"noise", 0.5}}}}}});
  cfg.out_dir = scratch("logistic");
  std::ostringstream log;
  const auto summary = run_experiment(cfg, {std::nullopt, std::nullopt, std::nullopt, true}, log);
  EXPECT_TRUE(summary.bound_violations.empty());
  EXPECT_TRUE(fs::exists(cfg.out_dir / "bound_uniform.csv"));
}

TEST(Experiments, LoadsDatasetFromFile) {
  const auto dir = scratch("file");
  {
    std::ofstream out(dir / "d.csv");
    for (int i = 0; i < 30; ++i) out << (i % 3) << "," << (i % 5) * 0.1 << "," << (i % 7) - 3 << "," << 1.0 - 0.02 * i << "\n";
  }
  std::ofstream(dir / "cfg.yaml") << "experiment: lasso\nruns: 1\niterations: 60\nblocks: 3\n"
                                  << "data: {path: d.csv, format: csv}\nengines: [sync]\n";
  ExperimentConfig cfg;
  const auto report = validate_config(load_config_document(dir / "cfg.yaml"), dir, cfg);
  ASSERT_TRUE(report.ok()) << report.errors.front();
  cfg.out_dir = dir / "out";
  std::ostringstream log;
  run_experiment(cfg, {}, log);
  EXPECT_TRUE(fs::exists(cfg.out_dir / "curve_sync.csv"));
}

TEST(Experiments, AsyncRunWritesTrace) {
  auto cfg = must_validate({{"experiment", "lasso"},
                            {"blocks", 10},
                            {"data", {{"synthetic", {{"n", 100}, {"d", 10}}}}}});
  AsyncRunRequest req;
  req.workers = 3;
  req.budget = 300;
  req.out_dir = scratch("async");
  std::ostringstream log;
  const auto summary = run_async_command(cfg, req, log);
  const auto trace = slurp(req.out_dir / "trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "k,worker,tau");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 301);
  EXPECT_EQ(summary.manifest["histogram"]["total"], 300);
  EXPECT_LT(summary.manifest["final_residual"].get<double>(), summary.manifest["initial_residual"].get<double>());
}

}  // namespace
}  // namespace degas::tools
