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

#include "degas_tools/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "degas/errors.hpp"

namespace degas::tools {
namespace {

using nlohmann::json;

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  // Quoted scalars carry the "!" tag and stay strings.
  if (node.Tag() == "!") return node.as<std::string>();
  const std::string text = node.as<std::string>();
  std::int64_t i = 0;
  if (YAML::convert<std::int64_t>::decode(node, i)) return i;
  double d = 0.0;
  if (YAML::convert<double>::decode(node, d)) return d;
  bool b = false;
  if (YAML::convert<bool>::decode(node, b)) return b;
  return text;
}

// Typed field access with error collection. Every key read is remembered so
// that finish() can flag the leftovers (usually typos).
class Fields {
 public:
  Fields(const json& obj, std::string prefix, ValidationReport& report)
      : obj_(obj), prefix_(std::move(prefix)), report_(report) {
    if (!obj_.is_object()) error("", "expected a mapping");
  }

  bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }
  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void error(const std::string& key, const std::string& message) {
    report_.errors.push_back((key.empty() ? prefix_ : path(key)) + ": " + message);
  }

  double number(const std::string& key, double fallback, const std::function<bool(double)>& ok = {},
                const char* domain = "") {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) {
      error(key, "expected a number");
      return fallback;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x) || (ok && !ok(x))) {
      error(key, std::string("must be ") + domain);
      return fallback;
    }
    return x;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t min_value) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) {
      error(key, "expected an integer");
      return fallback;
    }
    const auto x = v.get<std::int64_t>();
    if (x < min_value) {
      error(key, "must be >= " + std::to_string(min_value));
      return fallback;
    }
    return x;
  }

  std::optional<std::string> string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw(key);
    if (!v.is_string()) {
      error(key, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) {
      error(key, "expected true or false");
      return fallback;
    }
    return v.get<bool>();
  }

  void finish() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) error(key, "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  ValidationReport& report_;
  std::set<std::string> seen_;
};

const auto positive = [](double x) { return x > 0.0; };
const auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
const auto open_two = [](double x) { return x > 0.0 && x < 2.0; };

std::optional<DelaySpec> parse_delay(const json& node, const std::string& prefix, ValidationReport& report) {
  Fields f(node, prefix, report);
  if (!node.is_object()) return std::nullopt;
  const auto kind = f.string("kind").value_or("");
  DelaySpec spec;
  try {
    if (kind == "zero") {
      spec.label = "zero";
      spec.model = DelayModel::zero();
      spec.distribution = DelayDistribution({1.0});
    } else if (kind == "polynomial") {
      const auto shape = f.string("shape").value_or("uniform");
      const auto tau = f.integer("tau_bar", 20, 0);
      spec.distribution = make_polynomial_distribution(parse_polynomial_kind(shape), static_cast<int>(tau));
      spec.label = shape;
      spec.model = DelayModel::bounded_iid(*spec.distribution, 0);
    } else if (kind == "distribution") {
      if (!f.has("p") || !f.raw("p").is_array()) {
        f.error("p", "expected a list of probabilities");
        return std::nullopt;
      }
      spec.distribution = DelayDistribution(f.raw("p").get<std::vector<double>>());
      spec.label = "custom";
      spec.model = DelayModel::bounded_iid(*spec.distribution, 0);
    } else if (kind == "growth") {
      const double eta = f.number("eta", 0.5, open_unit, "in (0, 1)");
      const double beta = f.number("beta", 1.0, [](double b) { return b > 0.0 && b <= 1.0; }, "in (0, 1]");
      const double offset = f.number("offset", 1.0, [](double g) { return g >= 1.0; }, ">= 1");
      const auto mode = f.string("mode").value_or("adversarial-max");
      GrowthMode gm = GrowthMode::kAdversarialMax;
      if (mode == "randomized") {
        gm = GrowthMode::kRandomized;
      } else if (mode != "adversarial-max") {
        f.error("mode", "expected adversarial-max or randomized");
      }
      spec.growth_beta = beta;
      std::ostringstream label;
      label << "growth-beta" << beta;
      spec.label = label.str();
      spec.model = DelayModel::growth(eta, beta, offset, gm, 0);
    } else {
      f.error("kind", "expected zero, polynomial, distribution or growth");
      return std::nullopt;
    }
  } catch (const std::exception& e) {
    f.error("", e.what());
    return std::nullopt;
  }
  if (auto label = f.string("label")) spec.label = *label;
  f.finish();
  return spec;
}

void parse_delays(Fields& top, ExperimentConfig& cfg, ValidationReport& report, bool required) {
  if (!top.has("delays")) {
    if (required) top.error("delays", "required");
    return;
  }
  const json& node = top.raw("delays");
  std::vector<json> items;
  if (node.is_array()) {
    items.assign(node.begin(), node.end());
  } else {
    items.push_back(node);
  }
  std::set<std::string> labels;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto spec = parse_delay(items[i], "delays[" + std::to_string(i) + "]", report);
    if (!spec) continue;
    if (!labels.insert(spec->label).second) {
      report.errors.push_back("delays[" + std::to_string(i) + "]: duplicate label '" + spec->label + "'");
    }
    cfg.delays.push_back(std::move(*spec));
  }
}

void parse_engines(Fields& top, ExperimentConfig& cfg, std::vector<EngineKind> fallback) {
  if (!top.has("engines")) {
    cfg.engines = std::move(fallback);
    return;
  }
  const json& node = top.raw("engines");
  if (!node.is_array() || node.empty()) {
    top.error("engines", "expected a non-empty list");
    return;
  }
  for (const auto& e : node) {
    try {
      cfg.engines.push_back(parse_engine_kind(e.is_string() ? e.get<std::string>() : ""));
    } catch (const std::exception& ex) {
      top.error("engines", ex.what());
    }
  }
}

void parse_arock(Fields& top, ExperimentConfig& cfg, ValidationReport& report) {
  cfg.arock_steps = {ArockStep{}};
  if (!top.has("arock")) return;
  Fields f(top.raw("arock"), "arock", report);
  if (f.has("tau_bar")) cfg.arock_tau_bar = static_cast<int>(f.integer("tau_bar", 0, 0));
  if (f.has("step")) {
    const json& step = f.raw("step");
    std::vector<json> items = step.is_array() ? std::vector<json>(step.begin(), step.end()) : std::vector<json>{step};
    cfg.arock_steps.clear();
    for (const auto& s : items) {
      if (s.is_string() && s.get<std::string>() == "theoretical") {
        cfg.arock_steps.push_back(ArockStep{});
      } else if (s.is_number() && s.get<double>() > 0.0 && s.get<double>() <= 1.0) {
        cfg.arock_steps.push_back(ArockStep{s.get<double>()});
      } else {
        f.error("step", "expected 'theoretical' or numbers in (0, 1]");
      }
    }
    if (cfg.arock_steps.empty()) f.error("step", "empty list");
  }
  f.finish();
}

void parse_data(Fields& top, const std::filesystem::path& base_dir, ExperimentConfig& cfg, ValidationReport& report) {
  if (!top.has("data")) return;
  Fields f(top.raw("data"), "data", report);
  if (auto p = f.string("path")) {
    std::filesystem::path path(*p);
    if (path.is_relative()) path = base_dir / path;
    if (!std::filesystem::exists(path)) f.error("path", "file not found: " + path.string());
    cfg.data.path = path;
    try {
      cfg.data.format = parse_data_format(f.string("format").value_or("libsvm"));
    } catch (const std::exception& e) {
      f.error("format", e.what());
    }
    if (f.has("dim")) cfg.data.load.dim = static_cast<std::size_t>(f.integer("dim", 1, 1));
    cfg.data.load.map_binary_labels = f.boolean("map_binary_labels", cfg.kind == ExperimentKind::kLogistic);
  } else if (f.has("synthetic")) {
    Fields s(f.raw("synthetic"), "data.synthetic", report);
    cfg.data.synth_seed = static_cast<std::uint64_t>(s.integer("seed", 0, 0));
    cfg.data.synth_n = static_cast<std::size_t>(s.integer("n", 200, 1));
    cfg.data.synth_d = static_cast<std::size_t>(s.integer("d", 20, 1));
    cfg.data.synth_sparsity = s.number("sparsity", 0.2, [](double x) { return x >= 0.0 && x <= 1.0; }, "in [0, 1]");
    cfg.data.synth_noise = s.number("noise", 0.01, [](double x) { return x >= 0.0; }, ">= 0");
    s.finish();
  } else {
    f.error("", "expected 'path' or 'synthetic'");
  }
  f.finish();
}

void parse_common(Fields& top, ExperimentConfig& cfg, std::int64_t default_runs, std::int64_t default_iters) {
  cfg.seed = static_cast<std::uint64_t>(top.integer("seed", 0, 0));
  cfg.runs = static_cast<std::size_t>(top.integer("runs", default_runs, 1));
  cfg.iterations = top.integer("iterations", default_iters, 0);
  cfg.threads = static_cast<std::size_t>(top.integer("threads", 1, 1));
  if (auto out = top.string("output")) cfg.out_dir = *out;
}

void parse_problem(Fields& top, const std::filesystem::path& base_dir, ExperimentConfig& cfg,
                   ValidationReport& report) {
  parse_data(top, base_dir, cfg, report);
  if (!top.has("data")) top.error("data", "required");
  cfg.blocks = static_cast<int>(top.integer("blocks", 20, 1));
  cfg.lambda1 = top.number("lambda1", 1e-3, [](double x) { return x >= 0.0; }, ">= 0");
  cfg.lambda2 = top.number("lambda2", 1e-4, [](double x) { return x >= 0.0; }, ">= 0");
  cfg.step_scale = top.number("step_scale", 1.0, open_two, "in (0, 2) (gamma = step_scale / L)");
  if (!cfg.data.path && cfg.blocks > static_cast<int>(cfg.data.synth_d)) {
    top.error("blocks", "more blocks than features");
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDemonstration: return "demonstration";
    case ExperimentKind::kLasso: return "lasso";
    case ExperimentKind::kLogistic: return "logistic";
    case ExperimentKind::kRatesTable: return "rates-table";
    case ExperimentKind::kSequenceTightness: return "sequence-tightness";
    case ExperimentKind::kStraggler: return "straggler";
  }
  return "?";
}

nlohmann::json load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (path.extension() == ".json") {
    try {
      return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
      throw ParseError(0, e.what());
    }
  }
  try {
    return yaml_to_json(YAML::Load(buffer.str()));
  } catch (const YAML::Exception& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line + 1), e.msg);
  }
}

ValidationReport validate_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                 ExperimentConfig& cfg) {
  ValidationReport report;
  cfg = ExperimentConfig{};
  Fields top(doc, "", report);
  if (!doc.is_object()) return report;
  const auto name = top.string("experiment");
  if (!name) {
    top.error("experiment", "required");
    return report;
  }
  if (*name == "demonstration") {
    cfg.kind = ExperimentKind::kDemonstration;
    parse_common(top, cfg, 2000, 100);
    if (top.has("operator")) {
      Fields op(top.raw("operator"), "operator", report);
      cfg.c = op.number("c", 0.8, open_unit, "in (0, 1)");
      cfg.blocks = static_cast<int>(op.integer("blocks", 20, 1));
      op.finish();
    }
    parse_delays(top, cfg, report, false);
    if (cfg.delays.empty() && !top.has("delays")) {
      for (const char* shape : {"small", "uniform", "large"}) {
        auto dist = make_polynomial_distribution(parse_polynomial_kind(shape), 20);
        cfg.delays.push_back({shape, DelayModel::bounded_iid(dist, 0), dist, std::nullopt});
      }
    }
    parse_engines(top, cfg, {EngineKind::kDegas, EngineKind::kArock});
    parse_arock(top, cfg, report);
  } else if (*name == "lasso" || *name == "logistic") {
    cfg.kind = *name == "lasso" ? ExperimentKind::kLasso : ExperimentKind::kLogistic;
    parse_common(top, cfg, 1, 2000);
    parse_problem(top, base_dir, cfg, report);
    parse_delays(top, cfg, report, false);
    if (cfg.delays.empty() && !top.has("delays")) {
      auto dist = make_polynomial_distribution(PolynomialKind::kUniform, 10);
      cfg.delays.push_back({"uniform", DelayModel::bounded_iid(dist, 0), dist, std::nullopt});
    }
    parse_engines(top, cfg, {EngineKind::kDegas, EngineKind::kArock, EngineKind::kSync});
    parse_arock(top, cfg, report);
  } else if (*name == "rates-table") {
    cfg.kind = ExperimentKind::kRatesTable;
    if (auto out = top.string("output")) cfg.out_dir = *out;
    cfg.c = top.number("c", 0.8, open_unit, "in (0, 1)");
    cfg.blocks = static_cast<int>(top.integer("m", 20, 1));
    if (top.has("rows")) {
      const json& rows = top.raw("rows");
      if (!rows.is_array()) top.error("rows", "expected a list");
      for (std::size_t i = 0; rows.is_array() && i < rows.size(); ++i) {
        Fields r(rows[i], "rows[" + std::to_string(i) + "]", report);
        RatesRow row;
        if (r.has("tau_bar")) row.tau_bar = static_cast<int>(r.integer("tau_bar", 0, 0));
        if (r.has("growth_beta")) {
          row.growth_beta = r.number("growth_beta", 1.0, [](double b) { return b > 0.0 && b <= 1.0; }, "in (0, 1]");
        }
        if (row.tau_bar.has_value() == row.growth_beta.has_value()) r.error("", "give exactly one of tau_bar, growth_beta");
        row.label = r.string("label").value_or(row.tau_bar ? "tau_bar=" + std::to_string(*row.tau_bar) : "growth");
        r.finish();
        cfg.rows.push_back(row);
      }
    } else {
      cfg.rows = {{"tau_bar=0", 0, std::nullopt},
                  {"tau_bar=20", 20, std::nullopt},
                  {"O(k^0.5)", std::nullopt, 0.5},
                  {"O(k)", std::nullopt, 1.0}};
    }
  } else if (*name == "sequence-tightness") {
    cfg.kind = ExperimentKind::kSequenceTightness;
    if (auto out = top.string("output")) cfg.out_dir = *out;
    cfg.p = top.number("p", 0.95, open_unit, "in (0, 1)");
    cfg.q = top.number("q", 0.032, open_unit, "in (0, 1)");
    cfg.tau_bar = static_cast<int>(top.integer("tau_bar", 20, 0));
    cfg.horizon = static_cast<int>(top.integer("horizon", 500, 0));
    if (cfg.p + cfg.q >= 1.0) top.error("q", "p + q must be < 1");
  } else if (*name == "straggler") {
    cfg.kind = ExperimentKind::kStraggler;
    parse_common(top, cfg, 1, 0);
    parse_problem(top, base_dir, cfg, report);
    cfg.workers = static_cast<std::size_t>(top.integer("workers", 4, 1));
    cfg.budget = top.integer("budget", 20000, 0);
    cfg.sweeps = top.integer("sweeps", 0, 0);
    cfg.straggler_multiple = top.number("straggler_multiple", 2.0, [](double x) { return x >= 0.0; }, ">= 0");
    if (top.has("straggler_index")) {
      cfg.straggler_worker = static_cast<std::size_t>(top.integer("straggler_index", 0, 0));
      if (*cfg.straggler_worker >= cfg.workers) top.error("straggler_index", "must be < workers");
    } else {
      cfg.straggler_worker = 0;
    }
  } else {
    top.error("experiment",
              "unknown experiment '" + *name +
                  "' (demonstration, lasso, logistic, rates-table, sequence-tightness, straggler)");
    return report;
  }
  top.finish();

  const bool wants_arock =
      std::find(cfg.engines.begin(), cfg.engines.end(), EngineKind::kArock) != cfg.engines.end();
  const bool theoretical =
      std::any_of(cfg.arock_steps.begin(), cfg.arock_steps.end(), [](const ArockStep& s) { return !s.value; });
  if (wants_arock && theoretical && !cfg.arock_tau_bar) {
    for (const auto& d : cfg.delays) {
      if (!d.distribution) {
        report.warnings.push_back("arock: delay model '" + d.label +
                                  "' has no bound tau_bar for the theoretical step; set arock.tau_bar or give "
                                  "numeric arock.step values (hand-tuned mode)");
      }
    }
  }
  return report;
}

}  // namespace degas::tools
