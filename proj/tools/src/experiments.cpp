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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "degas/dataset.hpp"
#include "degas/errors.hpp"
#include "degas/monte_carlo.hpp"
#include "degas/splitting.hpp"
#include "degas/theory.hpp"

namespace degas::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

void write_file(const fs::path& path, const std::string& content, RunSummary& summary) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
  summary.files.push_back(path.filename().string());
}

void apply_overrides(ExperimentConfig& cfg, const RunOverrides& o) {
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) cfg.runs = *o.runs;
}

Dataset load_data(const ExperimentConfig& cfg) {
  if (cfg.data.path) return load_dataset(cfg.data.path->string(), cfg.data.format, cfg.data.load);
  const auto kind = cfg.kind == ExperimentKind::kLogistic ? LabelKind::kClassification : LabelKind::kRegression;
  return synth_problem(cfg.data.synth_seed, cfg.data.synth_n, cfg.data.synth_d, cfg.data.synth_sparsity,
                       cfg.data.synth_noise, kind);
}

double resolve_arock_step(const ArockStep& step, const DelaySpec& delay, const ExperimentConfig& cfg, int m) {
  if (step.value) return *step.value;
  std::optional<int> tau_bar = cfg.arock_tau_bar;
  if (!tau_bar && delay.distribution) tau_bar = static_cast<int>(delay.distribution->tau_bar());
  if (!tau_bar) {
    throw ConfigError("arock: the theoretical step needs a delay bound under '" + delay.label +
                      "'; set arock.tau_bar or give numeric arock.step values");
  }
  return theory::arock_theoretical_step(*tau_bar, m);
}

struct Curve {
  std::string name;
  EngineKind engine = EngineKind::kDegas;
  const DelaySpec* delay = nullptr;
  std::optional<double> eta;
  CurveStats stats;
  std::int64_t evals_per_record = 1;
};

std::string curve_csv(const Curve& c) {
  std::string s = "k,evals,mean_dist_sq,std_error,runs\n";
  for (std::size_t j = 0; j < c.stats.k.size(); ++j) {
    s += std::to_string(c.stats.k[j]) + "," + std::to_string(c.stats.k[j] * c.evals_per_record) + "," +
         num(c.stats.mean[j]) + "," + num(c.stats.std_error[j]) + "," + std::to_string(c.stats.runs) + "\n";
  }
  return s;
}

struct CurveJob {
  Curve curve;
  RunConfig rc;
  std::size_t runs = 1;
};

std::vector<CurveJob> plan_curves(const Operator& op, const ExperimentConfig& cfg) {
  const int m = static_cast<int>(op.partition().blocks());
  std::vector<CurveJob> jobs;
  for (EngineKind engine : cfg.engines) {
    RunConfig rc;
    rc.engine = engine;
    rc.iterations = cfg.iterations;
    if (engine == EngineKind::kSync) {
      // K block evaluations correspond to ceil(K / m) sweeps.
      rc.iterations = (cfg.iterations + m - 1) / m;
      jobs.push_back({Curve{"sync", engine, nullptr, std::nullopt, {}, m}, rc, 1});
      continue;
    }
    if (engine == EngineKind::kCentralizedCd) {
      jobs.push_back({Curve{"centralized", engine, nullptr, std::nullopt, {}, 1}, rc, cfg.runs});
      continue;
    }
    for (const auto& delay : cfg.delays) {
      rc.delays = delay.model;
      if (engine == EngineKind::kDegas) {
        jobs.push_back({Curve{"degas_" + delay.label, engine, &delay, std::nullopt, {}, 1}, rc, cfg.runs});
        continue;
      }
      for (const auto& step : cfg.arock_steps) {
        rc.step_eta = resolve_arock_step(step, delay, cfg, m);
        std::string name = "arock_";
        if (step.value) name += "eta" + short_num(*step.value) + "_";
        jobs.push_back({Curve{name + delay.label, engine, &delay, rc.step_eta, {}, 1}, rc, cfg.runs});
      }
    }
  }
  return jobs;
}

// Bound curves V0 rho^k paired with the DEGAS curve of each bounded delay model.
void emit_bounds(const Operator& op, const BlockVector& x0, const ExperimentConfig& cfg,
                 const std::vector<Curve>& curves, const RunOverrides& overrides, RunSummary& summary) {
  const auto& cert = op.certificate();
  const int m = static_cast<int>(op.partition().blocks());
  const double v0 = (x0.values() - op.fixed_point_hint()->values()).squaredNorm();
  json& bounds = summary.manifest["bounds"];
  bounds = json::object();
  if (!cert.modulus) {
    bounds["omitted"] = "operator has no contraction modulus";
    return;
  }
  const double c = *cert.modulus;
  for (const auto& delay : cfg.delays) {
    const fs::path dir = cfg.out_dir;
    if (!delay.distribution) {
      const auto it = std::find_if(curves.begin(), curves.end(), [&](const Curve& cv) {
        return cv.engine == EngineKind::kDegas && cv.delay == &delay;
      });
      if (it == curves.end() || !delay.growth_beta) continue;
      Trajectory mean_curve{{}, BlockVector(op.partition_ptr()), {}, {}};
      for (std::size_t j = 0; j < it->stats.k.size(); ++j) {
        TrajectoryRecord r;
        r.k = it->stats.k[j];
        r.dist_sq = it->stats.mean[j];
        mean_curve.records.push_back(r);
      }
      const auto fit = theory::sublinear_rate_order(mean_curve, *delay.growth_beta);
      const json j{{"beta", fit.beta},         {"slope", fit.slope},       {"intercept", fit.intercept},
                   {"r_squared", fit.r_squared}, {"points", fit.points},   {"tail_sup", fit.tail_sup},
                   {"mid_sup", fit.mid_sup},   {"sup_ratio", fit.sup_ratio}};
      write_file(dir / ("fit_" + delay.label + ".json"), j.dump(2) + "\n", summary);
      continue;
    }
    const auto report = theory::make_rate_report(c, m, static_cast<int>(delay.distribution->tau_bar()),
                                                 &*delay.distribution);
    write_file(dir / ("rates_" + delay.label + ".json"), theory::to_json(report).dump(2) + "\n", summary);
    const double rho_p = report.rho_p.value_or(report.rho_a);
    std::string csv = "k,rho_a_bound,rho_p_bound\n";
    std::vector<double> bound_a, bound_p;
    for (std::int64_t k = 0; k <= cfg.iterations; ++k) {
      bound_a.push_back(v0 * std::pow(report.rho_a, static_cast<double>(k)));
      bound_p.push_back(v0 * std::pow(rho_p, static_cast<double>(k)));
      csv += std::to_string(k) + "," + num(bound_a.back()) + "," + num(bound_p.back()) + "\n";
    }
    write_file(dir / ("bound_" + delay.label + ".csv"), csv, summary);
    bounds[delay.label] = {{"rho_a", report.rho_a}, {"rho_p", rho_p}, {"v0", v0}};

    if (!overrides.check_bounds) continue;
    for (const auto& cv : curves) {
      if (cv.engine != EngineKind::kDegas || cv.delay != &delay) continue;
      for (std::size_t j = 0; j < cv.stats.k.size(); ++j) {
        const auto k = static_cast<std::size_t>(cv.stats.k[j]);
        const double allowed = 3.0 * cv.stats.std_error[j];
        for (const auto& [label, bound] : {std::pair{"rho_a", &bound_a}, std::pair{"rho_p", &bound_p}}) {
          if (cv.stats.mean[j] > (*bound)[k] + allowed) {
            summary.bound_violations.push_back(cv.name + " exceeds the " + label + " bound at k=" +
                                               std::to_string(k) + ": " + num(cv.stats.mean[j]) + " > " +
                                               num((*bound)[k]));
          }
        }
      }
    }
  }
}

void run_curve_experiment(const Operator& op, const BlockVector& x0, const ExperimentConfig& cfg,
                          const RunOverrides& overrides, RunSummary& summary, std::ostream& log) {
  auto jobs = plan_curves(op, cfg);
  std::vector<Curve> curves;
  json listing = json::array();
  for (auto& job : jobs) {
    const auto start = std::chrono::steady_clock::now();
    const auto runs = run_monte_carlo(op, job.rc, x0, job.runs, cfg.seed, cfg.threads);
    job.curve.stats = aggregate_dist_sq(runs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "  " << job.curve.name << ": " << job.runs << " runs, final mean dist_sq "
        << job.curve.stats.mean.back() << " (" << secs << " s)\n";
    write_file(cfg.out_dir / ("curve_" + job.curve.name + ".csv"), curve_csv(job.curve), summary);
    json entry{{"name", job.curve.name}, {"engine", to_string(job.curve.engine)}, {"runs", job.runs},
               {"evals_per_record", job.curve.evals_per_record}};
    if (job.curve.delay) entry["delay"] = job.curve.delay->model.to_json();
    if (job.curve.eta) entry["step_eta"] = *job.curve.eta;
    listing.push_back(entry);
    curves.push_back(std::move(job.curve));
  }
  summary.manifest["curves"] = listing;
  emit_bounds(op, x0, cfg, curves, overrides, summary);
}

void run_sequence(const ExperimentConfig& cfg, RunSummary& summary) {
  const auto rate = theory::sequence_rate(cfg.p, cfg.q, cfg.tau_bar);
  const auto check = theory::verify_sequence_bound(cfg.p, cfg.q, cfg.tau_bar, cfg.horizon);
  std::string csv = "k,V,rho1_bound,rho2_bound\n";
  for (std::size_t k = 0; k < check.trajectory.size(); ++k) {
    const double kk = static_cast<double>(k);
    csv += std::to_string(k) + "," + num(check.trajectory[k]) + "," + num(std::pow(rate.rho1, kk)) + "," +
           num(std::pow(rate.rho2_prior, kk)) + "\n";
  }
  write_file(cfg.out_dir / "sequence.csv", csv, summary);
  const json j{{"p", cfg.p},
               {"q", cfg.q},
               {"tau_bar", cfg.tau_bar},
               {"horizon", cfg.horizon},
               {"rho1", rate.rho1},
               {"rho2_prior", rate.rho2_prior},
               {"complexity_ratio", rate.complexity_ratio},
               {"holds", check.holds},
               {"holds_prior", check.holds_prior},
               {"max_ratio_rho1", check.max_ratio_rho1},
               {"max_ratio_rho2", check.max_ratio_rho2}};
  write_file(cfg.out_dir / "sequence.json", j.dump(2) + "\n", summary);
  summary.manifest["sequence"] = j;
}

double last_wall_seconds(const Trajectory& t) {
  return t.records.empty() ? 0.0 : static_cast<double>(t.records.back().wallclock_ns) * 1e-9;
}

void run_straggler(const ExperimentConfig& cfg, RunSummary& summary, std::ostream& log) {
  const auto built = build_problem(cfg);
  const BlockVector x0(built.op.partition_ptr());
  const auto m = static_cast<std::int64_t>(built.op.partition().blocks());
  const std::int64_t sweeps = cfg.sweeps > 0 ? cfg.sweeps : std::max<std::int64_t>(1, cfg.budget / m);

  AsyncOptions async;
  async.workers = cfg.workers;
  async.budget = cfg.budget;
  async.seed = cfg.seed;
  SyncParallelOptions sync;
  sync.workers = cfg.workers;
  sync.sweeps = sweeps;

  const auto async_base = run_async(built.op, x0, async);
  const auto sync_base = run_sync_parallel(built.op, x0, sync);
  async.straggler = {cfg.straggler_worker, cfg.straggler_multiple};
  sync.straggler = async.straggler;
  const auto async_slow = run_async(built.op, x0, async);
  const auto sync_slow = run_sync_parallel(built.op, x0, sync);

  const double async_ratio = async_slow.wall_seconds / async_base.wall_seconds;
  const double sync_ratio = last_wall_seconds(sync_slow) / last_wall_seconds(sync_base);
  log << "  async inflation " << async_ratio << ", sync-parallel inflation " << sync_ratio << "\n";

  std::ostringstream trace;
  write_trace_csv(trace, async_slow.trace);
  write_file(cfg.out_dir / "trace.csv", trace.str(), summary);

  // Delays of the straggler versus everyone else.
  std::vector<std::int64_t> mine, others;
  for (const auto& r : async_slow.trace.records) (r.worker == *cfg.straggler_worker ? mine : others).push_back(r.tau);
  auto median = [](std::vector<std::int64_t> v) -> json {
    if (v.empty()) return nullptr;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  const json j{
      {"workers", cfg.workers},
      {"budget", cfg.budget},
      {"sweeps", sweeps},
      {"straggler_worker", *cfg.straggler_worker},
      {"straggler_multiple", cfg.straggler_multiple},
      {"async", {{"baseline_seconds", async_base.wall_seconds},
                 {"straggler_seconds", async_slow.wall_seconds},
                 {"inflation", async_ratio}}},
      {"sync_parallel", {{"baseline_seconds", last_wall_seconds(sync_base)},
                         {"straggler_seconds", last_wall_seconds(sync_slow)},
                         {"inflation", sync_ratio}}},
      {"delays", to_json(delay_histogram(async_slow.trace))},
      {"median_delay_straggler", median(mine)},
      {"median_delay_others", median(others)},
      {"evaluations_per_worker", async_slow.evaluations_per_worker}};
  write_file(cfg.out_dir / "straggler.json", j.dump(2) + "\n", summary);
  summary.manifest["straggler"] = j;
}

}  // namespace

PartitionPtr balanced_partition(std::size_t dim, std::size_t blocks) {
  if (blocks == 0 || blocks > dim) throw InvalidArgument("need 1 <= blocks <= dim");
  std::vector<int> sizes(blocks, static_cast<int>(dim / blocks));
  for (std::size_t i = 0; i < dim % blocks; ++i) ++sizes[i];
  return make_partition(sizes);
}

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  const auto data = load_data(cfg);
  if (static_cast<std::size_t>(cfg.blocks) > data.dim()) {
    throw ConfigError("blocks: " + std::to_string(cfg.blocks) + " exceeds the feature dimension " +
                      std::to_string(data.dim()));
  }
  const auto partition = balanced_partition(data.dim(), static_cast<std::size_t>(cfg.blocks));
  auto problem = cfg.kind == ExperimentKind::kLogistic ? build_logistic(data, cfg.lambda1, cfg.lambda2, partition)
                                                       : build_lasso(data, cfg.lambda1, partition);
  auto op = bcd_operator(problem, cfg.step_scale / problem.smooth->lipschitz());
  // Reference solution for dist_sq: synchronous sweeps until the residual stalls.
  BlockVector x(partition);
  double res = residual_norm(op, x);
  for (int sweep = 0; sweep < 200000 && res > 1e-12; ++sweep) {
    x = op.eval_full(x);
    if (sweep % 50 == 49) res = residual_norm(op, x);
  }
  res = residual_norm(op, x);
  op.with_fixed_point(x);
  return {std::move(problem), std::move(op), res};
}

std::string rates_table_text(const ExperimentConfig& cfg) {
  const double rho_c = theory::rho_centralized(cfg.c, cfg.blocks);
  std::ostringstream out;
  out << "c = " << cfg.c << ", m = " << cfg.blocks << ", rho_c = 1 - (1 - c^2)/m = " << num(rho_c) << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-14s | %-26s | %s\n", "delay bound", "rate (DEGAS)", "detail");
  out << line << std::string(72, '-') << "\n";
  for (const auto& row : cfg.rows) {
    std::string rate, detail;
    if (row.tau_bar) {
      const double rho_a = theory::rho_async(cfg.c, cfg.blocks, *row.tau_bar);
      rate = "linear, rho_a = " + short_num(rho_a);
      const auto arock = theory::arock_rate(cfg.c, cfg.blocks, *row.tau_bar);
      detail = "K ratio " + short_num(theory::complexity_ratio(*row.tau_bar, cfg.blocks)) + ", ARock rho " +
               short_num(arock.rho) + " (x" + short_num(arock.iter_ratio_vs_degas) + " iterations)";
    } else if (*row.growth_beta < 1.0) {
      rate = "O(rho_c^(k^" + short_num(1.0 - *row.growth_beta) + "))";
      detail = "tau(k) <= eta k^" + short_num(*row.growth_beta) + " + g";
    } else {
      rate = "O(1/k)";
      detail = "tau(k) <= eta k + g";
    }
    std::snprintf(line, sizeof line, "%-14s | %-26s | %s\n", row.label.c_str(), rate.c_str(), detail.c_str());
    out << line;
  }
  return out.str();
}

nlohmann::json rates_table_json(const ExperimentConfig& cfg) {
  json rows = json::array();
  for (const auto& row : cfg.rows) {
    json r{{"label", row.label}};
    if (row.tau_bar) {
      r["kind"] = "linear";
      r["report"] = theory::to_json(theory::make_rate_report(cfg.c, cfg.blocks, *row.tau_bar));
    } else {
      r["growth_beta"] = *row.growth_beta;
      r["kind"] = *row.growth_beta < 1.0 ? "stretched-exponential" : "inverse-k";
      if (*row.growth_beta < 1.0) {
        r["base"] = theory::rho_centralized(cfg.c, cfg.blocks);
        r["exponent"] = 1.0 - *row.growth_beta;
      }
    }
    rows.push_back(r);
  }
  return json{{"c", cfg.c}, {"m", cfg.blocks}, {"rows", rows}};
}

RunSummary run_experiment(ExperimentConfig cfg, const RunOverrides& overrides, std::ostream& log) {
  apply_overrides(cfg, overrides);
  fs::create_directories(cfg.out_dir);
  RunSummary summary;
  summary.manifest = {{"experiment", to_string(cfg.kind)}, {"seed", cfg.seed}, {"runs", cfg.runs},
                      {"iterations", cfg.iterations}};
  log << to_string(cfg.kind) << " -> " << cfg.out_dir.string() << "\n";
  switch (cfg.kind) {
    case ExperimentKind::kDemonstration: {
      auto partition = make_uniform_partition(static_cast<std::size_t>(cfg.blocks));
      const auto op = scaled_identity(partition, cfg.c);
      const BlockVector x0(partition, Eigen::VectorXd::Ones(cfg.blocks));
      summary.manifest["operator"] = {{"kind", "scaled-identity"}, {"c", cfg.c}, {"m", cfg.blocks}, {"x0", "ones"}};
      run_curve_experiment(op, x0, cfg, overrides, summary, log);
      break;
    }
    case ExperimentKind::kLasso:
    case ExperimentKind::kLogistic: {
      const auto built = build_problem(cfg);
      const BlockVector x0(built.op.partition_ptr());
      summary.manifest["operator"] = {{"kind", "bcd"},
                                      {"lipschitz", built.problem.smooth->lipschitz()},
                                      {"gamma", cfg.step_scale / built.problem.smooth->lipschitz()},
                                      {"fixed_point_residual", built.fixed_point_residual},
                                      {"x0", "zeros"}};
      if (built.fixed_point_residual > 1e-8) {
        log << "  warning: reference fixed point residual " << built.fixed_point_residual << "\n";
      }
      run_curve_experiment(built.op, x0, cfg, overrides, summary, log);
      break;
    }
    case ExperimentKind::kRatesTable:
      write_file(cfg.out_dir / "rates_table.txt", rates_table_text(cfg), summary);
      write_file(cfg.out_dir / "rates_table.json", rates_table_json(cfg).dump(2) + "\n", summary);
      break;
    case ExperimentKind::kSequenceTightness:
      run_sequence(cfg, summary);
      break;
    case ExperimentKind::kStraggler:
      run_straggler(cfg, summary, log);
      break;
  }
  summary.manifest["files"] = summary.files;
  if (overrides.check_bounds) summary.manifest["bound_violations"] = summary.bound_violations;
  std::ofstream(cfg.out_dir / "manifest.json") << summary.manifest.dump(2) << "\n";
  return summary;
}

double estimate_wall_seconds(const ExperimentConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  auto time_probe = [](const Operator& op, const BlockVector& x0, const std::vector<CurveJob>& jobs) {
    double total = 0.0;
    for (const auto& job : jobs) {
      const auto start = Clock::now();
      run_engine(op, job.rc, x0);
      total += std::chrono::duration<double>(Clock::now() - start).count() * static_cast<double>(job.runs);
    }
    return total;
  };
  switch (cfg.kind) {
    case ExperimentKind::kDemonstration: {
      auto partition = make_uniform_partition(static_cast<std::size_t>(cfg.blocks));
      const auto op = scaled_identity(partition, cfg.c);
      const BlockVector x0(partition, Eigen::VectorXd::Ones(cfg.blocks));
      return time_probe(op, x0, plan_curves(op, cfg)) / static_cast<double>(cfg.threads);
    }
    case ExperimentKind::kLasso:
    case ExperimentKind::kLogistic: {
      const auto start = Clock::now();
      const auto built = build_problem(cfg);
      const double setup = std::chrono::duration<double>(Clock::now() - start).count();
      const BlockVector x0(built.op.partition_ptr());
      return setup + time_probe(built.op, x0, plan_curves(built.op, cfg)) / static_cast<double>(cfg.threads);
    }
    case ExperimentKind::kStraggler: {
      const auto built = build_problem(cfg);
      RunConfig rc;
      rc.engine = EngineKind::kCentralizedCd;
      rc.iterations = cfg.budget;
      const auto start = Clock::now();
      run_engine(built.op, rc, BlockVector(built.op.partition_ptr()));
      const double one = std::chrono::duration<double>(Clock::now() - start).count();
      // Two baseline and two straggler runs; the straggler slows its share by the multiple.
      return one * (2.0 + 2.0 * (1.0 + cfg.straggler_multiple));
    }
    case ExperimentKind::kRatesTable:
    case ExperimentKind::kSequenceTightness:
      return 0.0;
  }
  return 0.0;
}

RunSummary run_async_command(const ExperimentConfig& cfg, const AsyncRunRequest& request, std::ostream& log) {
  fs::create_directories(request.out_dir);
  RunSummary summary;
  const auto built = build_problem(cfg);
  AsyncOptions options;
  options.workers = request.workers;
  options.budget = request.budget;
  options.straggler = request.straggler;
  options.seed = request.seed;
  const auto result = run_async(built.op, BlockVector(built.op.partition_ptr()), options);
  std::ostringstream traj;
  write_trajectory_csv(traj, result.trajectory);
  write_file(request.out_dir / "async_trajectory.csv", traj.str(), summary);

  std::ostringstream trace;
  write_trace_csv(trace, result.trace);
  const fs::path trace_path = request.trace_out.value_or(request.out_dir / "trace.csv");
  {
    std::ofstream out(trace_path);
    if (!out) throw std::runtime_error("cannot write " + trace_path.string());
    out << trace.str();
  }
  summary.files.push_back(trace_path.string());

  json hist = result.trace.records.empty() ? json(nullptr) : to_json(delay_histogram(result.trace));
  summary.manifest = {{"workers", request.workers},
                      {"budget", request.budget},
                      {"wall_seconds", result.wall_seconds},
                      {"evaluations_per_worker", result.evaluations_per_worker},
                      {"histogram", hist}};
  if (!result.trajectory.records.empty()) {
    const auto& first = result.trajectory.records.front();
    const auto& last = result.trajectory.records.back();
    if (first.residual && last.residual) {
      summary.manifest["initial_residual"] = *first.residual;
      summary.manifest["final_residual"] = *last.residual;
    }
  }
  write_file(request.out_dir / "delay_histogram.json", summary.manifest.dump(2) + "\n", summary);
  log << "async-run: " << request.budget << " updates on " << request.workers << " workers in "
      << result.wall_seconds << " s\n";
  return summary;
}

}  // namespace degas::tools
