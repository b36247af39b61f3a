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

#include "degas/runtime.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "degas/dataset.hpp"
#include "degas/engines.hpp"
#include "degas/errors.hpp"
#include "degas/problems.hpp"
#include "degas/splitting.hpp"

namespace degas {
namespace {

Operator small_lasso() {
  const Dataset data = synth_problem(3, 120, 24, 0.25, 0.01);
  const auto prob = build_lasso(data, 1e-3, make_uniform_partition(8, 3));
  return bcd_operator(prob, 1.0 / prob.smooth->lipschitz());
}

TEST(AsyncRuntime, SingleWorkerHasNoDelayAndMatchesTheEngine) {
  const auto op = small_lasso();
  AsyncOptions opt;
  opt.workers = 1;
  opt.budget = 300;
  opt.seed = 4;
  const BlockVector x0(op.partition_ptr());
  const auto res = run_async(op, x0, opt);
  ASSERT_EQ(res.trace.records.size(), 300u);
  for (const auto& r : res.trace.records) EXPECT_EQ(r.tau, 0);

  // Worker 0 draws its blocks from the engine's block stream.
  RunConfig cfg;
  cfg.iterations = 300;
  cfg.seed = 4;
  const auto sim = run_degas_simulated(op, cfg, x0);
  EXPECT_EQ(sim.final_iterate.values(), res.trajectory.final_iterate.values());
}

TEST(AsyncRuntime, ReplayReproducesIterates) {
  const auto op = small_lasso();
  AsyncOptions opt;
  opt.workers = 4;
  opt.budget = 800;
  opt.seed = 11;
  opt.keep_iterates = true;
  const BlockVector x0(op.partition_ptr());
  const auto res = run_async(op, x0, opt);

  RunConfig cfg;
  cfg.iterations = opt.budget;
  cfg.delays = DelayModel::trace(res.trace.delays());
  cfg.block_trace = res.trace.blocks();
  cfg.keep_iterates = true;
  const auto sim = run_degas_simulated(op, cfg, x0);
  ASSERT_EQ(sim.iterates.size(), res.trajectory.iterates.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < sim.iterates.size(); ++k) {
    worst = std::max(worst, (sim.iterates[k] - res.trajectory.iterates[k]).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-12);
  for (std::size_t k = 0; k < res.trace.records.size(); ++k) {
    EXPECT_EQ(res.trace.records[k].k, static_cast<std::int64_t>(k));
    EXPECT_GE(res.trace.records[k].tau, 0);
    EXPECT_LE(res.trace.records[k].tau, res.trace.records[k].k);
  }
  std::int64_t evals = 0;
  for (auto e : res.evaluations_per_worker) evals += e;
  EXPECT_GE(evals, opt.budget);
}

TEST(AsyncRuntime, ResidualsFilledAfterTheRun) {
  const auto op = small_lasso();
  AsyncOptions opt;
  opt.workers = 2;
  opt.budget = 40;
  opt.keep_iterates = true;
  opt.residual_every = 8;
  const auto res = run_async(op, BlockVector(op.partition_ptr()), opt);
  for (const auto& r : res.trajectory.records) EXPECT_EQ(r.residual.has_value(), r.k % 8 == 0 || r.k == 40);
  opt.keep_iterates = false;
  const auto lean = run_async(op, BlockVector(op.partition_ptr()), opt);
  EXPECT_TRUE(lean.trajectory.records.front().residual);
  EXPECT_TRUE(lean.trajectory.records.back().residual);
  EXPECT_TRUE(lean.trajectory.iterates.empty());
}

TEST(AsyncRuntime, ArockRuleMatchesSimulatedArock) {
  const auto op = small_lasso();
  AsyncOptions opt;
  opt.workers = 3;
  opt.budget = 300;
  opt.rule = MasterRule::kArock;
  opt.arock_step = 0.4;
  opt.seed = 2;
  const BlockVector x0(op.partition_ptr());
  const auto res = run_async(op, x0, opt);
  RunConfig cfg;
  cfg.engine = EngineKind::kArock;
  cfg.step_eta = 0.4;
  cfg.iterations = opt.budget;
  cfg.delays = DelayModel::trace(res.trace.delays());
  cfg.block_trace = res.trace.blocks();
  const auto sim = run_arock_simulated(op, cfg, x0);
  EXPECT_LE((sim.final_iterate.values() - res.trajectory.final_iterate.values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AsyncRuntime, WorkerExceptionsSurface) {
  Operator bad(make_uniform_partition(4), [](const BlockVector& x, std::size_t i) -> Eigen::VectorXd {
    if (i == 2) throw std::runtime_error("boom");
    return x.block(i);
  });
  AsyncOptions opt;
  opt.workers = 3;
  opt.budget = 1000;
  try {
    run_async(bad, BlockVector(bad.partition_ptr()), opt);
    FAIL() << "expected WorkerFailure";
  } catch (const WorkerFailure& e) {
    EXPECT_LT(e.worker(), 3u);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(AsyncRuntime, OptionValidation) {
  const auto op = small_lasso();
  const BlockVector x0(op.partition_ptr());
  AsyncOptions opt;
  opt.workers = 0;
  EXPECT_THROW(run_async(op, x0, opt), InvalidArgument);
  opt.workers = 2;
  opt.straggler.worker = 2;
  EXPECT_THROW(run_async(op, x0, opt), InvalidArgument);
  opt.straggler.worker.reset();
  opt.rule = MasterRule::kArock;
  EXPECT_THROW(run_async(op, x0, opt), InvalidArgument);
}

TEST(AsyncRuntime, ZeroBudget) {
  const auto op = small_lasso();
  AsyncOptions opt;
  opt.workers = 2;
  const auto res = run_async(op, BlockVector(op.partition_ptr()), opt);
  EXPECT_EQ(res.trajectory.records.size(), 1u);
  EXPECT_TRUE(res.trace.records.empty());
  EXPECT_THROW(delay_histogram(res.trace), EmptyTrace);
}

TEST(SyncParallel, MatchesSynchronousEngine) {
  const auto op = small_lasso();
  const BlockVector x0(op.partition_ptr());
  SyncParallelOptions opt;
  opt.workers = 3;
  opt.sweeps = 20;
  const auto par = run_sync_parallel(op, x0, opt);
  RunConfig cfg;
  cfg.engine = EngineKind::kSync;
  cfg.iterations = 20;
  const auto seq = run_synchronous(op, cfg, x0);
  EXPECT_LE((par.final_iterate.values() - seq.final_iterate.values()).cwiseAbs().maxCoeff(), 1e-13);
  ASSERT_EQ(par.records.size(), 21u);
  for (std::size_t k = 0; k < par.records.size(); ++k) {
    EXPECT_NEAR(*par.records[k].residual, *seq.records[k].residual, 1e-12);
  }
  EXPECT_EQ(par.meta.evals_per_record, 8);
}

TEST(DelayHistogram, Statistics) {
  DelayTrace trace;
  const std::int64_t taus[] = {0, 1, 1, 2, 2, 2, 3, 3, 3, 10};
  for (std::int64_t k = 0; k < 10; ++k) {
    trace.records.push_back({k, static_cast<std::size_t>(k % 2), taus[k], static_cast<std::size_t>(k % 3)});
  }
  const auto s = delay_histogram(trace);
  EXPECT_EQ(s.total, 10);
  EXPECT_EQ(s.max, 10);
  EXPECT_DOUBLE_EQ(s.mean, 2.7);
  EXPECT_EQ(s.counts.at(2), 3);
  EXPECT_EQ(s.p50, 2.0);
  EXPECT_EQ(s.p90, 3.0);
  EXPECT_EQ(s.p99, 10.0);
  const auto j = to_json(s);
  EXPECT_EQ(j.at("counts").at("3"), 3);

  std::ostringstream csv;
  write_trace_csv(csv, trace);
  EXPECT_EQ(csv.str().substr(0, 19), "k,worker,tau\n0,0,0\n");
}

TEST(DelayHistogram, ConstantDelayHasUndefinedCorrelation) {
  DelayTrace trace;
  for (std::int64_t k = 0; k < 5; ++k) trace.records.push_back({k, 0, 1, static_cast<std::size_t>(k)});
  EXPECT_TRUE(std::isnan(delay_histogram(trace).delay_block_correlation));
  EXPECT_TRUE(to_json(delay_histogram(trace)).at("delay_block_correlation").is_null());
}

}  // namespace
}  // namespace degas
