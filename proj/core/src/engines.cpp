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

#include "degas/engines.hpp"

#include <chrono>
#include <deque>

#include "degas/errors.hpp"
#include "degas/rng.hpp"

namespace degas {

EngineKind parse_engine_kind(const std::string& name) {
  if (name == "degas") return EngineKind::kDegas;
  if (name == "arock") return EngineKind::kArock;
  if (name == "sync") return EngineKind::kSync;
  if (name == "centralized-cd") return EngineKind::kCentralizedCd;
  throw InvalidArgument("unknown engine '" + name + "' (degas, arock, sync, centralized-cd)");
}

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::kDegas: return "degas";
    case EngineKind::kArock: return "arock";
    case EngineKind::kSync: return "sync";
    case EngineKind::kCentralizedCd: return "centralized-cd";
  }
  return "unknown";
}

std::size_t sample_block(std::uint64_t seed, std::int64_t k, std::size_t blocks) {
  return static_cast<std::size_t>(
      CounterRng(seed, streams::kBlocks).below(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(blocks)));
}

namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
 public:
  Recorder(const Operator& op, const RunConfig& cfg, std::int64_t stride)
      : op_(op), cfg_(cfg), stride_(stride), start_(Clock::now()) {}

  void record(Trajectory& t, const BlockVector& x, std::int64_t k, std::int64_t delay, std::int64_t block,
              std::int64_t last_k) const {
    TrajectoryRecord r;
    r.k = k;
    r.delay = delay;
    r.block = block;
    if (k % stride_ == 0 || k == last_k) r.residual = residual_norm(op_, x);
    if (const auto& hint = op_.fixed_point_hint()) r.dist_sq = (x.values() - hint->values()).squaredNorm();
    r.wallclock_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start_).count();
    t.records.push_back(r);
    if (cfg_.keep_iterates) t.iterates.push_back(x.values());
  }

 private:
  const Operator& op_;
  const RunConfig& cfg_;
  std::int64_t stride_;
  Clock::time_point start_;
};

void check_inputs(const Operator& op, const RunConfig& cfg, const BlockVector& x0) {
  if (!x0.conforms_to(op.partition())) throw InvalidArgument("x0 does not conform to the operator's partition");
  if (cfg.iterations < 0) throw InvalidArgument("iteration budget must be >= 0");
  if (cfg.residual_every < 0) throw InvalidArgument("residual_every must be >= 0");
  if (cfg.block_trace && static_cast<std::int64_t>(cfg.block_trace->size()) < cfg.iterations) {
    throw InvalidArgument("block trace is shorter than the iteration budget");
  }
}

Operator effective_operator(const Operator& op, const RunConfig& cfg) {
  return cfg.relax_lambda ? relax(op, *cfg.relax_lambda) : op;
}

TrajectoryMeta make_meta(EngineKind engine, const RunConfig& cfg, const DelayModel& delays) {
  TrajectoryMeta meta;
  meta.engine = to_string(engine);
  meta.seed = cfg.seed;
  meta.step_eta = cfg.step_eta;
  meta.relax_lambda = cfg.relax_lambda;
  meta.delay_model = delays.describe();
  return meta;
}

/// Shared coordinate loop. With step == nullopt the sampled block is replaced
/// by T_i(xhat); otherwise x_i <- x_i + step (T_i(xhat) - xhat_i).
Trajectory run_coordinate(const Operator& base, const RunConfig& cfg, const BlockVector& x0, EngineKind engine,
                          const DelayModel& delays, std::optional<double> step) {
  check_inputs(base, cfg, x0);
  const Operator op = effective_operator(base, cfg);
  const std::size_t m = op.partition().blocks();
  const std::int64_t stride = cfg.residual_every > 0 ? cfg.residual_every : static_cast<std::int64_t>(m);
  const std::int64_t K = cfg.iterations;

  Trajectory t{{}, x0, make_meta(engine, cfg, delays), {}};
  t.records.reserve(static_cast<std::size_t>(K) + 1);
  const Recorder rec(op, cfg, stride);

  // history[j] holds x(first + j); the oldest index k - bound(k) never decreases.
  std::deque<BlockVector> history{x0};
  std::int64_t first = 0;
  rec.record(t, x0, 0, 0, -1, K);

  for (std::int64_t k = 0; k < K; ++k) {
    const std::int64_t oldest = k - delays.bound(k);
    while (first < oldest) {
      history.pop_front();
      ++first;
    }
    const std::int64_t tau = delays.sample(k);
    if (tau < 0 || tau > k || k - tau < first) {
      throw InternalInvariant("delay model returned tau(" + std::to_string(k) + ") = " + std::to_string(tau) +
                              " outside [0, " + std::to_string(k - first) + "]");
    }
    const std::size_t i = cfg.block_trace ? (*cfg.block_trace)[static_cast<std::size_t>(k)] : sample_block(cfg.seed, k, m);
    if (i >= m) throw InvalidArgument("block trace entry " + std::to_string(i) + " out of range");

    const BlockVector& read = history[static_cast<std::size_t>(k - tau - first)];
    Eigen::VectorXd value = op.eval_block(read, i);
    BlockVector next = history.back();
    if (step) {
      next.block(i) += *step * (value - read.block(i));
    } else {
      next.block(i) = value;
    }
    rec.record(t, next, k + 1, tau, static_cast<std::int64_t>(i), K);
    history.push_back(std::move(next));
  }
  t.final_iterate = history.back();
  return t;
}

}  // namespace

Trajectory run_degas_simulated(const Operator& op, const RunConfig& cfg, const BlockVector& x0) {
  return run_coordinate(op, cfg, x0, EngineKind::kDegas, cfg.delays, std::nullopt);
}

Trajectory run_arock_simulated(const Operator& op, const RunConfig& cfg, const BlockVector& x0) {
  if (!cfg.step_eta) throw InvalidArgument("ARock needs step_eta");
  if (!(*cfg.step_eta > 0.0 && *cfg.step_eta <= 1.0)) throw InvalidArgument("ARock step_eta must lie in (0, 1]");
  return run_coordinate(op, cfg, x0, EngineKind::kArock, cfg.delays, cfg.step_eta);
}

Trajectory run_centralized_cd(const Operator& op, const RunConfig& cfg, const BlockVector& x0) {
  return run_coordinate(op, cfg, x0, EngineKind::kCentralizedCd, DelayModel::zero(), std::nullopt);
}

Trajectory run_synchronous(const Operator& base, const RunConfig& cfg, const BlockVector& x0) {
  check_inputs(base, cfg, x0);
  const Operator op = effective_operator(base, cfg);
  const std::int64_t K = cfg.iterations;
  const auto m = static_cast<std::int64_t>(op.partition().blocks());

  Trajectory t{{}, x0, make_meta(EngineKind::kSync, cfg, DelayModel::zero()), {}};
  t.meta.evals_per_record = m;
  t.records.reserve(static_cast<std::size_t>(K) + 1);
  const auto start = Clock::now();
  const auto& hint = op.fixed_point_hint();

  BlockVector x = x0;
  BlockVector tx = op.eval_full(x);
  for (std::int64_t k = 0;; ++k) {
    TrajectoryRecord r;
    r.k = k;
    // ||x - T(x)|| comes for free since T(x) is the next iterate.
    r.residual = (x.values() - tx.values()).norm();
    if (hint) r.dist_sq = (x.values() - hint->values()).squaredNorm();
    r.wallclock_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    t.records.push_back(r);
    if (cfg.keep_iterates) t.iterates.push_back(x.values());
    if (k == K) break;
    x = std::move(tx);
    tx = op.eval_full(x);
  }
  t.final_iterate = std::move(x);
  return t;
}

Trajectory run_engine(const Operator& op, const RunConfig& cfg, const BlockVector& x0) {
  switch (cfg.engine) {
    case EngineKind::kDegas: return run_degas_simulated(op, cfg, x0);
    case EngineKind::kArock: return run_arock_simulated(op, cfg, x0);
    case EngineKind::kSync: return run_synchronous(op, cfg, x0);
    case EngineKind::kCentralizedCd: return run_centralized_cd(op, cfg, x0);
  }
  throw InvalidArgument("unknown engine");
}

}  // namespace degas
