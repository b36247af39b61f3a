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

#include <time.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <thread>

#include "channel.hpp"
#include "degas/errors.hpp"
#include "degas/rng.hpp"

namespace degas {

std::vector<std::int64_t> DelayTrace::delays() const {
  std::vector<std::int64_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.tau);
  return out;
}

std::vector<std::size_t> DelayTrace::blocks() const {
  std::vector<std::size_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.block);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;
using Snapshot = std::shared_ptr<const BlockVector>;

std::int64_t elapsed_ns(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

/// CPU time of the calling thread. Wall time would also count time spent
/// waiting for a core, which inflates the straggler's sleep on small machines.
std::int64_t thread_cpu_ns() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<std::int64_t>(ts.tv_sec) * 1'000'000'000 + ts.tv_nsec;
}

void straggle(const StragglerConfig& s, std::size_t worker, std::int64_t cpu_ns) {
  if (s.worker && *s.worker == worker && s.multiple > 0.0) {
    std::this_thread::sleep_for(std::chrono::nanoseconds(static_cast<std::int64_t>(s.multiple * static_cast<double>(cpu_ns))));
  }
}

/// Owns worker threads; the destructor sends stop and joins, so the master can
/// leave by any path.
template <class Task>
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t n) : mailboxes_(n) {}
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() { shutdown(); }

  template <class Body>
  void start(Body body) {
    for (std::size_t w = 0; w < mailboxes_.size(); ++w) threads_.emplace_back([this, w, body] { body(w, mailboxes_[w]); });
  }

  void send(std::size_t w, Task task) { mailboxes_[w].push(std::move(task)); }

  void shutdown() {
    for (std::size_t w = 0; w < threads_.size(); ++w) mailboxes_[w].push(Task{});
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
    threads_.clear();
  }

 private:
  std::vector<detail::Channel<Task>> mailboxes_;
  std::vector<std::thread> threads_;
};

struct SnapshotMessage {
  Snapshot x;  // null means stop
  std::int64_t stamp = 0;
};

struct ResultMessage {
  std::size_t worker = 0;
  std::size_t block = 0;
  Eigen::VectorXd value;
  Eigen::VectorXd read_block;
  std::int64_t stamp = 0;
  std::exception_ptr error;
};

std::string describe_error(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown exception";
  }
}

}  // namespace

AsyncResult run_async(const Operator& op, const BlockVector& x0, const AsyncOptions& options) {
  if (!x0.conforms_to(op.partition())) throw InvalidArgument("x0 does not conform to the operator's partition");
  if (options.workers == 0) throw InvalidArgument("need at least one worker");
  if (options.budget < 0) throw InvalidArgument("budget must be >= 0");
  if (options.residual_every < 0) throw InvalidArgument("residual_every must be >= 0");
  if (options.straggler.worker && *options.straggler.worker >= options.workers) {
    throw InvalidArgument("straggler index out of range");
  }
  if (options.rule == MasterRule::kArock && !(options.arock_step && *options.arock_step > 0.0 && *options.arock_step <= 1.0)) {
    throw InvalidArgument("ARock rule needs arock_step in (0, 1]");
  }

  const std::size_t m = op.partition().blocks();
  const std::size_t n = options.workers;
  const std::int64_t K = options.budget;
  const auto& hint = op.fixed_point_hint();

  AsyncResult result{{{}, x0, {}, {}}, {}, 0.0, std::vector<std::int64_t>(n, 0)};
  Trajectory& t = result.trajectory;
  t.meta.engine = options.rule == MasterRule::kDegas ? "degas-async" : "arock-async";
  t.meta.seed = options.seed;
  t.meta.step_eta = options.rule == MasterRule::kArock ? options.arock_step : std::nullopt;
  t.meta.delay_model = "measured";
  t.meta.workers = n;
  t.records.reserve(static_cast<std::size_t>(K) + 1);
  result.trace.records.reserve(static_cast<std::size_t>(K));

  std::vector<std::int64_t> eval_counts(n, 0);
  detail::Channel<ResultMessage> inbox;
  WorkerPool<SnapshotMessage> pool(n);

  const auto start = Clock::now();
  pool.start([&](std::size_t w, detail::Channel<SnapshotMessage>& mailbox) {
    const CounterRng blocks(options.seed, streams::kWorkerBlocks + w);
    std::uint64_t draws = 0;
    for (;;) {
      SnapshotMessage msg = mailbox.pop();
      if (!msg.x) return;
      ResultMessage out;
      out.worker = w;
      out.stamp = msg.stamp;
      out.block = static_cast<std::size_t>(blocks.below(draws++, m));
      try {
        const std::int64_t cpu0 = thread_cpu_ns();
        out.value = op.eval_block(*msg.x, out.block);
        out.read_block = msg.x->block(out.block);
        straggle(options.straggler, w, thread_cpu_ns() - cpu0);
      } catch (...) {
        out.error = std::current_exception();
      }
      ++eval_counts[w];
      inbox.push(std::move(out));
    }
  });

  BlockVector x = x0;
  auto record = [&](std::int64_t k, std::int64_t tau, std::int64_t block) {
    TrajectoryRecord r;
    r.k = k;
    r.delay = tau;
    r.block = block;
    if (hint) r.dist_sq = (x.values() - hint->values()).squaredNorm();
    r.wallclock_ns = elapsed_ns(start);
    t.records.push_back(r);
    if (options.keep_iterates) t.iterates.push_back(x.values());
  };
  record(0, 0, -1);

  std::vector<std::int64_t> sent_stamp(n, 0);
  {
    auto snap = std::make_shared<const BlockVector>(x);
    for (std::size_t w = 0; w < n; ++w) pool.send(w, {snap, 0});
  }

  for (std::int64_t k = 0; k < K; ++k) {
    ResultMessage msg = inbox.pop();
    if (msg.error) {
      pool.shutdown();
      throw WorkerFailure(msg.worker, describe_error(msg.error));
    }
    if (msg.stamp != sent_stamp[msg.worker] || msg.stamp > k) {
      throw InternalInvariant("worker " + std::to_string(msg.worker) + " answered a snapshot it was not sent");
    }
    const std::int64_t tau = k - msg.stamp;
    if (options.rule == MasterRule::kDegas) {
      x.block(msg.block) = msg.value;
    } else {
      x.block(msg.block) += *options.arock_step * (msg.value - msg.read_block);
    }
    result.trace.records.push_back({k, msg.worker, tau, msg.block});
    record(k + 1, tau, static_cast<std::int64_t>(msg.block));
    sent_stamp[msg.worker] = k + 1;
    pool.send(msg.worker, {std::make_shared<const BlockVector>(x), k + 1});
  }
  pool.shutdown();
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  result.evaluations_per_worker = eval_counts;

  // Residuals need full sweeps; computing them after the run keeps the
  // master's update loop free of that cost.
  const std::int64_t stride = options.residual_every > 0 ? options.residual_every : static_cast<std::int64_t>(m);
  auto residual_at = [&](std::int64_t k) {
    auto& r = t.records[static_cast<std::size_t>(k)];
    r.residual = residual_norm(op, BlockVector(x0.partition_ptr(), t.iterates[static_cast<std::size_t>(k)]));
  };
  if (options.keep_iterates) {
    for (std::int64_t k = 0; k <= K; k += stride) residual_at(k);
    residual_at(K);
  } else {
    t.records.front().residual = residual_norm(op, x0);
    t.records.back().residual = residual_norm(op, x);
  }
  t.final_iterate = std::move(x);
  return result;
}

namespace {

struct SweepTask {
  Snapshot x;  // null means stop
};

struct SweepResult {
  std::size_t worker = 0;
  std::vector<std::pair<std::size_t, Eigen::VectorXd>> blocks;
  std::exception_ptr error;
};

}  // namespace

Trajectory run_sync_parallel(const Operator& op, const BlockVector& x0, const SyncParallelOptions& options) {
  if (!x0.conforms_to(op.partition())) throw InvalidArgument("x0 does not conform to the operator's partition");
  if (options.workers == 0) throw InvalidArgument("need at least one worker");
  if (options.sweeps < 0) throw InvalidArgument("sweeps must be >= 0");
  if (options.straggler.worker && *options.straggler.worker >= options.workers) {
    throw InvalidArgument("straggler index out of range");
  }
  const std::size_t m = op.partition().blocks();
  const std::size_t n = options.workers;
  const auto& hint = op.fixed_point_hint();

  Trajectory t{{}, x0, {}, {}};
  t.meta.engine = "sync-parallel";
  t.meta.delay_model = "zero";
  t.meta.evals_per_record = static_cast<std::int64_t>(m);
  t.meta.workers = n;

  detail::Channel<SweepResult> inbox;
  WorkerPool<SweepTask> pool(n);
  const auto start = Clock::now();
  pool.start([&](std::size_t w, detail::Channel<SweepTask>& mailbox) {
    for (;;) {
      SweepTask task = mailbox.pop();
      if (!task.x) return;
      SweepResult out;
      out.worker = w;
      try {
        const std::int64_t cpu0 = thread_cpu_ns();
        for (std::size_t i = w; i < m; i += n) out.blocks.emplace_back(i, op.eval_block(*task.x, i));
        straggle(options.straggler, w, thread_cpu_ns() - cpu0);
      } catch (...) {
        out.error = std::current_exception();
      }
      inbox.push(std::move(out));
    }
  });

  BlockVector x = x0;
  auto record = [&](std::int64_t k) {
    TrajectoryRecord r;
    r.k = k;
    if (hint) r.dist_sq = (x.values() - hint->values()).squaredNorm();
    r.wallclock_ns = elapsed_ns(start);
    t.records.push_back(r);
  };
  record(0);
  for (std::int64_t k = 0; k < options.sweeps; ++k) {
    auto snap = std::make_shared<const BlockVector>(x);
    for (std::size_t w = 0; w < n; ++w) pool.send(w, {snap});
    BlockVector next = x;
    std::exception_ptr failure;
    std::size_t failed_worker = 0;
    for (std::size_t w = 0; w < n; ++w) {
      SweepResult r = inbox.pop();
      if (r.error && !failure) {
        failure = r.error;
        failed_worker = r.worker;
      }
      for (auto& [i, v] : r.blocks) next.block(i) = v;
    }
    if (failure) {
      pool.shutdown();
      throw WorkerFailure(failed_worker, describe_error(failure));
    }
    // Residual of the previous iterate is free: T(x(k)) = x(k+1).
    t.records.back().residual = (next.values() - x.values()).norm();
    x = std::move(next);
    record(k + 1);
  }
  pool.shutdown();
  t.records.back().residual = residual_norm(op, x);
  t.final_iterate = std::move(x);
  return t;
}

DelaySummary delay_histogram(const DelayTrace& trace) {
  if (trace.records.empty()) throw EmptyTrace("delay trace has no records");
  DelaySummary s;
  std::vector<std::int64_t> taus = trace.delays();
  double sum = 0.0;
  for (auto tau : taus) {
    ++s.counts[tau];
    sum += static_cast<double>(tau);
    s.max = std::max(s.max, tau);
  }
  s.total = static_cast<std::int64_t>(taus.size());
  s.mean = sum / static_cast<double>(s.total);
  std::sort(taus.begin(), taus.end());
  // Nearest-rank percentiles.
  auto pct = [&](double q) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(taus.size())));
    return static_cast<double>(taus[std::clamp<std::size_t>(rank, 1, taus.size()) - 1]);
  };
  s.p50 = pct(0.50);
  s.p90 = pct(0.90);
  s.p99 = pct(0.99);

  double mb = 0.0;
  for (const auto& r : trace.records) mb += static_cast<double>(r.block);
  mb /= static_cast<double>(s.total);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& r : trace.records) {
    const double dx = static_cast<double>(r.tau) - s.mean;
    const double dy = static_cast<double>(r.block) - mb;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  s.delay_block_correlation = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : std::nan("");
  return s;
}

void write_trace_csv(std::ostream& out, const DelayTrace& trace) {
  out << "k,worker,tau\n";
  for (const auto& r : trace.records) out << r.k << ',' << r.worker << ',' << r.tau << '\n';
}

nlohmann::json to_json(const DelaySummary& s) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [tau, c] : s.counts) counts[std::to_string(tau)] = c;
  nlohmann::json j{{"counts", counts}, {"total", s.total}, {"max", s.max}, {"mean", s.mean},
                   {"p50", s.p50},     {"p90", s.p90},     {"p99", s.p99}};
  j["delay_block_correlation"] = std::isnan(s.delay_block_correlation) ? nlohmann::json(nullptr)
                                                                        : nlohmann::json(s.delay_block_correlation);
  return j;
}

}  // namespace degas
