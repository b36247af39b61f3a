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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "degas/block_vector.hpp"
#include "degas/operator.hpp"
#include "degas/trajectory.hpp"

namespace degas {

/// One worker is slowed down by sleeping `multiple` times its own measured
/// compute time after every evaluation.
struct StragglerConfig {
  std::optional<std::size_t> worker;
  double multiple = 2.0;
};

/// How the master installs a returned block value.
enum class MasterRule {
  kDegas,  ///< x_i <- T_i(x^w)
  kArock,  ///< x_i <- x_i + eta (T_i(x^w) - x^w_i)
};

struct AsyncOptions {
  std::size_t workers = 1;
  /// Number of master updates K.
  std::int64_t budget = 0;
  StragglerConfig straggler;
  std::uint64_t seed = 0;
  MasterRule rule = MasterRule::kDegas;
  std::optional<double> arock_step;
  /// Keep every iterate; residuals are then filled in after the run at this
  /// stride (0 means m) without slowing the master down.
  bool keep_iterates = false;
  std::int64_t residual_every = 0;
};

struct DelayRecord {
  std::int64_t k = 0;
  std::size_t worker = 0;
  std::int64_t tau = 0;
  std::size_t block = 0;
};

/// Delays measured by the master: tau = k - (stamp of the snapshot used).
struct DelayTrace {
  std::vector<DelayRecord> records;

  std::vector<std::int64_t> delays() const;
  std::vector<std::size_t> blocks() const;
};

struct AsyncResult {
  Trajectory trajectory;
  DelayTrace trace;
  double wall_seconds = 0.0;
  /// Evaluations completed by each worker, including discarded in-flight ones.
  std::vector<std::int64_t> evaluations_per_worker;
};

/// Master-worker DEGAS on in-process worker threads. The master owns x and
/// applies exactly options.budget updates in arrival order; after each update
/// it replies with a fresh snapshot to the worker whose result it applied.
/// Throws WorkerFailure if an evaluation throws inside a worker.
AsyncResult run_async(const Operator& op, const BlockVector& x0, const AsyncOptions& options);

struct SyncParallelOptions {
  std::size_t workers = 1;
  std::int64_t sweeps = 0;
  StragglerConfig straggler;
};

/// Each sweep splits the m blocks across the workers, waits for all of them
/// and installs the results together, i.e. x(k+1) = T(x(k)).
Trajectory run_sync_parallel(const Operator& op, const BlockVector& x0, const SyncParallelOptions& options);

struct DelaySummary {
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t total = 0;
  std::int64_t max = 0;
  double mean = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  /// Pearson correlation between measured delay and updated block index;
  /// NaN when either is constant.
  double delay_block_correlation = 0.0;
};

/// Throws EmptyTrace for a trace without records.
DelaySummary delay_histogram(const DelayTrace& trace);

/// CSV with header k,worker,tau.
void write_trace_csv(std::ostream& out, const DelayTrace& trace);
nlohmann::json to_json(const DelaySummary& summary);

}  // namespace degas
