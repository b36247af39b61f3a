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
#include <optional>
#include <string>
#include <vector>

#include "degas/block_vector.hpp"
#include "degas/delay.hpp"
#include "degas/operator.hpp"
#include "degas/trajectory.hpp"

namespace degas {

enum class EngineKind { kDegas, kArock, kSync, kCentralizedCd };

EngineKind parse_engine_kind(const std::string& name);
std::string to_string(EngineKind kind);

struct RunConfig {
  EngineKind engine = EngineKind::kDegas;
  /// Iteration budget K (block updates, or full sweeps for kSync).
  std::int64_t iterations = 100;
  /// ARock step size, required in (0, 1] for kArock.
  std::optional<double> step_eta;
  /// Run on Id + lambda (T - Id) instead of T.
  std::optional<double> relax_lambda;
  DelayModel delays;
  /// Seeds the block sampler.
  std::uint64_t seed = 0;
  /// Stride, in block updates, between residual evaluations; 0 means m.
  std::int64_t residual_every = 0;
  /// Replay this block sequence instead of sampling blocks.
  std::optional<std::vector<std::size_t>> block_trace;
  bool keep_iterates = false;
};

/// Asynchronous coordinate update x_i(k+1) = T_i(x(k - tau(k))) for the
/// sampled block i = i(k); all other blocks are copied.
Trajectory run_degas_simulated(const Operator& op, const RunConfig& cfg, const BlockVector& x0);

/// x_i(k+1) = x_i(k) + eta (T_i(xhat) - xhat_i) with the consistent read
/// xhat = x(k - tau(k)).
Trajectory run_arock_simulated(const Operator& op, const RunConfig& cfg, const BlockVector& x0);

/// x(k+1) = T(x(k)); one record per sweep, charged m evaluations.
Trajectory run_synchronous(const Operator& op, const RunConfig& cfg, const BlockVector& x0);

/// DEGAS with every delay zero.
Trajectory run_centralized_cd(const Operator& op, const RunConfig& cfg, const BlockVector& x0);

/// Dispatch on cfg.engine.
Trajectory run_engine(const Operator& op, const RunConfig& cfg, const BlockVector& x0);

/// i(k) under the engine's uniform block sampler.
std::size_t sample_block(std::uint64_t seed, std::int64_t k, std::size_t blocks);

}  // namespace degas
