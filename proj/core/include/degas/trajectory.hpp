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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "degas/block_vector.hpp"

namespace degas {

/// One row per iterate x(k). delay/block describe the update that produced
/// x(k) (block is -1 for the initial record and for full sweeps).
struct TrajectoryRecord {
  std::int64_t k = 0;
  std::optional<double> residual;
  std::optional<double> dist_sq;
  std::int64_t delay = 0;
  std::int64_t block = -1;
  std::int64_t wallclock_ns = 0;

  bool operator==(const TrajectoryRecord&) const = default;
};

struct TrajectoryMeta {
  std::string engine;
  std::uint64_t seed = 0;
  std::optional<double> step_eta;
  std::optional<double> relax_lambda;
  std::string delay_model;
  /// Number of T_i evaluations charged per record (m for a full sweep).
  std::int64_t evals_per_record = 1;
  std::size_t workers = 0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  BlockVector final_iterate;
  TrajectoryMeta meta;
  /// Every iterate x(0..K), only when requested.
  std::vector<Eigen::VectorXd> iterates;
};

/// CSV with header k,residual,dist_sq,delay,block,wallclock_ns. Missing
/// optional values are written as empty fields.
void write_trajectory_csv(std::ostream& out, const Trajectory& t, bool include_wallclock = true);
nlohmann::json trajectory_meta_json(const Trajectory& t);

}  // namespace degas
