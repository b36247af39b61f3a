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
#include <vector>

#include "degas/engines.hpp"

namespace degas {

/// Pointwise mean and standard error of dist_sq across runs.
struct CurveStats {
  std::vector<std::int64_t> k;
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t runs = 0;
};

/// Runs cfg with seeds seed0, seed0 + 1, ...; run r reseeds both the block
/// sampler and the delay model with seed0 + r, so two engines given the same
/// seed0 see the same block and delay realizations. Results are returned in
/// run order whatever the thread count.
std::vector<Trajectory> run_monte_carlo(const Operator& op, const RunConfig& cfg, const BlockVector& x0,
                                        std::size_t runs, std::uint64_t seed0, std::size_t threads = 1);

/// Throws InvalidArgument if the trajectories disagree in length or lack dist_sq.
CurveStats aggregate_dist_sq(const std::vector<Trajectory>& runs);

}  // namespace degas
