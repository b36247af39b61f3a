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

#include "degas/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "degas/errors.hpp"

namespace degas {

std::vector<Trajectory> run_monte_carlo(const Operator& op, const RunConfig& cfg, const BlockVector& x0,
                                        std::size_t runs, std::uint64_t seed0, std::size_t threads) {
  if (runs == 0) throw InvalidArgument("Monte Carlo needs at least one run");
  std::vector<std::optional<Trajectory>> slots(runs);
  auto one = [&](std::size_t r) {
    RunConfig c = cfg;
    c.seed = seed0 + r;
    c.delays = cfg.delays.reseeded(c.seed);
    slots[r] = run_engine(op, c, x0);
  };
  threads = std::clamp<std::size_t>(threads, 1, runs);
  if (threads == 1) {
    for (std::size_t r = 0; r < runs; ++r) one(r);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t r = t; r < runs; r += threads) one(r);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<Trajectory> out;
  out.reserve(runs);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

CurveStats aggregate_dist_sq(const std::vector<Trajectory>& runs) {
  if (runs.empty()) throw InvalidArgument("nothing to aggregate");
  const std::size_t len = runs.front().records.size();
  CurveStats s;
  s.runs = runs.size();
  s.k.resize(len);
  s.mean.assign(len, 0.0);
  s.std_error.assign(len, 0.0);
  std::vector<double> m2(len, 0.0);
  // Welford, accumulated in run order so the result does not depend on threading.
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& recs = runs[r].records;
    if (recs.size() != len) throw InvalidArgument("runs differ in length");
    for (std::size_t j = 0; j < len; ++j) {
      if (!recs[j].dist_sq) throw InvalidArgument("run without dist_sq (operator has no fixed-point hint)");
      s.k[j] = recs[j].k;
      const double v = *recs[j].dist_sq;
      const double delta = v - s.mean[j];
      s.mean[j] += delta / static_cast<double>(r + 1);
      m2[j] += delta * (v - s.mean[j]);
    }
  }
  if (runs.size() > 1) {
    const double n = static_cast<double>(runs.size());
    for (std::size_t j = 0; j < len; ++j) s.std_error[j] = std::sqrt(m2[j] / (n - 1.0) / n);
  }
  return s;
}

}  // namespace degas
