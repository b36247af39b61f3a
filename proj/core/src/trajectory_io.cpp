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

#include <cstdio>

#include "degas/trajectory.hpp"

namespace degas {

namespace {

void put_optional(std::ostream& out, const std::optional<double>& v) {
  if (!v) return;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  out << buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& t, bool include_wallclock) {
  out << "k,residual,dist_sq,delay,block" << (include_wallclock ? ",wallclock_ns" : "") << '\n';
  for (const auto& r : t.records) {
    out << r.k << ',';
    put_optional(out, r.residual);
    out << ',';
    put_optional(out, r.dist_sq);
    out << ',' << r.delay << ',' << r.block;
    if (include_wallclock) out << ',' << r.wallclock_ns;
    out << '\n';
  }
}

nlohmann::json trajectory_meta_json(const Trajectory& t) {
  nlohmann::json j{{"engine", t.meta.engine},
                   {"seed", t.meta.seed},
                   {"delay_model", t.meta.delay_model},
                   {"evals_per_record", t.meta.evals_per_record},
                   {"records", t.records.size()}};
  if (t.meta.step_eta) j["step_eta"] = *t.meta.step_eta;
  if (t.meta.relax_lambda) j["relax_lambda"] = *t.meta.relax_lambda;
  if (t.meta.workers > 0) j["workers"] = t.meta.workers;
  return j;
}

}  // namespace degas
