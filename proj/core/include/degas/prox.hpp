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

#include <functional>

#include <Eigen/Core>

#include "degas/block_vector.hpp"

namespace degas {

/// prox_{gamma g}(v) for a closed convex g on one block.
using ProxFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& v, double gamma)>;

/// sign(x) max(|x| - threshold, 0), componentwise.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double threshold);

/// prox of weight * ||.||_1.
ProxFn l1_prox(double weight);
/// prox of the zero function (identity).
ProxFn zero_prox();
/// prox of 0.5 * ||. - target||^2: (v + gamma target) / (1 + gamma).
ProxFn squared_distance_prox(Eigen::VectorXd target);

/// Replace every block by the mean of the blocks. Requires equal block sizes.
BlockVector project_consensus(const BlockVector& x);

/// Euclidean projection onto a closed convex set Z.
class Projector {
 public:
  enum class Kind { kIdentity, kConsensus, kAffine };

  static Projector identity();
  /// {z : z_1 = ... = z_m}; every block of `partition` must have the same size.
  static Projector consensus(const BlockPartition& partition);
  /// {z : A z = b}, A with full row rank.
  static Projector affine(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return fn_(x); }
  Kind kind() const { return kind_; }

 private:
  Projector(Kind kind, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn)
      : kind_(kind), fn_(std::move(fn)) {}

  Kind kind_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn_;
};

}  // namespace degas
