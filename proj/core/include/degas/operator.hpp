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
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "degas/block_vector.hpp"

namespace degas {

/// Optional metadata about an operator. Nothing here is enforced when an
/// operator is built; the test suite checks certificates by sampling.
struct Certificate {
  /// T = (1 - alpha) Id + alpha R for a nonexpansive R, alpha in (0, 1).
  std::optional<double> alpha;
  /// ||T(x) - x*|| <= c ||x - x*|| for every fixed point x*, c in (0, 1).
  std::optional<double> modulus;
};

/// A block-separable operator T = (T_1, ..., T_m) on R^d.
///
/// Evaluation must be re-entrant: several workers call eval_block
/// concurrently on different snapshots, so the callables may not keep
/// mutable state.
class Operator {
 public:
  using BlockFn = std::function<Eigen::VectorXd(const BlockVector& x, std::size_t block)>;
  using FullFn = std::function<Eigen::VectorXd(const BlockVector& x)>;

  Operator(PartitionPtr partition, BlockFn block_fn, std::string name = "operator");

  /// Install a fused full evaluation; it must agree block-wise with eval_block.
  Operator& with_full(FullFn full_fn);
  Operator& with_certificate(Certificate certificate);
  Operator& with_fixed_point(BlockVector fixed_point);

  /// T_i(x); throws InvalidArgument if x does not conform or i is out of range.
  Eigen::VectorXd eval_block(const BlockVector& x, std::size_t block) const;
  /// T(x); m calls to eval_block unless a fused evaluation was installed.
  BlockVector eval_full(const BlockVector& x) const;

  const BlockPartition& partition() const { return *partition_; }
  const PartitionPtr& partition_ptr() const { return partition_; }
  const Certificate& certificate() const { return certificate_; }
  const std::optional<BlockVector>& fixed_point_hint() const { return fixed_point_; }
  const std::string& name() const { return name_; }
  bool has_fused_full() const { return static_cast<bool>(full_fn_); }

 private:
  void check_conforming(const BlockVector& x) const;

  PartitionPtr partition_;
  BlockFn block_fn_;
  FullFn full_fn_;
  Certificate certificate_;
  std::optional<BlockVector> fixed_point_;
  std::string name_;
};

/// ||x - T(x)||.
double residual_norm(const Operator& op, const BlockVector& x);

/// x -> x + lambda (T(x) - x). Fixed points are unchanged. An alpha-averaged
/// certificate becomes (lambda * alpha)-averaged while that stays below 1;
/// the pseudo-contraction modulus is dropped.
Operator relax(const Operator& op, double lambda);

/// T = scale * Id, the fixed point being 0. For |scale| < 1 it carries
/// alpha = (1 - scale) / 2 and modulus |scale|.
Operator scaled_identity(PartitionPtr partition, double scale);

}  // namespace degas
