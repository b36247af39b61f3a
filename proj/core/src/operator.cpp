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

#include "degas/operator.hpp"

#include <cmath>

#include "degas/errors.hpp"

namespace degas {

Operator::Operator(PartitionPtr partition, BlockFn block_fn, std::string name)
    : partition_(std::move(partition)), block_fn_(std::move(block_fn)), name_(std::move(name)) {
  if (!partition_) throw InvalidArgument("operator needs a partition");
  if (!block_fn_) throw InvalidArgument("operator needs a block evaluation");
}

Operator& Operator::with_full(FullFn full_fn) {
  full_fn_ = std::move(full_fn);
  return *this;
}

Operator& Operator::with_certificate(Certificate certificate) {
  certificate_ = certificate;
  return *this;
}

Operator& Operator::with_fixed_point(BlockVector fixed_point) {
  check_conforming(fixed_point);
  fixed_point_ = std::move(fixed_point);
  return *this;
}

void Operator::check_conforming(const BlockVector& x) const {
  if (!x.conforms_to(*partition_)) throw InvalidArgument("vector does not conform to the operator's partition");
}

Eigen::VectorXd Operator::eval_block(const BlockVector& x, std::size_t block) const {
  check_conforming(x);
  if (block >= partition_->blocks()) {
    throw InvalidArgument("block " + std::to_string(block) + " out of range [0, " +
                          std::to_string(partition_->blocks()) + ")");
  }
  Eigen::VectorXd out = block_fn_(x, block);
  if (static_cast<std::size_t>(out.size()) != partition_->size(block)) {
    throw InternalInvariant(name_ + ": block evaluation returned the wrong length");
  }
  return out;
}

BlockVector Operator::eval_full(const BlockVector& x) const {
  check_conforming(x);
  if (full_fn_) {
    Eigen::VectorXd out = full_fn_(x);
    if (static_cast<std::size_t>(out.size()) != partition_->dim()) {
      throw InternalInvariant(name_ + ": full evaluation returned the wrong length");
    }
    return BlockVector(partition_, std::move(out));
  }
  BlockVector out(partition_);
  for (std::size_t i = 0; i < partition_->blocks(); ++i) out.block(i) = block_fn_(x, i);
  return out;
}

double residual_norm(const Operator& op, const BlockVector& x) {
  return (x.values() - op.eval_full(x).values()).norm();
}

Operator relax(const Operator& op, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("relaxation lambda must be positive");
  auto block_fn = [op, lambda](const BlockVector& x, std::size_t i) -> Eigen::VectorXd {
    return x.block(i) + lambda * (op.eval_block(x, i) - x.block(i));
  };
  Operator out(op.partition_ptr(), block_fn, op.name() + "-relaxed");
  if (op.has_fused_full()) {
    out.with_full([op, lambda](const BlockVector& x) -> Eigen::VectorXd {
      return x.values() + lambda * (op.eval_full(x).values() - x.values());
    });
  }
  Certificate cert;
  if (op.certificate().alpha && lambda * *op.certificate().alpha < 1.0) cert.alpha = lambda * *op.certificate().alpha;
  out.with_certificate(cert);
  if (op.fixed_point_hint()) out.with_fixed_point(*op.fixed_point_hint());
  return out;
}

Operator scaled_identity(PartitionPtr partition, double scale) {
  auto block_fn = [scale](const BlockVector& x, std::size_t i) -> Eigen::VectorXd { return scale * x.block(i); };
  Operator op(partition, block_fn, "scaled-identity");
  op.with_full([scale](const BlockVector& x) -> Eigen::VectorXd { return scale * x.values(); });
  Certificate cert;
  if (std::abs(scale) < 1.0) {
    // scale = (1 - alpha) + alpha * (-1) with alpha = (1 - scale) / 2.
    cert.alpha = (1.0 - scale) / 2.0;
    cert.modulus = std::abs(scale);
  }
  op.with_certificate(cert);
  op.with_fixed_point(BlockVector(partition));
  return op;
}

}  // namespace degas
