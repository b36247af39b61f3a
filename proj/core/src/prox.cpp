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

#include "degas/prox.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "degas/errors.hpp"

namespace degas {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("soft-threshold level must be >= 0");
  return x.unaryExpr([threshold](double v) {
    const double mag = std::abs(v) - threshold;
    return mag > 0.0 ? std::copysign(mag, v) : 0.0;
  });
}

ProxFn l1_prox(double weight) {
  if (!(weight >= 0.0)) throw InvalidArgument("l1 weight must be >= 0");
  return [weight](const Eigen::VectorXd& v, double gamma) { return soft_threshold(v, gamma * weight); };
}

ProxFn zero_prox() {
  return [](const Eigen::VectorXd& v, double) { return v; };
}

ProxFn squared_distance_prox(Eigen::VectorXd target) {
  return [t = std::move(target)](const Eigen::VectorXd& v, double gamma) -> Eigen::VectorXd {
    if (v.size() != t.size()) throw InvalidArgument("prox input length does not match its target");
    return (v + gamma * t) / (1.0 + gamma);
  };
}

namespace {

Eigen::VectorXd consensus_mean(const Eigen::VectorXd& x, std::size_t blocks) {
  const auto size = static_cast<Eigen::Index>(static_cast<std::size_t>(x.size()) / blocks);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(size);
  for (std::size_t i = 0; i < blocks; ++i) mean += x.segment(static_cast<Eigen::Index>(i) * size, size);
  return mean / static_cast<double>(blocks);
}

}  // namespace

BlockVector project_consensus(const BlockVector& x) {
  const BlockPartition& p = x.partition();
  if (!p.equal_blocks()) throw InvalidArgument("consensus projection needs equal block sizes");
  const Eigen::VectorXd mean = consensus_mean(x.values(), p.blocks());
  BlockVector out(x.partition_ptr());
  for (std::size_t i = 0; i < p.blocks(); ++i) out.block(i) = mean;
  return out;
}

Projector Projector::identity() {
  return Projector(Kind::kIdentity, [](const Eigen::VectorXd& x) { return x; });
}

Projector Projector::consensus(const BlockPartition& partition) {
  if (!partition.equal_blocks()) throw InvalidArgument("consensus projection needs equal block sizes");
  const std::size_t blocks = partition.blocks();
  const auto dim = static_cast<Eigen::Index>(partition.dim());
  return Projector(Kind::kConsensus, [blocks, dim](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (x.size() != dim) throw InvalidArgument("projector input has the wrong length");
    const Eigen::VectorXd mean = consensus_mean(x, blocks);
    return mean.replicate(static_cast<Eigen::Index>(blocks), 1);
  });
}

Projector Projector::affine(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != b.size()) throw InvalidArgument("affine constraint A and b disagree in rows");
  if (a.rows() == 0 || a.rows() > a.cols()) throw InvalidArgument("affine constraint needs 1 <= rows <= cols");
  Eigen::LDLT<Eigen::MatrixXd> gram(a * a.transpose());
  if (gram.info() != Eigen::Success || gram.vectorD().minCoeff() <= 1e-12 * gram.vectorD().maxCoeff()) {
    throw InvalidArgument("affine constraint matrix must have full row rank");
  }
  return Projector(Kind::kAffine, [a, b, gram](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (x.size() != a.cols()) throw InvalidArgument("projector input has the wrong length");
    return x - a.transpose() * gram.solve(a * x - b);
  });
}

}  // namespace degas
