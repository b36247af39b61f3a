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

#include "degas/splitting.hpp"

#include <algorithm>
#include <cmath>

#include "degas/errors.hpp"

namespace degas {

namespace {

void check_step(double gamma, double lipschitz) {
  if (!(gamma > 0.0 && gamma < 2.0 / lipschitz)) {
    throw InvalidArgument("step gamma must lie in (0, 2/L) = (0, " + std::to_string(2.0 / lipschitz) + ")");
  }
}

void check_relaxation(double lambda) {
  if (!(lambda > 0.0 && lambda < 2.0)) throw InvalidArgument("relaxation lambda must lie in (0, 2)");
}

void check_problem(const CompositeProblem& problem) {
  if (!problem.smooth || !problem.partition) throw InvalidArgument("problem needs a smooth part and a partition");
  if (problem.prox.size() != problem.partition->blocks()) {
    throw InvalidArgument("problem needs one proximal map per block");
  }
  if (problem.smooth->dim() != problem.partition->dim()) {
    throw InvalidArgument("smooth part and partition disagree in dimension");
  }
}

Eigen::VectorXd block_mean(const BlockVector& x) {
  const BlockPartition& p = x.partition();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.size(0)));
  for (std::size_t j = 0; j < p.blocks(); ++j) z += x.block(j);
  return z / static_cast<double>(p.blocks());
}

}  // namespace

Operator bcd_operator(const CompositeProblem& problem, double gamma) {
  check_problem(problem);
  if (problem.constraint && problem.constraint->kind() != Projector::Kind::kIdentity) {
    throw InvalidArgument("BCD needs an unconstrained problem; use extended_admm_operator for a constraint set");
  }
  const double lip = problem.smooth->lipschitz();
  check_step(gamma, lip);
  auto smooth = problem.smooth;
  auto prox = problem.prox;
  auto partition = problem.partition;

  auto block_fn = [smooth, prox, gamma](const BlockVector& x, std::size_t i) -> Eigen::VectorXd {
    const auto& p = x.partition();
    const Eigen::VectorXd g = smooth->partial_gradient(x.values(), p.offset(i), p.size(i));
    return prox[i](x.block(i) - gamma * g, gamma);
  };
  auto full_fn = [smooth, prox, gamma](const BlockVector& x) -> Eigen::VectorXd {
    const auto& p = x.partition();
    const Eigen::VectorXd step = x.values() - gamma * smooth->gradient(x.values());
    Eigen::VectorXd out(step.size());
    for (std::size_t i = 0; i < p.blocks(); ++i) {
      const auto off = static_cast<Eigen::Index>(p.offset(i));
      const auto len = static_cast<Eigen::Index>(p.size(i));
      out.segment(off, len) = prox[i](step.segment(off, len), gamma);
    }
    return out;
  };

  Certificate cert;
  cert.alpha = 1.0 / (std::min(1.0, 1.0 / (lip * gamma)) + 0.5);
  if (const auto mu = smooth->strong_convexity()) {
    const double c2 = 1.0 - 2.0 * gamma * *mu + gamma * gamma * *mu * lip;
    if (c2 > 0.0 && c2 < 1.0) cert.modulus = std::sqrt(c2);
  }
  Operator op(partition, block_fn, "bcd");
  op.with_full(full_fn).with_certificate(cert);
  return op;
}

Operator admm_consensus_operator(PartitionPtr partition, std::vector<ProxFn> prox, double gamma, double lambda) {
  if (!partition) throw InvalidArgument("null partition");
  if (!partition->equal_blocks()) throw InvalidArgument("consensus ADMM needs equal block sizes");
  if (prox.size() != partition->blocks()) throw InvalidArgument("consensus ADMM needs one proximal map per block");
  if (!(gamma > 0.0)) throw InvalidArgument("step gamma must be positive");
  check_relaxation(lambda);

  auto block_fn = [prox, gamma, lambda](const BlockVector& x, std::size_t i) -> Eigen::VectorXd {
    const Eigen::VectorXd z = block_mean(x);
    return x.block(i) + lambda * (prox[i](2.0 * z - x.block(i), gamma) - z);
  };
  auto full_fn = [prox, gamma, lambda](const BlockVector& x) -> Eigen::VectorXd {
    const Eigen::VectorXd z = block_mean(x);
    Eigen::VectorXd out(x.values().size());
    for (std::size_t i = 0; i < x.partition().blocks(); ++i) {
      out.segment(static_cast<Eigen::Index>(x.partition().offset(i)), z.size()) =
          x.block(i) + lambda * (prox[i](2.0 * z - x.block(i), gamma) - z);
    }
    return out;
  };
  Operator op(std::move(partition), block_fn, "admm-consensus");
  op.with_full(full_fn).with_certificate({lambda / 2.0, std::nullopt});
  return op;
}

ClassicalAdmmIterates classical_admm_reference(const std::vector<ProxFn>& prox, double eta, int iterations,
                                               const Eigen::VectorXd& z0, const std::vector<Eigen::VectorXd>& x0) {
  if (!(eta > 0.0)) throw InvalidArgument("ADMM penalty eta must be positive");
  if (iterations < 0) throw InvalidArgument("iterations must be >= 0");
  if (prox.empty() || prox.size() != x0.size()) throw InvalidArgument("need one proximal map per dual block");
  for (const auto& xi : x0) {
    if (xi.size() != z0.size()) throw InvalidArgument("dual blocks must match the consensus dimension");
  }
  const std::size_t m = prox.size();
  ClassicalAdmmIterates out;
  out.z.push_back(z0);
  out.x.push_back(x0);
  for (int k = 0; k < iterations; ++k) {
    const Eigen::VectorXd& z = out.z.back();
    const std::vector<Eigen::VectorXd>& x = out.x.back();
    std::vector<Eigen::VectorXd> y(m);
    Eigen::VectorXd z_next = Eigen::VectorXd::Zero(z.size());
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = prox[i](z - x[i] / eta, 1.0 / eta);
      z_next += y[i] + x[i] / eta;
    }
    z_next /= static_cast<double>(m);
    std::vector<Eigen::VectorXd> x_next(m);
    for (std::size_t i = 0; i < m; ++i) x_next[i] = x[i] + eta * (y[i] - z_next);
    out.y.push_back(std::move(y));
    out.z.push_back(std::move(z_next));
    out.x.push_back(std::move(x_next));
  }
  return out;
}

double extended_admm_theta(double lipschitz, double gamma) {
  if (!(lipschitz > 0.0 && gamma > 0.0)) throw InvalidArgument("theta needs L, gamma > 0");
  return (std::min(1.0, 1.0 / (lipschitz * gamma)) + 0.5) / 2.0;
}

namespace {

struct ExtendedParts {
  Eigen::VectorXd z;
  Eigen::VectorXd y;
};

ExtendedParts reflect(const Projector& project, const Eigen::VectorXd& x) {
  ExtendedParts parts;
  parts.z = project(x);
  parts.y = 2.0 * parts.z - x;
  return parts;
}

void check_extended(const CompositeProblem& problem) {
  check_problem(problem);
  if (!problem.constraint) {
    throw InvalidArgument("extended ADMM needs a constraint projector (use Projector::identity for none)");
  }
}

}  // namespace

Operator extended_admm_operator(const CompositeProblem& problem, double gamma, double lambda) {
  check_extended(problem);
  check_step(gamma, problem.smooth->lipschitz());
  check_relaxation(lambda);
  const double theta = extended_admm_theta(problem.smooth->lipschitz(), gamma);
  const double c_prox = lambda * theta;
  const double c_x = 1.0 - (1.0 - theta) * lambda;
  const double c_z = lambda * (1.0 - 2.0 * (1.0 - theta));
  auto smooth = problem.smooth;
  auto prox = problem.prox;
  const Projector project = *problem.constraint;

  // The gradient at y needs all of y, so each block evaluation rebuilds it.
  auto block_fn = [=](const BlockVector& x, std::size_t i) -> Eigen::VectorXd {
    const auto& p = x.partition();
    const auto off = static_cast<Eigen::Index>(p.offset(i));
    const auto len = static_cast<Eigen::Index>(p.size(i));
    const ExtendedParts parts = reflect(project, x.values());
    const Eigen::VectorXd g = smooth->partial_gradient(parts.y, p.offset(i), p.size(i));
    return c_prox * prox[i](parts.y.segment(off, len) - gamma * g, gamma) + c_x * x.block(i) -
           c_z * parts.z.segment(off, len);
  };
  auto full_fn = [=](const BlockVector& x) -> Eigen::VectorXd {
    const auto& p = x.partition();
    const ExtendedParts parts = reflect(project, x.values());
    const Eigen::VectorXd step = parts.y - gamma * smooth->gradient(parts.y);
    Eigen::VectorXd out(step.size());
    for (std::size_t i = 0; i < p.blocks(); ++i) {
      const auto off = static_cast<Eigen::Index>(p.offset(i));
      const auto len = static_cast<Eigen::Index>(p.size(i));
      out.segment(off, len) = c_prox * prox[i](step.segment(off, len), gamma) +
                              c_x * x.values().segment(off, len) - c_z * parts.z.segment(off, len);
    }
    return out;
  };
  Operator op(problem.partition, block_fn, "extended-admm");
  op.with_full(full_fn).with_certificate({lambda / 2.0, std::nullopt});
  return op;
}

Operator extended_admm_simplified_operator(const CompositeProblem& problem) {
  check_extended(problem);
  const double gamma = 1.0 / problem.smooth->lipschitz();
  auto smooth = problem.smooth;
  auto prox = problem.prox;
  const Projector project = *problem.constraint;

  auto full_fn = [=](const BlockVector& x) -> Eigen::VectorXd {
    const auto& p = x.partition();
    const ExtendedParts parts = reflect(project, x.values());
    const Eigen::VectorXd step = parts.y - gamma * smooth->gradient(parts.y);
    Eigen::VectorXd out(step.size());
    for (std::size_t i = 0; i < p.blocks(); ++i) {
      const auto off = static_cast<Eigen::Index>(p.offset(i));
      const auto len = static_cast<Eigen::Index>(p.size(i));
      out.segment(off, len) = prox[i](step.segment(off, len), gamma);
    }
    return out + (2.0 / 3.0) * (x.values() - parts.z);
  };
  auto block_fn = [full_fn](const BlockVector& x, std::size_t i) -> Eigen::VectorXd {
    const auto& p = x.partition();
    return full_fn(x).segment(static_cast<Eigen::Index>(p.offset(i)), static_cast<Eigen::Index>(p.size(i)));
  };
  Operator op(problem.partition, block_fn, "extended-admm-simplified");
  op.with_full(full_fn).with_certificate({2.0 / 3.0, std::nullopt});
  return op;
}

}  // namespace degas
