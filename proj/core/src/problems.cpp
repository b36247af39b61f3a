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

#include "degas/problems.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "degas/errors.hpp"

namespace degas {

namespace {

constexpr double kLipschitzInflation = 1.01;

/// log(1 + exp(-t)) without overflow.
double log1p_exp_neg(double t) { return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

/// 1 / (1 + exp(t)) without overflow.
double sigmoid_neg(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

void check_data(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() == 0 || a.cols() == 0) throw InvalidArgument("empty dataset");
  if (a.rows() != b.size()) throw InvalidArgument("feature rows and label count differ");
}

}  // namespace

Eigen::VectorXd SmoothLoss::partial_gradient(const Eigen::VectorXd& x, std::size_t offset, std::size_t size) const {
  return gradient(x).segment(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(size));
}

double power_iteration_gram(const Eigen::MatrixXd& a) {
  if (a.cols() == 0) throw InvalidArgument("power iteration on an empty matrix");
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  double lambda = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const bool settled = it > 0 && std::abs(next - lambda) <= 1e-10 * std::abs(next);
    lambda = next;
    if (settled) break;
  }
  return lambda;
}

LeastSquaresLoss::LeastSquaresLoss(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {
  check_data(a_, b_);
  lipschitz_ = kLipschitzInflation * power_iteration_gram(a_) / static_cast<double>(a_.rows());
  if (!(lipschitz_ > 0.0)) throw InvalidArgument("least-squares loss with a zero feature matrix");
}

double LeastSquaresLoss::value(const Eigen::VectorXd& x) const {
  return 0.5 * (a_ * x - b_).squaredNorm() / static_cast<double>(a_.rows());
}

Eigen::VectorXd LeastSquaresLoss::gradient(const Eigen::VectorXd& x) const {
  return a_.transpose() * (a_ * x - b_) / static_cast<double>(a_.rows());
}

Eigen::VectorXd LeastSquaresLoss::partial_gradient(const Eigen::VectorXd& x, std::size_t offset,
                                                   std::size_t size) const {
  const Eigen::VectorXd r = a_ * x - b_;
  return a_.middleCols(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(size)).transpose() * r /
         static_cast<double>(a_.rows());
}

LogisticLoss::LogisticLoss(Eigen::MatrixXd a, Eigen::VectorXd b, double l2)
    : a_(std::move(a)), b_(std::move(b)), l2_(l2) {
  check_data(a_, b_);
  if (!(l2_ >= 0.0)) throw InvalidArgument("l2 weight must be >= 0");
  for (Eigen::Index i = 0; i < b_.size(); ++i) {
    if (b_[i] != 1.0 && b_[i] != -1.0) {
      throw LabelDomainError("logistic labels must be -1 or +1; row " + std::to_string(i + 1) + " has " +
                             std::to_string(b_[i]));
    }
  }
  lipschitz_ = kLipschitzInflation * power_iteration_gram(a_) / (4.0 * static_cast<double>(a_.rows())) + l2_;
  if (!(lipschitz_ > 0.0)) throw InvalidArgument("logistic loss with a zero feature matrix and no l2 term");
}

double LogisticLoss::value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd margins = b_.cwiseProduct(a_ * x);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) sum += log1p_exp_neg(margins[i]);
  return sum / static_cast<double>(a_.rows()) + 0.5 * l2_ * x.squaredNorm();
}

Eigen::VectorXd LogisticLoss::margin_weights(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd margins = b_.cwiseProduct(a_ * x);
  Eigen::VectorXd w(margins.size());
  const double n = static_cast<double>(a_.rows());
  for (Eigen::Index i = 0; i < margins.size(); ++i) w[i] = -b_[i] * sigmoid_neg(margins[i]) / n;
  return w;
}

Eigen::VectorXd LogisticLoss::gradient(const Eigen::VectorXd& x) const {
  return a_.transpose() * margin_weights(x) + l2_ * x;
}

Eigen::VectorXd LogisticLoss::partial_gradient(const Eigen::VectorXd& x, std::size_t offset, std::size_t size) const {
  const auto off = static_cast<Eigen::Index>(offset);
  const auto len = static_cast<Eigen::Index>(size);
  return a_.middleCols(off, len).transpose() * margin_weights(x) + l2_ * x.segment(off, len);
}

std::optional<double> LogisticLoss::strong_convexity() const {
  if (l2_ > 0.0) return l2_;
  return std::nullopt;
}

QuadraticLoss::QuadraticLoss(Eigen::MatrixXd q_mat, Eigen::VectorXd q_vec)
    : q_mat_(std::move(q_mat)), q_vec_(std::move(q_vec)) {
  if (q_mat_.rows() != q_mat_.cols() || q_mat_.rows() != q_vec_.size() || q_vec_.size() == 0) {
    throw InvalidArgument("quadratic loss needs a square matrix matching its linear term");
  }
  if (!q_mat_.isApprox(q_mat_.transpose(), 1e-12)) throw InvalidArgument("quadratic loss matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q_mat_, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -1e-12 * std::max(1.0, std::abs(hi))) throw InvalidArgument("quadratic loss matrix must be PSD");
  if (!(hi > 0.0)) throw InvalidArgument("quadratic loss matrix must be nonzero");
  lipschitz_ = hi;
  mu_ = std::max(lo, 0.0);
}

double QuadraticLoss::value(const Eigen::VectorXd& x) const { return 0.5 * x.dot(q_mat_ * x) + q_vec_.dot(x); }

Eigen::VectorXd QuadraticLoss::gradient(const Eigen::VectorXd& x) const { return q_mat_ * x + q_vec_; }

Eigen::VectorXd QuadraticLoss::partial_gradient(const Eigen::VectorXd& x, std::size_t offset, std::size_t size) const {
  const auto off = static_cast<Eigen::Index>(offset);
  const auto len = static_cast<Eigen::Index>(size);
  return q_mat_.middleRows(off, len) * x + q_vec_.segment(off, len);
}

std::optional<double> QuadraticLoss::strong_convexity() const {
  if (mu_ > 1e-12 * lipschitz_) return mu_;
  return std::nullopt;
}

double CompositeProblem::objective(const Eigen::VectorXd& x) const {
  return smooth->value(x) + (separable_value ? separable_value(x) : 0.0);
}

namespace {

CompositeProblem l1_composite(std::shared_ptr<const SmoothLoss> loss, double lambda1, PartitionPtr partition) {
  if (!(lambda1 >= 0.0)) throw InvalidArgument("lambda1 must be >= 0");
  if (!partition) throw InvalidArgument("null partition");
  if (partition->dim() != loss->dim()) {
    throw InvalidArgument("partition dimension " + std::to_string(partition->dim()) +
                          " does not match the feature dimension " + std::to_string(loss->dim()));
  }
  CompositeProblem p;
  p.smooth = std::move(loss);
  p.prox.assign(partition->blocks(), l1_prox(lambda1));
  p.partition = std::move(partition);
  p.separable_value = [lambda1](const Eigen::VectorXd& x) { return lambda1 * x.lpNorm<1>(); };
  return p;
}

}  // namespace

CompositeProblem build_lasso(const Dataset& data, double lambda1, PartitionPtr partition) {
  return l1_composite(std::make_shared<LeastSquaresLoss>(data.features, data.labels), lambda1, std::move(partition));
}

CompositeProblem build_logistic(const Dataset& data, double lambda1, double lambda2, PartitionPtr partition) {
  if (!(lambda2 >= 0.0)) throw InvalidArgument("lambda2 must be >= 0");
  return l1_composite(std::make_shared<LogisticLoss>(data.features, data.labels, lambda2), lambda1,
                      std::move(partition));
}

}  // namespace degas
