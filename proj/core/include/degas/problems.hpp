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
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "degas/block_vector.hpp"
#include "degas/dataset.hpp"
#include "degas/prox.hpp"

namespace degas {

/// Convex, L-smooth part f of a composite objective.
class SmoothLoss {
 public:
  virtual ~SmoothLoss() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;
  /// Gradient restricted to coordinates [offset, offset + size).
  virtual Eigen::VectorXd partial_gradient(const Eigen::VectorXd& x, std::size_t offset, std::size_t size) const;
  virtual double lipschitz() const = 0;
  virtual std::optional<double> strong_convexity() const { return std::nullopt; }
};

/// (1/N) sum_i 0.5 (a_i^T x - b_i)^2.
class LeastSquaresLoss final : public SmoothLoss {
 public:
  LeastSquaresLoss(Eigen::MatrixXd a, Eigen::VectorXd b);

  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd partial_gradient(const Eigen::VectorXd& x, std::size_t offset, std::size_t size) const override;
  double lipschitz() const override { return lipschitz_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  double lipschitz_;
};

/// (1/N) sum_i log(1 + exp(-b_i a_i^T x)) + (l2/2) ||x||^2, labels in {-1, +1}.
class LogisticLoss final : public SmoothLoss {
 public:
  LogisticLoss(Eigen::MatrixXd a, Eigen::VectorXd b, double l2);

  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd partial_gradient(const Eigen::VectorXd& x, std::size_t offset, std::size_t size) const override;
  double lipschitz() const override { return lipschitz_; }
  std::optional<double> strong_convexity() const override;

 private:
  Eigen::VectorXd margin_weights(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  double l2_;
  double lipschitz_;
};

/// 0.5 x^T Q x + q^T x with Q symmetric positive semidefinite.
class QuadraticLoss final : public SmoothLoss {
 public:
  QuadraticLoss(Eigen::MatrixXd q_mat, Eigen::VectorXd q_vec);

  std::size_t dim() const override { return static_cast<std::size_t>(q_vec_.size()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd partial_gradient(const Eigen::VectorXd& x, std::size_t offset, std::size_t size) const override;
  double lipschitz() const override { return lipschitz_; }
  std::optional<double> strong_convexity() const override;

 private:
  Eigen::MatrixXd q_mat_;
  Eigen::VectorXd q_vec_;
  double lipschitz_;
  double mu_;
};

class ZeroLoss final : public SmoothLoss {
 public:
  explicit ZeroLoss(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const override { return dim_; }
  double value(const Eigen::VectorXd&) const override { return 0.0; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override { return Eigen::VectorXd::Zero(x.size()); }
  /// Any positive number is a valid smoothness constant; 1 keeps gamma = 1/L meaningful.
  double lipschitz() const override { return 1.0; }

 private:
  std::size_t dim_;
};

/// Largest eigenvalue of A^T A by power iteration (50 steps or relative
/// change below 1e-10).
double power_iteration_gram(const Eigen::MatrixXd& a);

/// minimize f(x) + sum_i r_i(x_i) over x in Z.
struct CompositeProblem {
  std::shared_ptr<const SmoothLoss> smooth;
  /// One proximal map per block.
  std::vector<ProxFn> prox;
  /// Absent means Z is the whole space.
  std::optional<Projector> constraint;
  PartitionPtr partition;
  /// Value of sum_i r_i, for reporting.
  std::function<double(const Eigen::VectorXd&)> separable_value;

  double objective(const Eigen::VectorXd& x) const;
};

/// Lasso: least squares plus lambda1 ||x||_1.
CompositeProblem build_lasso(const Dataset& data, double lambda1, PartitionPtr partition);

/// Logistic loss with (lambda2/2)||x||^2 plus lambda1 ||x||_1.
/// Throws LabelDomainError unless every label is -1 or +1.
CompositeProblem build_logistic(const Dataset& data, double lambda1, double lambda2, PartitionPtr partition);

inline constexpr double kDefaultLambda1 = 1e-3;
inline constexpr double kDefaultLambda2 = 1e-4;

}  // namespace degas
