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
#include <vector>

#include <Eigen/Core>

#include "degas/operator.hpp"
#include "degas/problems.hpp"
#include "degas/prox.hpp"

namespace degas {

/// Block coordinate descent operator T_i(x) = prox_{gamma r_i}(x_i - gamma grad_i f(x)).
///
/// Requires gamma in (0, 2/L) and no constraint (use extended_admm_operator
/// for constrained problems). Certificate: alpha = 1/(min(1, 1/(L gamma)) + 1/2),
/// and with strong convexity mu the modulus sqrt(1 - 2 gamma mu + gamma^2 mu L).
Operator bcd_operator(const CompositeProblem& problem, double gamma);

/// Douglas-Rachford operator for consensus problems min sum_i F_i(z):
///   z = (1/m) sum_j x_j,  T_i(x) = x_i + lambda (prox_{gamma F_i}(2z - x_i) - z).
/// lambda in (0, 2); certificate alpha = lambda / 2.
Operator admm_consensus_operator(PartitionPtr partition, std::vector<ProxFn> prox, double gamma, double lambda);

/// Iterates of classical consensus ADMM with penalty eta:
///   yhat_i(k+1) = prox_{F_i/eta}(zhat(k) - xhat_i(k)/eta)
///   zhat(k+1)   = (1/m) sum_i (yhat_i(k+1) + xhat_i(k)/eta)
///   xhat_i(k+1) = xhat_i(k) + eta (yhat_i(k+1) - zhat(k+1))
struct ClassicalAdmmIterates {
  std::vector<Eigen::VectorXd> z;               ///< zhat(0..K)
  std::vector<std::vector<Eigen::VectorXd>> y;  ///< yhat(1..K), y[k-1][i]
  std::vector<std::vector<Eigen::VectorXd>> x;  ///< xhat(0..K), x[k][i]
};

ClassicalAdmmIterates classical_admm_reference(const std::vector<ProxFn>& prox, double eta, int iterations,
                                               const Eigen::VectorXd& z0, const std::vector<Eigen::VectorXd>& x0);

/// theta = (min(1, 1/(L gamma)) + 1/2) / 2.
double extended_admm_theta(double lipschitz, double gamma);

/// Extended ADMM on min_{z in Z} f(z) + sum_i r_i(z_i):
///   z = P_Z(x), y = 2z - x,
///   T_i(x) = lambda theta prox_{gamma r_i}(y_i - gamma grad_i f(y))
///            + (1 - (1 - theta) lambda) x_i - lambda (1 - 2 (1 - theta)) z_i.
/// Needs a projector, gamma in (0, 2/L), lambda in (0, 2); certificate alpha = lambda / 2.
Operator extended_admm_operator(const CompositeProblem& problem, double gamma, double lambda);

/// The same operator at gamma = 1/L, lambda = 4/3, written as
///   prox_{gamma r}(y - gamma grad f(y)) + (2/3)(x - P_Z(x)).
Operator extended_admm_simplified_operator(const CompositeProblem& problem);

}  // namespace degas
