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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "degas/delay.hpp"
#include "degas/trajectory.hpp"

namespace degas::theory {

/// 1 - (1 - c^2) / m: centralized coordinate update.
double rho_centralized(double c, int m);

/// rho_c^(1 / (1 + tau_bar / m)): any delays bounded by tau_bar.
double rho_async(double c, int m, int tau_bar);

/// Iteration blow-up (1 + tau_bar / m) over the centralized method.
double complexity_ratio(int tau_bar, int m);

/// Wall-clock ratio 1/n + C/m against the centralized method; the
/// asymptotic constant C is taken as 1.
double speedup_time_ratio(int workers, int m);

struct ArockRate {
  double rho = 0.0;
  /// ARock iterations per DEGAS iteration at equal accuracy.
  double iter_ratio_vs_degas = 0.0;
};

/// Best known ARock rate 1 - (1-c^2) / (m (1 + 6 (t + sqrt(t)))), t = tau_bar/m.
/// Throws InternalInvariant if rho < rho_async^((1+t)/(1+6(t+sqrt t))) fails.
ArockRate arock_rate(double c, int m, int tau_bar);

/// Upper end of ARock's admissible step interval, 1 / (2 tau_bar / sqrt(m) + 1).
double arock_theoretical_step(int tau_bar, int m);

struct DistributionRate {
  double rho_c = 0.0;
  double rho_a = 0.0;
  double rho_p = 0.0;
  double alpha_p = 0.0;
  double phi_at_rho_a = 0.0;
  double phi_at_rho_c = 0.0;
  /// phi(rho_a) == 0: alpha_p is 1 and rho_p equals rho_a.
  bool degenerate = false;
};

/// phi(rho) = rho - rho_c - (c^2/m) (sum_i P_i rho^-i - 1).
double phi(double rho, double c, int m, const DelayDistribution& p);

/// Delay-distribution-aware rate rho_P = alpha_P rho_a + (1 - alpha_P) rho_c.
/// Throws PreconditionError if P_0 == 1 or tau_bar == 0.
DistributionRate rho_distribution(double c, int m, const DelayDistribution& p);

struct SequenceRate {
  double rho1 = 0.0;        ///< (p+q)^(1/(1+(1-p) tau_bar))
  double rho2_prior = 0.0;  ///< (p+q)^(1/(tau_bar+1))
  double complexity_ratio = 0.0;  ///< K1/K2 = (1+(1-p) tau_bar)/(1+tau_bar)
};

/// Rate of V(k+1) <= p V(k) + q max_{k-tau_bar <= l <= k} V(l). Requires p, q > 0, p + q < 1.
SequenceRate sequence_rate(double p, double q, int tau_bar);

struct SequenceCheck {
  bool holds = false;
  /// Worst-case V(0..K) from the recursion taken with equality, V(0) = 1.
  std::vector<double> trajectory;
  /// max_k V(k) / rho^k for both rates; closer to 1 means tighter.
  double max_ratio_rho1 = 0.0;
  double max_ratio_rho2 = 0.0;
  bool holds_prior = false;
};

SequenceCheck verify_sequence_bound(double p, double q, int tau_bar, int horizon);

struct RandomSequenceRate {
  double rho = 0.0;
  double alpha_prime = 0.0;
  double a = 0.0;
  double b = 0.0;
  double h_a = 0.0;
  double h_b = 0.0;
};

/// Rate of V(k+1) <= sum_i sigma_i V(k-i). Requires sigma_0 < sum sigma < 1;
/// b defaults to a^(1/(1+(1-sigma_0) tau_bar)) and must lie in [that, 1].
RandomSequenceRate random_sequence_rate(std::span<const double> sigmas, std::optional<double> b = std::nullopt);

struct RateOrderFit {
  double beta = 0.0;
  /// beta < 1: least-squares fit of log dist_sq against k^(1-beta).
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  /// beta == 1: sup of k * dist_sq over the final decile and over [0.5K, 0.6K).
  double tail_sup = 0.0;
  double mid_sup = 0.0;
  double sup_ratio = 0.0;
};

/// Throws InvalidArgument if beta is outside (0, 1] or dist_sq is missing.
RateOrderFit sublinear_rate_order(const Trajectory& trajectory, double beta);

struct RateReport {
  double c = 0.0;
  int m = 0;
  int tau_bar = 0;
  double rho_c = 0.0;
  double rho_a = 0.0;
  std::optional<double> rho_p;
  std::optional<double> alpha_p;
  std::optional<double> phi_at_rho_a;
  std::optional<double> phi_at_rho_c;
  double k_ratio = 0.0;
  double arock_rho = 0.0;
  double arock_iter_ratio = 0.0;
  double arock_step = 0.0;
  std::optional<int> workers;
  std::optional<double> speedup_time_ratio;
};

RateReport make_rate_report(double c, int m, int tau_bar, const DelayDistribution* distribution = nullptr,
                            std::optional<int> workers = std::nullopt);
nlohmann::json to_json(const RateReport& report);

}  // namespace degas::theory
