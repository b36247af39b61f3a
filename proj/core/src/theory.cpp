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

#include "degas/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "degas/errors.hpp"

namespace degas::theory {

namespace {

void check_modulus(double c) {
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("modulus c must lie in (0, 1)");
}
void check_blocks(int m) {
  if (m < 1) throw InvalidArgument("block count m must be >= 1");
}
void check_tau(int tau_bar) {
  if (tau_bar < 0) throw InvalidArgument("tau_bar must be >= 0");
}

/// Neumaier-compensated sum of w_i * s^-i.
double weighted_inverse_powers(std::span<const double> w, double s) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const double term = w[i] * std::pow(s, -static_cast<double>(i));
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

double rho_centralized(double c, int m) {
  check_modulus(c);
  check_blocks(m);
  return 1.0 - (1.0 - c * c) / m;
}

double rho_async(double c, int m, int tau_bar) {
  check_tau(tau_bar);
  return std::pow(rho_centralized(c, m), 1.0 / complexity_ratio(tau_bar, m));
}

double complexity_ratio(int tau_bar, int m) {
  check_tau(tau_bar);
  check_blocks(m);
  return 1.0 + static_cast<double>(tau_bar) / m;
}

double speedup_time_ratio(int workers, int m) {
  if (workers < 1) throw InvalidArgument("worker count must be >= 1");
  check_blocks(m);
  return 1.0 / workers + 1.0 / m;
}

ArockRate arock_rate(double c, int m, int tau_bar) {
  check_modulus(c);
  check_blocks(m);
  check_tau(tau_bar);
  const double t = static_cast<double>(tau_bar) / m;
  const double slow = 1.0 + 6.0 * (t + std::sqrt(t));
  ArockRate r;
  r.rho = 1.0 - (1.0 - c * c) / (m * slow);
  r.iter_ratio_vs_degas = slow / (1.0 + t);
  const double floor_rho = std::pow(rho_async(c, m, tau_bar), 1.0 / r.iter_ratio_vs_degas);
  if (r.rho < floor_rho * (1.0 - 1e-15)) {
    throw InternalInvariant("ARock rate fell below the Bernoulli lower bound");
  }
  return r;
}

double arock_theoretical_step(int tau_bar, int m) {
  check_tau(tau_bar);
  check_blocks(m);
  return 1.0 / (2.0 * tau_bar / std::sqrt(static_cast<double>(m)) + 1.0);
}

double phi(double rho, double c, int m, const DelayDistribution& p) {
  const double rc = rho_centralized(c, m);
  return rho - rc - (c * c / m) * (weighted_inverse_powers(p.probabilities(), rho) - 1.0);
}

DistributionRate rho_distribution(double c, int m, const DelayDistribution& p) {
  check_modulus(c);
  check_blocks(m);
  if (p.tau_bar() == 0) throw PreconditionError("distribution-aware rate needs tau_bar >= 1");
  if (p[0] == 1.0) throw PreconditionError("distribution-aware rate needs P_0 < 1");
  DistributionRate r;
  r.rho_c = rho_centralized(c, m);
  r.rho_a = rho_async(c, m, static_cast<int>(p.tau_bar()));
  r.phi_at_rho_a = phi(r.rho_a, c, m, p);
  r.phi_at_rho_c = phi(r.rho_c, c, m, p);
  // Tiny negative phi(rho_a) is rounding on the boundary phi(rho_a) = 0.
  if (!(r.phi_at_rho_c < 0.0) || r.phi_at_rho_a < -1e-14) {
    throw InternalInvariant("sign facts phi(rho_a) >= 0 > phi(rho_c) failed");
  }
  if (r.phi_at_rho_a <= 0.0) {
    r.degenerate = true;
    r.alpha_p = 1.0;
    r.rho_p = r.rho_a;
    return r;
  }
  r.alpha_p = 1.0 / (1.0 - r.phi_at_rho_a / r.phi_at_rho_c);
  r.rho_p = r.alpha_p * r.rho_a + (1.0 - r.alpha_p) * r.rho_c;
  return r;
}

SequenceRate sequence_rate(double p, double q, int tau_bar) {
  if (!(p > 0.0 && q > 0.0 && p + q < 1.0)) throw InvalidArgument("need p, q > 0 and p + q < 1");
  check_tau(tau_bar);
  SequenceRate r;
  r.rho1 = std::pow(p + q, 1.0 / (1.0 + (1.0 - p) * tau_bar));
  r.rho2_prior = std::pow(p + q, 1.0 / (tau_bar + 1.0));
  r.complexity_ratio = (1.0 + (1.0 - p) * tau_bar) / (1.0 + tau_bar);
  if (r.rho1 > r.rho2_prior) throw InternalInvariant("rho1 exceeded the prior rate");
  return r;
}

SequenceCheck verify_sequence_bound(double p, double q, int tau_bar, int horizon) {
  const SequenceRate rate = sequence_rate(p, q, tau_bar);
  if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
  SequenceCheck out;
  auto& v = out.trajectory;
  v.reserve(static_cast<std::size_t>(horizon) + 1);
  v.push_back(1.0);
  for (int k = 0; k < horizon; ++k) {
    const auto lo = static_cast<std::size_t>(std::max(0, k - tau_bar));
    const double window_max = *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
    v.push_back(p * v.back() + q * window_max);
  }
  out.holds = true;
  out.holds_prior = true;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double b1 = std::pow(rate.rho1, static_cast<double>(k));
    const double b2 = std::pow(rate.rho2_prior, static_cast<double>(k));
    out.max_ratio_rho1 = std::max(out.max_ratio_rho1, v[k] / b1);
    out.max_ratio_rho2 = std::max(out.max_ratio_rho2, v[k] / b2);
    if (v[k] > b1 * (1.0 + 1e-12)) out.holds = false;
    if (v[k] > b2 * (1.0 + 1e-12)) out.holds_prior = false;
  }
  return out;
}

RandomSequenceRate random_sequence_rate(std::span<const double> sigmas, std::optional<double> b) {
  if (sigmas.size() < 2) throw PreconditionError("need sigma_0..sigma_tau_bar with tau_bar >= 1");
  for (double s : sigmas) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw PreconditionError("sigmas must be finite and nonnegative");
  }
  RandomSequenceRate r;
  r.a = std::accumulate(sigmas.begin(), sigmas.end(), 0.0);
  if (!(sigmas[0] < r.a && r.a < 1.0)) throw PreconditionError("need sigma_0 < sum(sigma) < 1");
  const double tau_bar = static_cast<double>(sigmas.size() - 1);
  const double lower = std::pow(r.a, 1.0 / (1.0 + (1.0 - sigmas[0]) * tau_bar));
  r.b = b.value_or(lower);
  if (!(r.b >= lower * (1.0 - 1e-15) && r.b <= 1.0)) throw PreconditionError("b must lie in [a^(1/(1+(1-sigma_0) tau_bar)), 1]");
  auto h = [&](double s) { return s - weighted_inverse_powers(sigmas, s); };
  r.h_a = h(r.a);
  r.h_b = h(r.b);
  if (!(r.h_a < 0.0) || r.h_b < -1e-14) throw InternalInvariant("sign facts h(a) < 0 <= h(b) failed");
  r.alpha_prime = 1.0 / (1.0 - std::max(r.h_b, 0.0) / r.h_a);
  r.rho = r.alpha_prime * r.b + (1.0 - r.alpha_prime) * r.a;
  return r;
}

RateOrderFit sublinear_rate_order(const Trajectory& trajectory, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("beta must lie in (0, 1]");
  RateOrderFit fit;
  fit.beta = beta;
  std::vector<std::pair<double, double>> pts;  // (k, dist_sq)
  for (const auto& r : trajectory.records) {
    if (!r.dist_sq) throw InvalidArgument("rate-order fit needs dist_sq on every record");
    pts.emplace_back(static_cast<double>(r.k), *r.dist_sq);
  }
  if (pts.size() < 3) throw InvalidArgument("rate-order fit needs at least three records");

  if (beta < 1.0) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t n = 0;
    for (const auto& [k, d] : pts) {
      if (!(d > 0.0) || !std::isfinite(d)) continue;
      const double x = std::pow(k, 1.0 - beta);
      const double y = std::log(d);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
      ++n;
    }
    if (n < 3) throw InvalidArgument("too few positive dist_sq values to fit");
    const double nd = static_cast<double>(n);
    const double cxx = sxx - sx * sx / nd;
    const double cxy = sxy - sx * sy / nd;
    const double cyy = syy - sy * sy / nd;
    fit.points = n;
    fit.slope = cxy / cxx;
    fit.intercept = (sy - fit.slope * sx) / nd;
    fit.r_squared = cyy > 0.0 ? (cxy * cxy) / (cxx * cyy) : 1.0;
    return fit;
  }

  const double K = pts.back().first;
  for (const auto& [k, d] : pts) {
    if (k >= 0.9 * K) fit.tail_sup = std::max(fit.tail_sup, k * d);
    if (k >= 0.5 * K && k < 0.6 * K) fit.mid_sup = std::max(fit.mid_sup, k * d);
  }
  fit.points = pts.size();
  fit.sup_ratio = fit.mid_sup > 0.0 ? fit.tail_sup / fit.mid_sup : 0.0;
  return fit;
}

RateReport make_rate_report(double c, int m, int tau_bar, const DelayDistribution* distribution,
                            std::optional<int> workers) {
  RateReport r;
  r.c = c;
  r.m = m;
  r.tau_bar = tau_bar;
  r.rho_c = rho_centralized(c, m);
  r.rho_a = rho_async(c, m, tau_bar);
  r.k_ratio = complexity_ratio(tau_bar, m);
  const ArockRate ar = arock_rate(c, m, tau_bar);
  r.arock_rho = ar.rho;
  r.arock_iter_ratio = ar.iter_ratio_vs_degas;
  r.arock_step = arock_theoretical_step(tau_bar, m);
  if (distribution) {
    if (static_cast<int>(distribution->tau_bar()) != tau_bar) {
      throw InvalidArgument("distribution tau_bar does not match the report's tau_bar");
    }
    const DistributionRate dr = rho_distribution(c, m, *distribution);
    r.rho_p = dr.rho_p;
    r.alpha_p = dr.alpha_p;
    r.phi_at_rho_a = dr.phi_at_rho_a;
    r.phi_at_rho_c = dr.phi_at_rho_c;
  }
  if (workers) {
    r.workers = workers;
    r.speedup_time_ratio = speedup_time_ratio(*workers, m);
  }
  return r;
}

nlohmann::json to_json(const RateReport& r) {
  nlohmann::json j{{"c", r.c},
                   {"m", r.m},
                   {"tau_bar", r.tau_bar},
                   {"rho_c", r.rho_c},
                   {"rho_a", r.rho_a},
                   {"k_ratio", r.k_ratio},
                   {"arock_rho", r.arock_rho},
                   {"arock_iter_ratio", r.arock_iter_ratio},
                   {"arock_step", r.arock_step}};
  if (r.rho_p) {
    j["rho_p"] = *r.rho_p;
    j["alpha_p"] = *r.alpha_p;
    j["phi_at_rho_a"] = *r.phi_at_rho_a;
    j["phi_at_rho_c"] = *r.phi_at_rho_c;
  }
  if (r.workers) {
    j["workers"] = *r.workers;
    j["speedup_time_ratio"] = *r.speedup_time_ratio;
    j["speedup_constant"] = 1.0;
  }
  return j;
}

}  // namespace degas::theory
