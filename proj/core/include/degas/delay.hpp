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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace degas {

/// Finite delay distribution P_0..P_tau_bar.
class DelayDistribution {
 public:
  /// Throws InvalidArgument unless all P_i >= 0 and the sum is 1 within 1e-12.
  explicit DelayDistribution(std::vector<double> probabilities);

  std::size_t tau_bar() const { return p_.size() - 1; }
  std::span<const double> probabilities() const { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }

  /// Inverse-CDF draw for u in [0, 1).
  std::int64_t sample(double u) const;

  bool operator==(const DelayDistribution&) const = default;

 private:
  std::vector<double> p_;
  std::vector<double> cdf_;
};

enum class PolynomialKind { kSmall, kUniform, kLarge };

PolynomialKind parse_polynomial_kind(const std::string& name);
std::string to_string(PolynomialKind kind);

/// small: P_i ~ (tau_bar + 1 - i)^2, uniform: P_i = 1/(tau_bar + 1),
/// large: P_i ~ (i + 1)^2.
DelayDistribution make_polynomial_distribution(PolynomialKind kind, int tau_bar);

/// P >=_1 Q: every cumulative sum of P is at least that of Q (tolerance 1e-12).
bool dominates_first_order(const DelayDistribution& p, const DelayDistribution& q);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments mean_variance(const DelayDistribution& p);

void to_json(nlohmann::json& j, const DelayDistribution& p);
DelayDistribution delay_distribution_from_json(const nlohmann::json& j);

enum class GrowthMode { kAdversarialMax, kRandomized };

struct ZeroDelay {};

struct BoundedIidDelay {
  DelayDistribution distribution;
  std::uint64_t seed = 0;
};

/// tau(k) <= eta * k^beta + offset. The offset is the additive constant of
/// the growth assumption (>= 1).
struct GrowthDelay {
  double eta = 0.5;
  double beta = 1.0;
  double offset = 1.0;
  GrowthMode mode = GrowthMode::kAdversarialMax;
  std::uint64_t seed = 0;
};

struct TraceDelay {
  std::shared_ptr<const std::vector<std::int64_t>> delays;
  std::int64_t max_delay = 0;
};

/// Generator of the delay sequence tau(k). Every variant is a pure function
/// of (parameters, seed, k), and every result lies in [0, k].
class DelayModel {
 public:
  DelayModel() : variant_(ZeroDelay{}) {}

  static DelayModel zero();
  static DelayModel bounded_iid(DelayDistribution distribution, std::uint64_t seed);
  /// Throws InvalidArgument unless eta in (0,1), beta in (0,1], offset >= 1.
  static DelayModel growth(double eta, double beta, double offset, GrowthMode mode, std::uint64_t seed);
  static DelayModel trace(std::vector<std::int64_t> delays);

  /// tau(k). Throws ExhaustedTrace when a trace model runs out.
  std::int64_t sample(std::int64_t k) const;
  /// Largest value sample(k) can return; never exceeds k.
  std::int64_t bound(std::int64_t k) const;
  /// Same variant and parameters with a different seed (no-op for zero/trace).
  DelayModel reseeded(std::uint64_t seed) const;

  std::string describe() const;
  nlohmann::json to_json() const;

  using Variant = std::variant<ZeroDelay, BoundedIidDelay, GrowthDelay, TraceDelay>;
  const Variant& variant() const { return variant_; }

 private:
  explicit DelayModel(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

std::int64_t sample_delay(const DelayModel& model, std::int64_t k);

}  // namespace degas

template <>
struct nlohmann::adl_serializer<degas::DelayDistribution> {
  static degas::DelayDistribution from_json(const json& j) { return degas::delay_distribution_from_json(j); }
  static void to_json(json& j, const degas::DelayDistribution& p) { degas::to_json(j, p); }
};
