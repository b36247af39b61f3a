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

#include "degas/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "degas/errors.hpp"
#include "degas/rng.hpp"

namespace degas {

DelayDistribution::DelayDistribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
  if (p_.empty()) throw InvalidArgument("delay distribution needs at least P_0");
  double total = 0.0;
  cdf_.reserve(p_.size());
  for (double pi : p_) {
    if (!(pi >= 0.0) || !std::isfinite(pi)) throw InvalidArgument("delay probabilities must be finite and >= 0");
    total += pi;
    cdf_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "delay probabilities sum to " << total << ", not 1";
    throw InvalidArgument(msg.str());
  }
}

std::int64_t DelayDistribution::sample(double u) const {
  // The last bucket absorbs u above a cdf total that rounds below 1.
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end() - 1, u);
  return static_cast<std::int64_t>(it - cdf_.begin());
}

PolynomialKind parse_polynomial_kind(const std::string& name) {
  if (name == "small") return PolynomialKind::kSmall;
  if (name == "uniform") return PolynomialKind::kUniform;
  if (name == "large") return PolynomialKind::kLarge;
  throw InvalidArgument("unknown delay distribution kind '" + name + "' (small, uniform, large)");
}

std::string to_string(PolynomialKind kind) {
  switch (kind) {
    case PolynomialKind::kSmall: return "small";
    case PolynomialKind::kUniform: return "uniform";
    case PolynomialKind::kLarge: return "large";
  }
  return "unknown";
}

DelayDistribution make_polynomial_distribution(PolynomialKind kind, int tau_bar) {
  if (tau_bar < 1) throw InvalidArgument("tau_bar must be >= 1");
  const auto n = static_cast<std::size_t>(tau_bar) + 1;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto di = static_cast<double>(i);
    switch (kind) {
      case PolynomialKind::kSmall: w[i] = (static_cast<double>(n) - di) * (static_cast<double>(n) - di); break;
      case PolynomialKind::kUniform: w[i] = 1.0; break;
      case PolynomialKind::kLarge: w[i] = (di + 1.0) * (di + 1.0); break;
    }
  }
  // Weights are small integers, so the sum is exact.
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& wi : w) wi /= total;
  return DelayDistribution(std::move(w));
}

bool dominates_first_order(const DelayDistribution& p, const DelayDistribution& q) {
  if (p.tau_bar() != q.tau_bar()) throw InvalidArgument("dominance needs equal tau_bar");
  double cp = 0.0;
  double cq = 0.0;
  for (std::size_t i = 0; i <= p.tau_bar(); ++i) {
    cp += p[i];
    cq += q[i];
    if (cp < cq - 1e-12) return false;
  }
  return true;
}

Moments mean_variance(const DelayDistribution& p) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i <= p.tau_bar(); ++i) {
    const auto di = static_cast<double>(i);
    mean += di * p[i];
    second += di * di * p[i];
  }
  return {mean, std::max(0.0, second - mean * mean)};
}

void to_json(nlohmann::json& j, const DelayDistribution& p) {
  j = nlohmann::json{{"tau_bar", p.tau_bar()},
                     {"p", std::vector<double>(p.probabilities().begin(), p.probabilities().end())}};
}

DelayDistribution delay_distribution_from_json(const nlohmann::json& j) {
  auto probs = j.at("p").get<std::vector<double>>();
  if (j.contains("tau_bar") && j.at("tau_bar").get<std::size_t>() + 1 != probs.size()) {
    throw InvalidArgument("tau_bar does not match the length of p");
  }
  return DelayDistribution(std::move(probs));
}

DelayModel DelayModel::zero() { return DelayModel(ZeroDelay{}); }

DelayModel DelayModel::bounded_iid(DelayDistribution distribution, std::uint64_t seed) {
  return DelayModel(BoundedIidDelay{std::move(distribution), seed});
}

DelayModel DelayModel::growth(double eta, double beta, double offset, GrowthMode mode, std::uint64_t seed) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("growth eta must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("growth beta must lie in (0, 1]");
  if (!(offset >= 1.0) || !std::isfinite(offset)) throw InvalidArgument("growth offset g must be >= 1");
  return DelayModel(GrowthDelay{eta, beta, offset, mode, seed});
}

DelayModel DelayModel::trace(std::vector<std::int64_t> delays) {
  std::int64_t max_delay = 0;
  for (auto d : delays) {
    if (d < 0) throw InvalidArgument("trace delays must be nonnegative");
    max_delay = std::max(max_delay, d);
  }
  return DelayModel(TraceDelay{std::make_shared<const std::vector<std::int64_t>>(std::move(delays)), max_delay});
}

namespace {

std::int64_t growth_bound(const GrowthDelay& g, std::int64_t k) {
  const double kd = static_cast<double>(k);
  const double b = std::min(kd, g.eta * std::pow(kd, g.beta) + g.offset);
  return static_cast<std::int64_t>(std::floor(b));
}

}  // namespace

std::int64_t DelayModel::sample(std::int64_t k) const {
  if (k < 0) throw InvalidArgument("delay queried at negative k");
  const auto counter = static_cast<std::uint64_t>(k);
  return std::visit(
      [&](const auto& v) -> std::int64_t {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ZeroDelay>) {
          return 0;
        } else if constexpr (std::is_same_v<V, BoundedIidDelay>) {
          const CounterRng rng(v.seed, streams::kDelays);
          return std::min(k, v.distribution.sample(rng.uniform(counter)));
        } else if constexpr (std::is_same_v<V, GrowthDelay>) {
          const std::int64_t bound = growth_bound(v, k);
          if (v.mode == GrowthMode::kAdversarialMax) return bound;
          const CounterRng rng(v.seed, streams::kDelays);
          return static_cast<std::int64_t>(rng.below(counter, static_cast<std::uint64_t>(bound) + 1));
        } else {
          if (counter >= v.delays->size()) {
            throw ExhaustedTrace("delay trace of length " + std::to_string(v.delays->size()) +
                                 " queried at k = " + std::to_string(k));
          }
          return std::min(k, (*v.delays)[counter]);
        }
      },
      variant_);
}

std::int64_t DelayModel::bound(std::int64_t k) const {
  return std::visit(
      [&](const auto& v) -> std::int64_t {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ZeroDelay>) {
          return 0;
        } else if constexpr (std::is_same_v<V, BoundedIidDelay>) {
          return std::min<std::int64_t>(k, static_cast<std::int64_t>(v.distribution.tau_bar()));
        } else if constexpr (std::is_same_v<V, GrowthDelay>) {
          return growth_bound(v, k);
        } else {
          return std::min(k, v.max_delay);
        }
      },
      variant_);
}

DelayModel DelayModel::reseeded(std::uint64_t seed) const {
  DelayModel out = *this;
  std::visit(
      [&](auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, BoundedIidDelay> || std::is_same_v<V, GrowthDelay>) v.seed = seed;
      },
      out.variant_);
  return out;
}

std::string DelayModel::describe() const {
  std::ostringstream s;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ZeroDelay>) {
          s << "zero";
        } else if constexpr (std::is_same_v<V, BoundedIidDelay>) {
          s << "bounded-iid(tau_bar=" << v.distribution.tau_bar() << ")";
        } else if constexpr (std::is_same_v<V, GrowthDelay>) {
          s << "growth(eta=" << v.eta << ",beta=" << v.beta << ",g=" << v.offset << ","
            << (v.mode == GrowthMode::kAdversarialMax ? "adversarial-max" : "randomized") << ")";
        } else {
          s << "trace(n=" << v.delays->size() << ")";
        }
      },
      variant_);
  return s.str();
}

nlohmann::json DelayModel::to_json() const {
  return std::visit(
      [&](const auto& v) -> nlohmann::json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ZeroDelay>) {
          return {{"kind", "zero"}};
        } else if constexpr (std::is_same_v<V, BoundedIidDelay>) {
          return {{"kind", "bounded-iid"}, {"distribution", v.distribution}, {"seed", v.seed}};
        } else if constexpr (std::is_same_v<V, GrowthDelay>) {
          return {{"kind", "growth"},
                  {"eta", v.eta},
                  {"beta", v.beta},
                  {"g", v.offset},
                  {"mode", v.mode == GrowthMode::kAdversarialMax ? "adversarial-max" : "randomized"},
                  {"seed", v.seed}};
        } else {
          return {{"kind", "trace"}, {"length", v.delays->size()}, {"max_delay", v.max_delay}};
        }
      },
      variant_);
}

std::int64_t sample_delay(const DelayModel& model, std::int64_t k) { return model.sample(k); }

}  // namespace degas
