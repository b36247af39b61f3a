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

#include <cmath>
#include <cstdint>
#include <numbers>

namespace degas {

namespace detail {
__extension__ typedef unsigned __int128 uint128;
}  // namespace detail

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), built on the SplitMix64 finalizer. Results are
/// identical on every platform, and any draw can be recomputed without
/// replaying the ones before it.
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-counter";

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + mix(counter));
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform on {0, ..., n-1} by 128-bit multiply-shift; bias is at most n / 2^64.
  constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t n) const noexcept {
    return static_cast<std::uint64_t>((static_cast<detail::uint128>(bits(counter)) * n) >> 64);
  }

 private:
  std::uint64_t key_;
};

/// Sequential view over a CounterRng, for generators that need many draws.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  std::uint64_t next_bits() { return rng_.bits(counter_++); }
  double uniform() { return rng_.uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return rng_.below(counter_++, n); }

  /// Standard normal via Box-Muller (one variate per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

/// Stream identifiers, so independent consumers of one seed never collide.
namespace streams {
inline constexpr std::uint64_t kBlocks = 1;
inline constexpr std::uint64_t kDelays = 2;
inline constexpr std::uint64_t kData = 3;
inline constexpr std::uint64_t kWorkerBlocks = 1;  // worker w uses kWorkerBlocks + w
}  // namespace streams

}  // namespace degas
