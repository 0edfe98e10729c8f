// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace relaysched {

// std::mt19937_64 output is fixed by the standard; the distribution objects
// are not, so every variate below is derived from raw engine words.
using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Hashes a path of integers below a base seed into an independent stream seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

/// [0, 1) with 53 random bits.
inline double uniform01(Engine& e) {
  return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

/// (0, 1]
inline double uniform_open_closed(Engine& e) {
  return static_cast<double>((e() >> 11) + 1) * 0x1.0p-53;
}

/// Unit-mean exponential.
inline double standard_exponential(Engine& e) {
  return -std::log(uniform_open_closed(e));
}

/// Circularly symmetric complex Gaussian with E|z|^2 = 1.
inline std::complex<double> complex_normal(Engine& e) {
  const double radius = std::sqrt(-std::log(uniform_open_closed(e)));
  const double phase = 2.0 * std::numbers::pi * uniform01(e);
  return {radius * std::cos(phase), radius * std::sin(phase)};
}

/// Unbiased integer in [0, bound) by rejection.
inline std::uint64_t uniform_index(Engine& e, std::uint64_t bound) {
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
  std::uint64_t x;
  do {
    x = e();
  } while (x >= limit);
  return x % bound;
}

inline double uniform_between(Engine& e, double lo, double hi) {
  return lo + (hi - lo) * uniform01(e);
}

}  // namespace relaysched
