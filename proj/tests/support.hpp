// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "relaysched/network.hpp"

namespace testing {

// Independent generator for test inputs; deliberately not the library's
// helpers so the oracles share no code with the implementation.
inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x5eed);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline double expo(double mean) { return std::exponential_distribution<double>(1.0 / mean)(rng()); }

inline relaysched::NetworkConfig random_config(std::size_t m, std::size_t n, double lo = 0.5,
                                               double hi = 1.5) {
  relaysched::NetworkConfig c;
  c.num_users = m;
  c.num_relays = n;
  c.mean_gain_ur = relaysched::GainMatrix(m, n);
  for (auto& v : c.mean_gain_ur.values()) v = uniform(lo, hi);
  c.mean_gain_rb.resize(n);
  for (auto& v : c.mean_gain_rb) v = uniform(lo, hi);
  c.alpha = uniform(0.2, 0.8);
  return c;
}

inline relaysched::ChannelRealization random_channel(const relaysched::NetworkConfig& c) {
  relaysched::ChannelRealization ch;
  ch.gain_ur = relaysched::GainMatrix(c.num_users, c.num_relays);
  for (std::size_t u = 0; u < c.num_users; ++u) {
    for (std::size_t r = 0; r < c.num_relays; ++r) ch.gain_ur(u, r) = expo(c.mean_gain_ur(u, r));
  }
  ch.gain_rb.resize(c.num_relays);
  for (std::size_t r = 0; r < c.num_relays; ++r) ch.gain_rb[r] = expo(c.mean_gain_rb[r]);
  return ch;
}

// J0 by its power series sum_k (-1)^k (x/2)^{2k} / (k!)^2.
inline double bessel_j0_series(double x, int terms = 40) {
  double term = 1.0;
  double sum = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < terms; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

// Two-sided Kolmogorov-Smirnov distance against Exp(mean).
inline double ks_exponential(std::vector<double> xs, double mean) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = 1.0 - std::exp(-xs[i] / mean);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

// 1% critical value of the one-sample KS statistic (asymptotic).
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

// Greedy outage by conditioning on each relay independently: relay r fails
// the threshold iff its relay->BS hop is short or every user's first hop is.
inline double greedy_outage_oracle(const relaysched::NetworkConfig& c, double eta) {
  const double pu = c.alpha * eta;
  const double pr = (1.0 - c.alpha) * eta;
  const double level = c.snr_threshold * c.noise_power;
  double p = 1.0;
  for (std::size_t r = 0; r < c.num_relays; ++r) {
    const double rb_ok = std::exp(-level / (pr * c.mean_gain_rb[r]));
    double all_users_fail = 1.0;
    for (std::size_t u = 0; u < c.num_users; ++u) {
      all_users_fail *= 1.0 - std::exp(-level / (pu * c.mean_gain_ur(u, r)));
    }
    p *= 1.0 - rb_ok * (1.0 - all_users_fail);
  }
  return p;
}

}  // namespace testing
