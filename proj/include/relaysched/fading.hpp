// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "relaysched/network.hpp"
#include "relaysched/rng.hpp"

namespace relaysched {

enum class FadingKind { iid, gauss_markov };

/// Fading statistics for one process. In gauss_markov mode every link's
/// complex coefficient follows h[t+1] = rho * h[t] + sqrt(1 - rho^2) * w[t],
/// so the marginal stays CN(0, 1) and the gain stays exponential.
struct FadingMode {
  FadingKind kind = FadingKind::iid;
  double rho_user_relay = 0.0;
  double rho_relay_bs = 0.0;

  static FadingMode iid() { return {}; }
  static FadingMode gauss_markov(double rho) { return {FadingKind::gauss_markov, rho, rho}; }
  static FadingMode gauss_markov(double rho_ur, double rho_rb) {
    return {FadingKind::gauss_markov, rho_ur, rho_rb};
  }

  void validate() const;
  bool operator==(const FadingMode&) const = default;
};

/// Lag-one correlation J0(2 pi f_d T) of a Clarke/Jakes channel sampled
/// every slot_duration_s seconds.
double doppler_to_rho(double doppler_hz, double slot_duration_s);

/// Per-slot channel generator. Each link owns an engine seeded from
/// (seed, link class, user, relay), so a larger network reproduces the
/// streams of a smaller one on the shared links.
///
/// Single owner: not safe to advance from two threads.
class FadingProcess {
 public:
  FadingProcess(FadingMode mode, std::uint64_t seed);

  /// Draws the next slot. The first call binds the process to the
  /// network's dimensions; later calls must use the same M and N.
  ChannelRealization draw(const NetworkConfig& config);
  void draw_into(const NetworkConfig& config, ChannelRealization& out);

  const FadingMode& mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  /// Current complex coefficient of a link (unit-power; gains are scaled by
  /// the mean when drawn). Meaningful in gauss_markov mode only.
  std::complex<double> coefficient_ur(std::size_t user, std::size_t relay) const;
  std::complex<double> coefficient_rb(std::size_t relay) const;

 private:
  struct Link {
    Engine engine;
    std::complex<double> coeff{};
  };

  void bind(std::size_t users, std::size_t relays);
  double advance(Link& link, double rho);

  FadingMode mode_;
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::size_t users_ = 0;
  std::size_t relays_ = 0;
  std::vector<Link> ur_links_;
  std::vector<Link> rb_links_;
};

inline ChannelRealization draw_realization(FadingProcess& process, const NetworkConfig& config) {
  return process.draw(config);
}

}  // namespace relaysched
