// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/fading.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relaysched {

namespace {

constexpr std::uint64_t kUserRelayClass = 1;
constexpr std::uint64_t kRelayBsClass = 2;

}  // namespace

void FadingMode::validate() const {
  if (kind == FadingKind::iid) return;
  for (double rho : {rho_user_relay, rho_relay_bs}) {
    if (!std::isfinite(rho) || rho <= -1.0 || rho > 1.0) {
      throw std::invalid_argument("fading correlation must lie in (-1, 1]");
    }
  }
}

double doppler_to_rho(double doppler_hz, double slot_duration_s) {
  const double x = 2.0 * std::numbers::pi * doppler_hz * slot_duration_s;
  return std::cyl_bessel_j(0.0, std::abs(x));
}

FadingProcess::FadingProcess(FadingMode mode, std::uint64_t seed) : mode_(mode), seed_(seed) {
  mode_.validate();
}

void FadingProcess::bind(std::size_t users, std::size_t relays) {
  users_ = users;
  relays_ = relays;
  ur_links_.clear();
  rb_links_.clear();
  ur_links_.reserve(users * relays);
  rb_links_.reserve(relays);
  for (std::size_t u = 0; u < users; ++u) {
    for (std::size_t r = 0; r < relays; ++r) {
      ur_links_.push_back({Engine(derive_seed(seed_, {kUserRelayClass, u, r})), {}});
    }
  }
  for (std::size_t r = 0; r < relays; ++r) {
    rb_links_.push_back({Engine(derive_seed(seed_, {kRelayBsClass, r})), {}});
  }
}

double FadingProcess::advance(Link& link, double rho) {
  if (mode_.kind == FadingKind::iid) return standard_exponential(link.engine);
  const auto w = complex_normal(link.engine);
  if (draws_ == 0) {
    link.coeff = w;
  } else {
    link.coeff = rho * link.coeff + std::sqrt(1.0 - rho * rho) * w;
  }
  return std::norm(link.coeff);
}

void FadingProcess::draw_into(const NetworkConfig& config, ChannelRealization& out) {
  const std::size_t m = config.num_users;
  const std::size_t n = config.num_relays;
  if (draws_ == 0 && ur_links_.empty()) {
    bind(m, n);
  } else if (m != users_ || n != relays_) {
    throw std::invalid_argument("fading process is bound to a different network size");
  }
  if (out.gain_ur.rows() != m || out.gain_ur.cols() != n) out.gain_ur = GainMatrix(m, n);
  out.gain_rb.resize(n);

  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t r = 0; r < n; ++r) {
      out.gain_ur(u, r) =
          config.mean_gain_ur(u, r) * advance(ur_links_[u * n + r], mode_.rho_user_relay);
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    out.gain_rb[r] = config.mean_gain_rb[r] * advance(rb_links_[r], mode_.rho_relay_bs);
  }
  ++draws_;
}

ChannelRealization FadingProcess::draw(const NetworkConfig& config) {
  ChannelRealization out;
  draw_into(config, out);
  return out;
}

std::complex<double> FadingProcess::coefficient_ur(std::size_t user, std::size_t relay) const {
  return ur_links_.at(user * relays_ + relay).coeff;
}

std::complex<double> FadingProcess::coefficient_rb(std::size_t relay) const {
  return rb_links_.at(relay).coeff;
}

}  // namespace relaysched
