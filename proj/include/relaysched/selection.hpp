// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "relaysched/network.hpp"

namespace relaysched {

struct SelectionResult {
  std::size_t relay_index = 0;
  double metric = 0.0;
  std::vector<std::size_t> decoding_set;  // relays with P_user * g_ur / N0 >= tau

  bool operator==(const SelectionResult&) const = default;
};

/// End-to-end strength of the user->relay->BS path: min(P_user g_ur, P_relay g_rB).
inline double path_metric(std::size_t user, std::size_t relay, const ChannelRealization& ch,
                          const NetworkConfig& config) {
  return std::min(config.user_power() * ch.gain_ur(user, relay),
                  config.relay_power() * ch.gain_rb[relay]);
}

/// Ordering of candidate users when they compete for one slot: larger path
/// metric first. Equal metrics are common when the relay->BS hop is the
/// bottleneck for several users at once; those go to the larger first-hop
/// power P_user * g_ur, then to the lower user index.
inline bool user_preferred(double metric, double first_hop, std::size_t user, double best_metric,
                           double best_first_hop, std::size_t best_user) {
  if (metric != best_metric) return metric > best_metric;
  if (first_hop != best_first_hop) return first_hop > best_first_hop;
  return user < best_user;
}

std::vector<std::size_t> decoding_set(std::size_t user, const ChannelRealization& ch,
                                      const NetworkConfig& config);

/// Relay maximising path_metric; lowest index wins ties.
SelectionResult select_relay_min_max(std::size_t user, const ChannelRealization& ch,
                                     const NetworkConfig& config);

/// Among the relays that decode the user, the one with the strongest
/// relay->BS gain. Empty when no relay decodes (first-hop failure).
std::optional<SelectionResult> select_relay_method_theta(std::size_t user,
                                                         const ChannelRealization& ch,
                                                         const NetworkConfig& config);

/// Outage iff the selected metric is strictly below tau * N0.
bool is_outage(const SelectionResult& selection, const NetworkConfig& config);
bool is_outage(const std::optional<SelectionResult>& selection, const NetworkConfig& config);

}  // namespace relaysched
