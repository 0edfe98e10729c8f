// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/selection.hpp"

#include <stdexcept>

namespace relaysched {

namespace {

void check_user(std::size_t user, const ChannelRealization& ch) {
  if (user >= ch.num_users()) throw std::out_of_range("user index out of range");
}

}  // namespace

std::vector<std::size_t> decoding_set(std::size_t user, const ChannelRealization& ch,
                                      const NetworkConfig& config) {
  check_user(user, ch);
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < ch.num_relays(); ++r) {
    if (config.user_power() * ch.gain_ur(user, r) >= config.decode_level()) {
      out.push_back(r);
    }
  }
  return out;
}

SelectionResult select_relay_min_max(std::size_t user, const ChannelRealization& ch,
                                     const NetworkConfig& config) {
  check_user(user, ch);
  SelectionResult out;
  out.metric = -1.0;
  for (std::size_t r = 0; r < ch.num_relays(); ++r) {
    const double m = path_metric(user, r, ch, config);
    if (m > out.metric) {
      out.metric = m;
      out.relay_index = r;
    }
  }
  out.decoding_set = decoding_set(user, ch, config);
  return out;
}

std::optional<SelectionResult> select_relay_method_theta(std::size_t user,
                                                         const ChannelRealization& ch,
                                                         const NetworkConfig& config) {
  auto decoders = decoding_set(user, ch, config);
  if (decoders.empty()) return std::nullopt;
  SelectionResult out;
  out.relay_index = decoders.front();
  for (std::size_t r : decoders) {
    if (ch.gain_rb[r] > ch.gain_rb[out.relay_index]) out.relay_index = r;
  }
  out.metric = config.relay_power() * ch.gain_rb[out.relay_index];
  out.decoding_set = std::move(decoders);
  return out;
}

bool is_outage(const SelectionResult& selection, const NetworkConfig& config) {
  return selection.metric < config.decode_level();
}

bool is_outage(const std::optional<SelectionResult>& selection, const NetworkConfig& config) {
  return !selection || is_outage(*selection, config);
}

}  // namespace relaysched
