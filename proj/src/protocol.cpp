// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/protocol.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "relaysched/csv.hpp"
#include "relaysched/selection.hpp"

namespace relaysched {

LocalChoice relay_local_select(std::size_t relay, std::span<const std::size_t> group,
                               const ChannelRealization& ch, const NetworkConfig& config) {
  if (group.empty()) throw std::invalid_argument("relay_local_select needs a nonempty group");
  if (relay >= ch.num_relays()) throw std::out_of_range("relay index out of range");
  LocalChoice best{group.front(), -1.0};
  double best_first_hop = -1.0;
  for (std::size_t u : group) {
    const double y = path_metric(u, relay, ch, config);
    const double first_hop = config.user_power() * ch.gain_ur(u, relay);
    if (user_preferred(y, first_hop, u, best.metric_y, best_first_hop, best.user)) {
      best = {u, y};
      best_first_hop = first_hop;
    }
  }
  return best;
}

double backoff_map(double metric_y, double scale_constant, double epsilon) {
  if (metric_y < 0.0) throw std::invalid_argument("metric must be nonnegative");
  if (!(scale_constant > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("backoff scale and epsilon must be positive");
  }
  return scale_constant / (metric_y + epsilon);
}

double ProtocolParams::scale_for(const NetworkConfig& config) const {
  return backoff_scale > 0.0 ? backoff_scale : 1e-3 * config.decode_level();
}

double ProtocolParams::epsilon_for(const NetworkConfig& config) const {
  return backoff_epsilon > 0.0 ? backoff_epsilon : 1e-9 * config.decode_level();
}

BackoffFunction default_backoff(const ProtocolParams& params, const NetworkConfig& config) {
  const double scale = params.scale_for(config);
  const double eps = params.epsilon_for(config);
  return [scale, eps](double y) { return backoff_map(y, scale, eps); };
}

std::vector<RelayNodeState> init_relay_states(std::span<const std::size_t> group,
                                              const ChannelRealization& ch,
                                              const NetworkConfig& config,
                                              const BackoffFunction& backoff) {
  std::vector<RelayNodeState> states;
  states.reserve(ch.num_relays());
  for (std::size_t r = 0; r < ch.num_relays(); ++r) {
    const auto choice = relay_local_select(r, group, ch, config);
    states.push_back({r, choice.user, choice.metric_y, backoff(choice.metric_y),
                      RelayStatus::counting});
  }
  return states;
}

ProtocolTrace run_contention(std::vector<RelayNodeState>& states, double vulnerable_window,
                             double pilot_time) {
  if (states.empty()) throw std::invalid_argument("contention needs at least one relay");

  using Event = std::pair<double, std::size_t>;  // (deadline, position in states)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> timers;
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].status = RelayStatus::counting;
    timers.emplace(states[i].backoff_deadline, i);
  }

  const auto [first_deadline, first] = timers.top();
  timers.pop();
  states[first].status = RelayStatus::transmitting;

  ProtocolTrace trace;
  trace.winner_relay = states[first].relay_index;
  trace.winner_user = states[first].chosen_user;
  trace.metric_y = states[first].metric_y;
  trace.rts_count = 1;
  trace.elapsed_backoff = pilot_time + first_deadline;

  while (!timers.empty()) {
    const auto [deadline, i] = timers.top();
    timers.pop();
    if (vulnerable_window > 0.0 && deadline - first_deadline <= vulnerable_window) {
      states[i].status = RelayStatus::transmitting;
      ++trace.rts_count;
      trace.collision = true;
    } else {
      states[i].status = RelayStatus::suppressed;
    }
  }
  return trace;
}

ProtocolSlot run_protocol_slot(std::uint64_t slot_index, const GroupingPattern& pattern,
                               const ChannelRealization& ch, const NetworkConfig& config,
                               const ProtocolParams& params) {
  const auto& group = pattern.group_for_slot(slot_index);
  auto states = init_relay_states(group, ch, config, default_backoff(params, config));
  ProtocolSlot slot;
  slot.trace = run_contention(states, params.vulnerable_window, params.pilot_time);
  slot.outcome.slot_index = slot_index;
  slot.outcome.scheduled_user = slot.trace.winner_user;
  slot.outcome.metric_w = slot.trace.metric_y;
  if (slot.trace.collision) {
    slot.outcome.outage = true;
  } else {
    slot.outcome.selected_relay = slot.trace.winner_relay;
    slot.outcome.outage = slot.trace.metric_y < config.decode_level();
  }
  return slot;
}

OverheadReport overhead_report(std::span<const ProtocolTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("overhead report needs at least one trace");
  double rts = 0.0;
  double collisions = 0.0;
  double backoff = 0.0;
  for (const auto& t : traces) {
    rts += t.rts_count;
    collisions += t.collision ? 1.0 : 0.0;
    backoff += t.elapsed_backoff;
  }
  const auto n = static_cast<double>(traces.size());
  return {rts / n, collisions / n, backoff / n};
}

std::string trace_csv_header() {
  return "slot,winner_relay,winner_user,y,backoff_s,rts_count,collision";
}

std::string trace_csv_line(std::uint64_t slot_index, const ProtocolTrace& trace) {
  std::string line;
  line += format_number(slot_index);
  line += ',';
  line += format_number(static_cast<std::uint64_t>(trace.winner_relay));
  line += ',';
  line += format_number(static_cast<std::uint64_t>(trace.winner_user));
  line += ',';
  line += format_number(trace.metric_y);
  line += ',';
  line += format_number(trace.elapsed_backoff);
  line += ',';
  line += format_number(static_cast<std::uint64_t>(trace.rts_count));
  line += ',';
  line += trace.collision ? "1" : "0";
  return line;
}

}  // namespace relaysched
