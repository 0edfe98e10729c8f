// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relaysched/network.hpp"
#include "relaysched/scheduling.hpp"

// Distributed relaxed-TDMA: every relay picks its best user from the slot's
// group using only local channel knowledge, arms a backoff timer that is
// strictly decreasing in its local metric, and the first timer to expire
// announces (relay, user) with an RTS that silences the rest.

namespace relaysched {

enum class RelayStatus { counting, suppressed, transmitting };

struct RelayNodeState {
  std::size_t relay_index = 0;
  std::size_t chosen_user = 0;
  double metric_y = 0.0;          // min(P_user g_{u*,r}, P_relay g_rB)
  double backoff_deadline = 0.0;  // seconds after slot start
  RelayStatus status = RelayStatus::counting;
};

struct LocalChoice {
  std::size_t user = 0;
  double metric_y = 0.0;
};

/// Best user of the group as seen from one relay, ordered by user_preferred.
LocalChoice relay_local_select(std::size_t relay, std::span<const std::size_t> group,
                               const ChannelRealization& ch, const NetworkConfig& config);

/// scale / (metric_y + epsilon)
double backoff_map(double metric_y, double scale_constant, double epsilon);

struct ProtocolParams {
  double backoff_scale = 0.0;      // seconds * power; <= 0 selects 1 ms * tau * N0
  double backoff_epsilon = 0.0;    // power; <= 0 selects 1e-9 * tau * N0
  double vulnerable_window = 0.0;  // seconds; timers closer than this collide
  double pilot_time = 0.0;         // seconds spent on channel estimation per slot

  double scale_for(const NetworkConfig& config) const;
  double epsilon_for(const NetworkConfig& config) const;

  bool operator==(const ProtocolParams&) const = default;
};

using BackoffFunction = std::function<double(double metric_y)>;

/// The default backoff map for the given parameters.
BackoffFunction default_backoff(const ProtocolParams& params, const NetworkConfig& config);

/// Steps 1-2: local selection and timer arming at every relay.
std::vector<RelayNodeState> init_relay_states(std::span<const std::size_t> group,
                                              const ChannelRealization& ch,
                                              const NetworkConfig& config,
                                              const BackoffFunction& backoff);

struct ProtocolTrace {
  std::size_t winner_relay = 0;
  std::size_t winner_user = 0;
  double metric_y = 0.0;
  std::uint32_t rts_count = 0;
  bool collision = false;
  double elapsed_backoff = 0.0;  // seconds until the first RTS, pilot time included

  bool operator==(const ProtocolTrace&) const = default;
};

/// Steps 3-5: timers count down on one event timeline. The earliest timer
/// fires an RTS; every other timer expiring within the vulnerable window
/// of it also fires (collision, slot wasted); the rest are suppressed.
/// Equal deadlines with a zero window go to the lowest relay index.
ProtocolTrace run_contention(std::vector<RelayNodeState>& states, double vulnerable_window,
                             double pilot_time = 0.0);

struct ProtocolSlot {
  ProtocolTrace trace;
  SlotOutcome outcome;  // selected_relay empty and outage set on collision
};

ProtocolSlot run_protocol_slot(std::uint64_t slot_index, const GroupingPattern& pattern,
                               const ChannelRealization& ch, const NetworkConfig& config,
                               const ProtocolParams& params);

struct OverheadReport {
  double rts_per_slot = 0.0;
  double collision_rate = 0.0;
  double mean_backoff = 0.0;  // seconds
};

/// Throws std::invalid_argument on an empty trace sequence.
OverheadReport overhead_report(std::span<const ProtocolTrace> traces);

/// Per-slot trace log line: slot,winner_relay,winner_user,y,backoff_s,rts_count,collision
std::string trace_csv_header();
std::string trace_csv_line(std::uint64_t slot_index, const ProtocolTrace& trace);

}  // namespace relaysched
