// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "relaysched/simulator.hpp"

// Configuration files are YAML. Grammar (every key optional unless noted):
//
//   network:
//     users: 8                      # required
//     relays: 5                     # required
//     mean_gain_ur: [[...], ...]    # M rows of N, or one of:
//     mean_gain_ur_range: [lo, hi]  #   every link uniform in (lo, hi)
//     user_gain_ranges:             #   per-user ranges, in user order
//       - {count: 4, range: [1.5, 2.0]}
//     mean_gain_rb: [...]           # N values, or
//     mean_gain_rb_range: [lo, hi]
//     gain_seed: 2026               # seed for the range draws
//     alpha: 0.5
//     noise_power: 1.0
//     snr_threshold: 3.0            # linear
//     slot_duration: 0.002          # seconds
//   fading:
//     kind: iid | gauss_markov
//     doppler_hz: 15
//     doppler_hz_relay_bs: 15       # defaults to doppler_hz
//   sweep:
//     snr_db: [0, 2, 4] | {start: 0, stop: 30, step: 2}
//     trials_per_point: 100000
//     max_trials: 10000000
//     min_outage_events: 100
//     block_size: 8192
//     seed: 1
//     use_protocol_path: false
//   policies:
//     - {kind: greedy}
//     - {kind: tdma}
//     - {kind: relaxed, k: 2, grouping: random, seed: 0, patterns: 100}
//   protocol: {backoff_scale: 0, backoff_epsilon: 0, vulnerable_window: 0, pilot_time: 0}
//   fairness: {window_units: [...], snr_db: 15, slots: 200000}
//
// Range draws are materialized at parse time; serialize_plan writes the
// drawn values, so a serialized plan replays without the seed.

namespace relaysched {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }  // 1-based, 0 when unknown
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

ExperimentPlan parse_config(const std::filesystem::path& path);
ExperimentPlan parse_config_string(std::string_view text, std::string_view source = "<config>");

/// Canonical YAML for a plan; parse_config_string(serialize_plan(p)) == p.
std::string serialize_plan(const ExperimentPlan& plan);

}  // namespace relaysched
