// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "relaysched/fading.hpp"
#include "relaysched/fairness.hpp"
#include "relaysched/network.hpp"
#include "relaysched/protocol.hpp"
#include "relaysched/scheduling.hpp"

namespace relaysched {

enum class PolicyKind { fixed_tdma, greedy, relaxed_tdma };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);

struct PolicyEntry {
  PolicyKind kind = PolicyKind::fixed_tdma;
  std::size_t k = 1;  // group size, relaxed_tdma only
  GroupingStrategy grouping = GroupingStrategy::fixed_order;
  std::uint64_t grouping_seed = 0;
  std::size_t patterns = 1;  // independent groupings averaged (seeds grouping_seed + i)

  /// "tdma", "greedy" or e.g. "relaxed_k2_random".
  std::string label() const;
  /// Groupings this policy runs with; TDMA is k = 1 and greedy k = M in
  /// fixed order.
  std::vector<GroupingPattern> groupings(const NetworkConfig& config) const;

  bool operator==(const PolicyEntry&) const = default;
};

struct FadingSettings {
  FadingKind kind = FadingKind::iid;
  double doppler_hz = 15.0;
  std::optional<double> doppler_hz_relay_bs;  // defaults to doppler_hz

  FadingMode mode(double slot_duration) const;
  bool operator==(const FadingSettings&) const = default;
};

struct FairnessSettings {
  std::vector<double> window_units{0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
  double snr_db = 15.0;
  std::uint64_t slots = 200000;

  bool operator==(const FairnessSettings&) const = default;
};

struct ExperimentPlan {
  NetworkConfig config;
  std::vector<double> snr_db;
  std::vector<PolicyEntry> policies;
  std::uint64_t trials_per_point = 100000;    // minimum slots per point
  std::uint64_t max_trials = 10000000;        // hard cap per point and grouping
  std::uint64_t min_outage_events = 100;
  std::uint64_t block_size = 8192;            // slots per independently seeded block
  FadingSettings fading;
  std::uint64_t base_seed = 1;
  bool use_protocol_path = false;
  ProtocolParams protocol;
  FairnessSettings fairness;

  void validate() const;
  bool operator==(const ExperimentPlan&) const = default;
};

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

WilsonInterval wilson_interval(std::uint64_t events, std::uint64_t trials, double z = kZ95);

/// Running per-point statistics. Counts and airtime merge exactly; delay
/// samples stitch across adjacent slot ranges.
class MetricsAccumulator {
 public:
  MetricsAccumulator() = default;
  explicit MetricsAccumulator(std::size_t users, bool keep_series = false);

  void cover(std::uint64_t begin, std::uint64_t end) { delays_.cover(begin, end); }
  void record(const SlotOutcome& outcome);
  void merge(const MetricsAccumulator& other);

  std::uint64_t outage_count() const { return outage_count_; }
  std::uint64_t slot_count() const { return slot_count_; }
  double outage_estimate() const;
  WilsonInterval confidence(double z = kZ95) const;

  const AirtimeLedger& airtime() const { return airtime_; }
  const DelaySamples& delays() const { return delays_; }
  /// Scheduled user per slot (-1 when nobody transmitted), if kept.
  const std::vector<std::int32_t>& series() const { return series_; }

  bool operator==(const MetricsAccumulator&) const = default;

 private:
  std::uint64_t outage_count_ = 0;
  std::uint64_t slot_count_ = 0;
  AirtimeLedger airtime_;
  DelaySamples delays_;
  bool keep_series_ = false;
  std::vector<std::int32_t> series_;
};

struct PointResult {
  double snr_db = 0.0;
  std::string policy;
  double outage = 0.0;  // arithmetic mean over groupings
  WilsonInterval ci;    // on the pooled counts
  std::uint64_t slots = 0;
  std::uint64_t outage_events = 0;
  bool cap_hit = false;
  std::vector<double> grouping_outages;
  MetricsAccumulator metrics;  // pooled over groupings
};

/// Simulates `slots` consecutive slots starting at `first_slot` from a
/// fading process with the given seed.
MetricsAccumulator simulate_block(const ExperimentPlan& plan, const NetworkConfig& config,
                                  PolicyKind kind, const GroupingPattern& pattern,
                                  std::uint64_t seed, std::uint64_t first_slot,
                                  std::uint64_t slots, bool keep_series = false);

/// One (SNR, policy) point. Slots are simulated in blocks seeded by
/// (base_seed, snr_index, block); all policies at one SNR index therefore
/// see the same channels. Blocks run until at least trials_per_point slots
/// and min_outage_events outages (pooled over groupings), or max_trials
/// slots in total. The result does not depend on `threads`.
PointResult run_point(const ExperimentPlan& plan, std::size_t snr_index, const PolicyEntry& policy,
                      unsigned threads = 1);

struct SweepRow {
  double snr_db = 0.0;
  std::string policy;
  double outage = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double fi_longrun = 0.0;
  double delay_mean = 0.0;  // seconds
  double delay_var = 0.0;   // seconds^2
  std::uint64_t slots = 0;
  std::uint64_t outage_events = 0;
  bool cap_hit = false;

  bool operator==(const SweepRow&) const = default;
};

SweepRow to_row(const PointResult& point, double slot_duration);

/// One row per (SNR, policy), SNR-major.
std::vector<SweepRow> run_sweep(const ExperimentPlan& plan, unsigned threads = 1);

struct FairnessCurve {
  std::string policy;
  std::vector<double> window_units;
  std::vector<std::size_t> window_slots;
  std::vector<double> mean_fi;
  double fi_longrun = 0.0;
};

/// Slots per normalized-Doppler unit: 1 / (doppler * slot_duration).
double doppler_unit_slots(double doppler_hz, double slot_duration);

/// Windowed Jain index against window length for each policy, on one
/// correlated channel trajectory shared by all policies. Requires
/// gauss_markov fading.
std::vector<FairnessCurve> run_fairness_experiment(const ExperimentPlan& plan, unsigned threads = 1);

struct EquivalenceReport {
  std::uint64_t slots = 0;
  std::uint64_t pair_mismatches = 0;    // (user, relay) differs from the centralized choice
  std::uint64_t outage_mismatches = 0;
  std::uint64_t protocol_outages = 0;
  std::uint64_t centralized_outages = 0;
  OverheadReport overhead;
};

/// Runs the distributed protocol and the centralized group-restricted
/// greedy rule on the same channels. Writes one trace line per slot when
/// `trace_log` is given.
EquivalenceReport compare_protocol_to_centralized(const NetworkConfig& config,
                                                  const GroupingPattern& pattern,
                                                  const ProtocolParams& params, FadingMode mode,
                                                  std::uint64_t seed, std::uint64_t slots,
                                                  std::ostream* trace_log = nullptr);

}  // namespace relaysched
