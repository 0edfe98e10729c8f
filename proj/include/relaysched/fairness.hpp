// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace relaysched {

/// Jain's index (sum x)^2 / (n sum x^2). Throws on an empty or all-zero
/// vector, or on negative entries.
double jain_index(std::span<const double> airtime);
double jain_index(std::span<const std::uint64_t> airtime);

/// Worst-case index of k-user relaxed TDMA: one user per group takes all
/// of the group's airtime, giving 1/k. Requires 1 <= k <= M and k | M.
double fi_lower_bound(std::size_t k, std::size_t users);

/// Long-run airtime in slots per user. Slots with no transmission (for
/// example a contention collision) are not recorded.
class AirtimeLedger {
 public:
  explicit AirtimeLedger(std::size_t users = 0) : per_user_(users, 0) {}

  void record(std::size_t user);
  void merge(const AirtimeLedger& other);

  std::size_t users() const { return per_user_.size(); }
  std::span<const std::uint64_t> per_user_slots() const { return per_user_; }
  std::uint64_t total_slots() const { return total_; }
  std::vector<double> shares() const;
  /// Jain index of the ledger; 0 when nothing was recorded.
  double fairness() const;

  bool operator==(const AirtimeLedger&) const = default;

 private:
  std::vector<std::uint64_t> per_user_;
  std::uint64_t total_ = 0;
};

/// Airtime inside the most recent `window_length` slots.
class SlidingAirtimeWindow {
 public:
  SlidingAirtimeWindow(std::size_t users, std::size_t window_length);

  /// Advances one slot; nullopt means no user held the slot.
  void push(std::optional<std::size_t> user);
  bool full() const { return seen_ >= window_length_; }
  std::size_t window_length() const { return window_length_; }
  /// Jain index of the window contents; nullopt when the window is empty.
  std::optional<double> fairness() const;

 private:
  void add(std::size_t user, int delta);

  std::size_t users_;
  std::size_t window_length_;
  std::vector<std::int64_t> ring_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t sum_ = 0;
  std::uint64_t sum_sq_ = 0;
  std::uint64_t seen_ = 0;
};

struct WindowedFi {
  std::uint64_t slot_index;  // last slot inside the window
  double fi;
};

/// Index of every full window, stepping one slot at a time. `user_per_slot`
/// holds the scheduled user of each slot or -1 for an idle slot. Windows
/// that contain no transmission at all are skipped.
std::vector<WindowedFi> windowed_fi_series(std::span<const std::int32_t> user_per_slot,
                                           std::size_t users, std::size_t window_length);
double mean_windowed_fi(std::span<const std::int32_t> user_per_slot, std::size_t users,
                        std::size_t window_length);

/// Channel access delay samples: for each user, the multiset of slot gaps
/// between consecutive transmissions, held as a histogram.
class DelaySamples {
 public:
  explicit DelaySamples(std::size_t users = 0);

  /// Declares the slot range [begin, end) these samples were observed over.
  /// Samples over adjacent ranges are stitched on merge.
  void cover(std::uint64_t begin, std::uint64_t end);

  /// Registers a transmission; slots must be non-decreasing per user.
  void record(std::size_t user, std::uint64_t slot);
  /// Adds a gap directly (synthetic inputs). Gaps must be at least one slot.
  void add_gap(std::size_t user, std::uint64_t gap, std::uint64_t count = 1);

  /// Combines two sample sets; if their ranges are adjacent the gap across
  /// the boundary is added for each user, so merge order does not matter.
  void merge(const DelaySamples& other);

  std::size_t users() const { return histograms_.size(); }
  std::uint64_t gap_count(std::size_t user) const { return counts_.at(user); }
  std::span<const std::uint64_t> histogram(std::size_t user) const { return histograms_.at(user); }

  bool operator==(const DelaySamples&) const = default;

 private:
  std::vector<std::vector<std::uint64_t>> histograms_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::optional<std::uint64_t>> first_;
  std::vector<std::optional<std::uint64_t>> last_;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> range_;
};

struct DelayMoments {
  std::uint64_t gaps = 0;
  double mean_s = 0.0;
  double variance_s2 = 0.0;  // unbiased sample variance
  bool sufficient = false;   // at least two gaps
};

struct DelayReport {
  std::vector<DelayMoments> per_user;
  DelayMoments pooled;
};

DelayReport delay_statistics(const DelaySamples& samples, double slot_duration);

}  // namespace relaysched
