// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relaysched/network.hpp"

namespace relaysched {

enum class GroupingStrategy { fixed_order, random, similar_gain, dissimilar_gain };

std::string_view to_string(GroupingStrategy s);
/// Accepts the names produced by to_string; throws std::invalid_argument otherwise.
GroupingStrategy parse_grouping_strategy(std::string_view name);

/// Partition of the users into groups of at most k. Group g owns every slot
/// whose index is congruent to g modulo the number of groups. Users inside
/// a group are stored in ascending order.
struct GroupingPattern {
  std::size_t group_size = 1;
  std::vector<std::vector<std::size_t>> groups;
  GroupingStrategy strategy = GroupingStrategy::fixed_order;
  std::uint64_t seed = 0;

  std::size_t group_count() const { return groups.size(); }
  const std::vector<std::size_t>& group_for_slot(std::uint64_t slot) const {
    return groups[slot % groups.size()];
  }

  bool operator==(const GroupingPattern&) const = default;
};

/// Builds a grouping.
///   fixed_order      consecutive indices
///   random           seeded Fisher-Yates shuffle, then consecutive
///   similar_gain     sort by mean user->relay gain, adjacent users together
///   dissimilar_gain  sort, then deal in serpentine order so the strongest
///                    and weakest users share a group
/// The gain-based strategies require k to divide M; the others leave a
/// smaller last group.
GroupingPattern make_grouping(GroupingStrategy strategy, std::size_t k, const NetworkConfig& config,
                              std::uint64_t seed = 0);

struct SlotOutcome {
  std::uint64_t slot_index = 0;
  std::size_t scheduled_user = 0;
  std::optional<std::size_t> selected_relay;
  double metric_w = 0.0;  // best path metric over the slot's candidates
  bool outage = true;

  bool operator==(const SlotOutcome&) const = default;
};

/// Greedy user/relay choice restricted to the candidate users: maximises
/// min(P_user g_ur, P_relay g_rB) over candidates and relays. Each user
/// uses its min-max relay; users are then ranked by user_preferred.
SlotOutcome schedule_among(std::uint64_t slot_index, std::span<const std::size_t> candidates,
                           const ChannelRealization& ch, const NetworkConfig& config);

/// Round-robin: user slot_index mod M, best relay for that user.
SlotOutcome schedule_fixed_tdma(std::uint64_t slot_index, const ChannelRealization& ch,
                                const NetworkConfig& config);

/// Best pair over all M users.
SlotOutcome schedule_greedy(const ChannelRealization& ch, const NetworkConfig& config,
                            std::uint64_t slot_index = 0);

/// Best pair within the group that owns the slot.
SlotOutcome schedule_relaxed_tdma(std::uint64_t slot_index, const GroupingPattern& pattern,
                                  const ChannelRealization& ch, const NetworkConfig& config);

}  // namespace relaysched
