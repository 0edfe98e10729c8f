// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/scheduling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "relaysched/rng.hpp"
#include "relaysched/selection.hpp"

namespace relaysched {

std::string_view to_string(GroupingStrategy s) {
  switch (s) {
    case GroupingStrategy::fixed_order: return "fixed_order";
    case GroupingStrategy::random: return "random";
    case GroupingStrategy::similar_gain: return "similar_gain";
    case GroupingStrategy::dissimilar_gain: return "dissimilar_gain";
  }
  return "unknown";
}

GroupingStrategy parse_grouping_strategy(std::string_view name) {
  for (auto s : {GroupingStrategy::fixed_order, GroupingStrategy::random,
                 GroupingStrategy::similar_gain, GroupingStrategy::dissimilar_gain}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown grouping strategy '" + std::string(name) + "'");
}

namespace {

std::vector<std::size_t> users_by_mean_gain(const NetworkConfig& config) {
  std::vector<std::size_t> order(config.num_users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.mean_gain_ur.row_mean(a) < config.mean_gain_ur.row_mean(b);
  });
  return order;
}

std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t>& order, std::size_t k) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < order.size(); i += k) {
    const auto end = std::min(order.size(), i + k);
    groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                        order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return groups;
}

std::vector<std::vector<std::size_t>> serpentine(const std::vector<std::size_t>& order,
                                                 std::size_t group_count) {
  std::vector<std::vector<std::size_t>> groups(group_count);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t round = i / group_count;
    const std::size_t offset = i % group_count;
    const std::size_t g = (round % 2 == 0) ? offset : group_count - 1 - offset;
    groups[g].push_back(order[i]);
  }
  return groups;
}

}  // namespace

GroupingPattern make_grouping(GroupingStrategy strategy, std::size_t k, const NetworkConfig& config,
                              std::uint64_t seed) {
  const std::size_t m = config.num_users;
  if (k < 1 || k > m) throw std::invalid_argument("group size k must lie in [1, M]");
  const bool gain_based =
      strategy == GroupingStrategy::similar_gain || strategy == GroupingStrategy::dissimilar_gain;
  if (gain_based && m % k != 0) {
    throw std::invalid_argument("gain-based grouping requires k to divide M");
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);

  GroupingPattern pattern;
  pattern.group_size = k;
  pattern.strategy = strategy;
  pattern.seed = seed;

  switch (strategy) {
    case GroupingStrategy::fixed_order:
      pattern.groups = chunk(order, k);
      break;
    case GroupingStrategy::random: {
      Engine engine(derive_seed(seed, {0x67726F7570ULL}));
      for (std::size_t i = m; i > 1; --i) {
        std::swap(order[i - 1], order[uniform_index(engine, i)]);
      }
      pattern.groups = chunk(order, k);
      break;
    }
    case GroupingStrategy::similar_gain:
      pattern.groups = chunk(users_by_mean_gain(config), k);
      break;
    case GroupingStrategy::dissimilar_gain:
      pattern.groups = serpentine(users_by_mean_gain(config), m / k);
      break;
  }
  for (auto& g : pattern.groups) std::sort(g.begin(), g.end());
  return pattern;
}

SlotOutcome schedule_among(std::uint64_t slot_index, std::span<const std::size_t> candidates,
                           const ChannelRealization& ch, const NetworkConfig& config) {
  if (candidates.empty()) throw std::invalid_argument("no candidate users");
  const double p_user = config.user_power();
  const double p_relay = config.relay_power();
  const std::size_t n = ch.num_relays();

  SlotOutcome out;
  out.slot_index = slot_index;
  out.metric_w = -1.0;
  double best_first_hop = -1.0;
  std::size_t best_user = candidates.front();
  std::size_t best_relay = 0;
  for (std::size_t u : candidates) {
    if (u >= ch.num_users()) throw std::out_of_range("candidate user index out of range");
    // The user's own best relay, lowest index on ties.
    double metric = -1.0;
    std::size_t relay = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const double m = std::min(p_user * ch.gain_ur(u, r), p_relay * ch.gain_rb[r]);
      if (m > metric) {
        metric = m;
        relay = r;
      }
    }
    const double first_hop = p_user * ch.gain_ur(u, relay);
    if (user_preferred(metric, first_hop, u, out.metric_w, best_first_hop, best_user)) {
      out.metric_w = metric;
      best_first_hop = first_hop;
      best_user = u;
      best_relay = relay;
    }
  }
  out.scheduled_user = best_user;
  out.selected_relay = best_relay;
  out.outage = out.metric_w < config.decode_level();
  return out;
}

SlotOutcome schedule_fixed_tdma(std::uint64_t slot_index, const ChannelRealization& ch,
                                const NetworkConfig& config) {
  const std::size_t user = static_cast<std::size_t>(slot_index % ch.num_users());
  return schedule_among(slot_index, std::span<const std::size_t>(&user, 1), ch, config);
}

SlotOutcome schedule_greedy(const ChannelRealization& ch, const NetworkConfig& config,
                            std::uint64_t slot_index) {
  std::vector<std::size_t> all(ch.num_users());
  std::iota(all.begin(), all.end(), 0);
  return schedule_among(slot_index, all, ch, config);
}

SlotOutcome schedule_relaxed_tdma(std::uint64_t slot_index, const GroupingPattern& pattern,
                                  const ChannelRealization& ch, const NetworkConfig& config) {
  if (pattern.groups.empty()) throw std::invalid_argument("empty grouping pattern");
  return schedule_among(slot_index, pattern.group_for_slot(slot_index), ch, config);
}

}  // namespace relaysched
