// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "relaysched/csv.hpp"
#include "relaysched/rng.hpp"

namespace relaysched {

namespace {

constexpr std::uint64_t kFairnessStream = 0x66616972;  // "fair"
constexpr std::uint64_t kProtocolStream = 0x70726f74;  // "prot"

// Runs fn(i) for i in [0, count) on up to `threads` threads.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SlotOutcome schedule(PolicyKind kind, std::uint64_t slot, const GroupingPattern& pattern,
                     const ChannelRealization& ch, const NetworkConfig& config) {
  switch (kind) {
    case PolicyKind::fixed_tdma:
      return schedule_fixed_tdma(slot, ch, config);
    case PolicyKind::greedy:
      return schedule_greedy(ch, config, slot);
    case PolicyKind::relaxed_tdma:
      return schedule_relaxed_tdma(slot, pattern, ch, config);
  }
  throw std::logic_error("unknown policy kind");
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::fixed_tdma:
      return "tdma";
    case PolicyKind::greedy:
      return "greedy";
    case PolicyKind::relaxed_tdma:
      return "relaxed";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "tdma" || name == "fixed_tdma") return PolicyKind::fixed_tdma;
  if (name == "greedy") return PolicyKind::greedy;
  if (name == "relaxed" || name == "relaxed_tdma") return PolicyKind::relaxed_tdma;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected tdma, greedy or relaxed)");
}

std::string PolicyEntry::label() const {
  if (kind != PolicyKind::relaxed_tdma) return std::string(to_string(kind));
  return "relaxed_k" + std::to_string(k) + "_" + std::string(to_string(grouping));
}

std::vector<GroupingPattern> PolicyEntry::groupings(const NetworkConfig& config) const {
  switch (kind) {
    case PolicyKind::fixed_tdma:
      return {make_grouping(GroupingStrategy::fixed_order, 1, config)};
    case PolicyKind::greedy:
      return {make_grouping(GroupingStrategy::fixed_order, config.num_users, config)};
    case PolicyKind::relaxed_tdma:
      break;
  }
  if (patterns == 0) throw std::invalid_argument("a policy needs at least one grouping pattern");
  // Only random grouping changes with the seed.
  const std::size_t count = grouping == GroupingStrategy::random ? patterns : 1;
  std::vector<GroupingPattern> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(make_grouping(grouping, k, config, grouping_seed + i));
  }
  return out;
}

FadingMode FadingSettings::mode(double slot_duration) const {
  if (kind == FadingKind::iid) return FadingMode::iid();
  const double rb = doppler_hz_relay_bs.value_or(doppler_hz);
  return FadingMode::gauss_markov(doppler_to_rho(doppler_hz, slot_duration),
                                  doppler_to_rho(rb, slot_duration));
}

void ExperimentPlan::validate() const {
  config.validate();
  if (snr_db.empty()) throw std::invalid_argument("snr sweep must not be empty");
  for (std::size_t i = 1; i < snr_db.size(); ++i) {
    if (!(snr_db[i] > snr_db[i - 1])) {
      throw std::invalid_argument("snr sweep must be strictly increasing");
    }
  }
  if (policies.empty()) throw std::invalid_argument("at least one policy is required");
  for (const auto& p : policies) {
    if (p.kind == PolicyKind::relaxed_tdma && (p.k < 1 || p.k > config.num_users)) {
      throw std::invalid_argument("relaxed policy group size must lie in [1, M]");
    }
    if (p.patterns == 0) throw std::invalid_argument("patterns must be positive");
  }
  if (trials_per_point < 1000) throw std::invalid_argument("trials_per_point must be at least 1000");
  if (max_trials < trials_per_point) {
    throw std::invalid_argument("max_trials must be at least trials_per_point");
  }
  if (block_size == 0) throw std::invalid_argument("block_size must be positive");
  if (!(fading.doppler_hz >= 0.0) || fading.doppler_hz_relay_bs.value_or(0.0) < 0.0) {
    throw std::invalid_argument("doppler frequency must be nonnegative");
  }
  fading.mode(config.slot_duration).validate();
  if (protocol.vulnerable_window < 0.0 || protocol.pilot_time < 0.0) {
    throw std::invalid_argument("protocol times must be nonnegative");
  }
  if (fairness.slots == 0) throw std::invalid_argument("fairness slots must be positive");
  for (double w : fairness.window_units) {
    if (!(w > 0.0)) throw std::invalid_argument("fairness windows must be positive");
  }
}

WilsonInterval wilson_interval(std::uint64_t events, std::uint64_t trials, double z) {
  if (events > trials) throw std::invalid_argument("events exceed trials");
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(events) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The bounds are exactly 0 and 1 at the extremes; rounding would leave
  // them a hair inside.
  return {events == 0 ? 0.0 : std::max(0.0, centre - half),
          events == trials ? 1.0 : std::min(1.0, centre + half)};
}

MetricsAccumulator::MetricsAccumulator(std::size_t users, bool keep_series)
    : airtime_(users), delays_(users), keep_series_(keep_series) {}

void MetricsAccumulator::record(const SlotOutcome& outcome) {
  ++slot_count_;
  if (outcome.outage) ++outage_count_;
  if (outcome.selected_relay) {
    airtime_.record(outcome.scheduled_user);
    delays_.record(outcome.scheduled_user, outcome.slot_index);
  }
  if (keep_series_) {
    series_.push_back(outcome.selected_relay ? static_cast<std::int32_t>(outcome.scheduled_user)
                                             : -1);
  }
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  if (airtime_.users() == 0 && slot_count_ == 0) {
    *this = other;
    return;
  }
  outage_count_ += other.outage_count_;
  slot_count_ += other.slot_count_;
  airtime_.merge(other.airtime_);
  delays_.merge(other.delays_);
  series_.insert(series_.end(), other.series_.begin(), other.series_.end());
}

double MetricsAccumulator::outage_estimate() const {
  if (slot_count_ == 0) return 0.0;
  return static_cast<double>(outage_count_) / static_cast<double>(slot_count_);
}

WilsonInterval MetricsAccumulator::confidence(double z) const {
  return wilson_interval(outage_count_, slot_count_, z);
}

MetricsAccumulator simulate_block(const ExperimentPlan& plan, const NetworkConfig& config,
                                  PolicyKind kind, const GroupingPattern& pattern,
                                  std::uint64_t seed, std::uint64_t first_slot,
                                  std::uint64_t slots, bool keep_series) {
  MetricsAccumulator acc(config.num_users, keep_series);
  acc.cover(first_slot, first_slot + slots);
  FadingProcess fading(plan.fading.mode(config.slot_duration), seed);
  ChannelRealization ch;
  for (std::uint64_t i = 0; i < slots; ++i) {
    fading.draw_into(config, ch);
    const std::uint64_t slot = first_slot + i;
    if (plan.use_protocol_path) {
      acc.record(run_protocol_slot(slot, pattern, ch, config, plan.protocol).outcome);
    } else {
      acc.record(schedule(kind, slot, pattern, ch, config));
    }
  }
  return acc;
}

PointResult run_point(const ExperimentPlan& plan, std::size_t snr_index, const PolicyEntry& policy,
                      unsigned threads) {
  if (snr_index >= plan.snr_db.size()) throw std::out_of_range("snr index out of range");
  const NetworkConfig config = plan.config.at_snr_db(plan.snr_db[snr_index]);
  const auto patterns = policy.groupings(config);
  const std::size_t np = patterns.size();

  // Every grouping sees the same blocks; the trial budget is shared, so
  // each grouping gets an equal slice of it.
  const std::uint64_t block = std::min(plan.block_size, plan.trials_per_point);
  const std::uint64_t cap_each = (plan.max_trials + np - 1) / np;
  const unsigned wave = std::max(1u, threads);

  std::vector<MetricsAccumulator> per_pattern(np, MetricsAccumulator(config.num_users));
  std::uint64_t slots = 0;
  std::uint64_t events = 0;
  bool cap_hit = false;
  bool done = false;
  for (std::uint64_t next = 0; !done; next += wave) {
    std::vector<MetricsAccumulator> parts(static_cast<std::size_t>(wave) * np);
    parallel_for(parts.size(), threads, [&](std::size_t j) {
      const std::uint64_t b = next + j / np;
      const std::uint64_t first = b * block;
      if (first >= cap_each) return;
      const std::uint64_t count = std::min(block, cap_each - first);
      parts[j] = simulate_block(plan, config, policy.kind, patterns[j % np],
                                derive_seed(plan.base_seed, {snr_index, b}), first, count);
    });
    // Stopping is decided in block order, so blocks of a wave past the stop
    // point are discarded and the thread count never shows in the result.
    for (std::size_t w = 0; w < wave && !done; ++w) {
      if (parts[w * np].slot_count() == 0) {
        done = true;
        break;
      }
      for (std::size_t p = 0; p < np; ++p) {
        const auto& part = parts[w * np + p];
        slots += part.slot_count();
        events += part.outage_count();
        per_pattern[p].merge(part);
      }
      if (per_pattern.front().slot_count() >= cap_each) {
        cap_hit = events < plan.min_outage_events;
        done = true;
      } else if (slots >= plan.trials_per_point && events >= plan.min_outage_events) {
        done = true;
      }
    }
  }

  PointResult point;
  point.snr_db = plan.snr_db[snr_index];
  point.policy = policy.label();
  point.cap_hit = cap_hit;
  point.metrics = MetricsAccumulator(config.num_users);
  double sum = 0.0;
  for (const auto& acc : per_pattern) {
    point.grouping_outages.push_back(acc.outage_estimate());
    sum += acc.outage_estimate();
    point.metrics.merge(acc);
  }
  point.outage = sum / static_cast<double>(np);
  point.ci = point.metrics.confidence();
  point.slots = point.metrics.slot_count();
  point.outage_events = point.metrics.outage_count();
  return point;
}

SweepRow to_row(const PointResult& point, double slot_duration) {
  SweepRow row;
  row.snr_db = point.snr_db;
  row.policy = point.policy;
  row.outage = point.outage;
  row.ci_low = point.ci.low;
  row.ci_high = point.ci.high;
  row.fi_longrun = point.metrics.airtime().fairness();
  const auto delay = delay_statistics(point.metrics.delays(), slot_duration).pooled;
  row.delay_mean = delay.gaps ? delay.mean_s : std::nan("");
  row.delay_var = delay.sufficient ? delay.variance_s2 : std::nan("");
  row.slots = point.slots;
  row.outage_events = point.outage_events;
  row.cap_hit = point.cap_hit;
  return row;
}

std::vector<SweepRow> run_sweep(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  std::vector<SweepRow> rows;
  rows.reserve(plan.snr_db.size() * plan.policies.size());
  for (std::size_t s = 0; s < plan.snr_db.size(); ++s) {
    for (const auto& policy : plan.policies) {
      rows.push_back(to_row(run_point(plan, s, policy, threads), plan.config.slot_duration));
    }
  }
  return rows;
}

double doppler_unit_slots(double doppler_hz, double slot_duration) {
  if (!(doppler_hz > 0.0) || !(slot_duration > 0.0)) {
    throw std::invalid_argument("doppler and slot duration must be positive");
  }
  return 1.0 / (doppler_hz * slot_duration);
}

std::vector<FairnessCurve> run_fairness_experiment(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  if (plan.fading.kind != FadingKind::gauss_markov) {
    throw std::invalid_argument("fairness experiment needs gauss_markov fading");
  }
  const NetworkConfig config = plan.config.at_snr_db(plan.fairness.snr_db);
  const double unit = doppler_unit_slots(plan.fading.doppler_hz, config.slot_duration);
  std::vector<std::size_t> window_slots;
  for (double w : plan.fairness.window_units) {
    window_slots.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w * unit))));
  }
  const std::uint64_t seed = derive_seed(plan.base_seed, {kFairnessStream});

  struct Job {
    std::size_t policy;
    GroupingPattern pattern;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < plan.policies.size(); ++p) {
    for (auto& g : plan.policies[p].groupings(config)) jobs.push_back({p, std::move(g)});
  }

  std::vector<std::vector<double>> job_fi(jobs.size());
  std::vector<double> job_longrun(jobs.size(), 0.0);
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const auto acc = simulate_block(plan, config, plan.policies[jobs[j].policy].kind,
                                    jobs[j].pattern, seed, 0, plan.fairness.slots, true);
    job_longrun[j] = acc.airtime().fairness();
    for (std::size_t w : window_slots) {
      job_fi[j].push_back(mean_windowed_fi(acc.series(), config.num_users, w));
    }
  });

  std::vector<FairnessCurve> curves;
  for (std::size_t p = 0; p < plan.policies.size(); ++p) {
    FairnessCurve c;
    c.policy = plan.policies[p].label();
    c.window_units = plan.fairness.window_units;
    c.window_slots = window_slots;
    c.mean_fi.assign(window_slots.size(), 0.0);
    std::size_t n = 0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].policy != p) continue;
      ++n;
      c.fi_longrun += job_longrun[j];
      for (std::size_t w = 0; w < window_slots.size(); ++w) c.mean_fi[w] += job_fi[j][w];
    }
    c.fi_longrun /= static_cast<double>(n);
    for (double& v : c.mean_fi) v /= static_cast<double>(n);
    curves.push_back(std::move(c));
  }
  return curves;
}

EquivalenceReport compare_protocol_to_centralized(const NetworkConfig& config,
                                                  const GroupingPattern& pattern,
                                                  const ProtocolParams& params, FadingMode mode,
                                                  std::uint64_t seed, std::uint64_t slots,
                                                  std::ostream* trace_log) {
  config.validate();
  if (slots == 0) throw std::invalid_argument("need at least one slot");
  FadingProcess fading(mode, derive_seed(seed, {kProtocolStream}));
  ChannelRealization ch;
  std::vector<ProtocolTrace> traces;
  traces.reserve(slots);
  EquivalenceReport report;
  if (trace_log) *trace_log << trace_csv_header() << '\n';
  for (std::uint64_t s = 0; s < slots; ++s) {
    fading.draw_into(config, ch);
    const auto proto = run_protocol_slot(s, pattern, ch, config, params);
    const auto central = schedule_relaxed_tdma(s, pattern, ch, config);
    if (proto.outcome.scheduled_user != central.scheduled_user ||
        proto.outcome.selected_relay != central.selected_relay) {
      ++report.pair_mismatches;
    }
    if (proto.outcome.outage != central.outage) ++report.outage_mismatches;
    if (proto.outcome.outage) ++report.protocol_outages;
    if (central.outage) ++report.centralized_outages;
    if (trace_log) *trace_log << trace_csv_line(s, proto.trace) << '\n';
    traces.push_back(proto.trace);
  }
  report.slots = slots;
  report.overhead = overhead_report(traces);
  return report;
}

}  // namespace relaysched
