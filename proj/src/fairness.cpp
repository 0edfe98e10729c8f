// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/fairness.hpp"

#include <algorithm>
#include <stdexcept>
#include <type_traits>

namespace relaysched {

namespace {

template <typename T>
double jain_impl(std::span<const T> x) {
  if (x.empty()) throw std::invalid_argument("Jain index of an empty vector");
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (T v : x) {
    if constexpr (std::is_signed_v<T>) {
      if (v < T{0}) throw std::invalid_argument("airtime must be nonnegative");
    }
    const auto lv = static_cast<long double>(v);
    sum += lv;
    sum_sq += lv * lv;
  }
  if (sum_sq == 0.0L) throw std::invalid_argument("Jain index undefined for all-zero airtime");
  return static_cast<double>(sum * sum / (static_cast<long double>(x.size()) * sum_sq));
}

}  // namespace

double jain_index(std::span<const double> airtime) { return jain_impl(airtime); }
double jain_index(std::span<const std::uint64_t> airtime) { return jain_impl(airtime); }

double fi_lower_bound(std::size_t k, std::size_t users) {
  if (k < 1 || k > users) throw std::invalid_argument("group size k must lie in [1, M]");
  if (users % k != 0) throw std::invalid_argument("fairness lower bound requires k to divide M");
  return 1.0 / static_cast<double>(k);
}

void AirtimeLedger::record(std::size_t user) {
  ++per_user_.at(user);
  ++total_;
}

void AirtimeLedger::merge(const AirtimeLedger& other) {
  if (per_user_.empty()) per_user_.assign(other.per_user_.size(), 0);
  if (other.per_user_.size() != per_user_.size()) {
    throw std::invalid_argument("cannot merge ledgers of different user counts");
  }
  for (std::size_t u = 0; u < per_user_.size(); ++u) per_user_[u] += other.per_user_[u];
  total_ += other.total_;
}

std::vector<double> AirtimeLedger::shares() const {
  std::vector<double> out(per_user_.size(), 0.0);
  if (total_ == 0) return out;
  for (std::size_t u = 0; u < out.size(); ++u) {
    out[u] = static_cast<double>(per_user_[u]) / static_cast<double>(total_);
  }
  return out;
}

double AirtimeLedger::fairness() const {
  if (total_ == 0) return 0.0;
  return jain_index(std::span<const std::uint64_t>(per_user_));
}

SlidingAirtimeWindow::SlidingAirtimeWindow(std::size_t users, std::size_t window_length)
    : users_(users), window_length_(window_length), ring_(window_length, -1), counts_(users, 0) {
  if (users == 0) throw std::invalid_argument("window needs at least one user");
  if (window_length == 0) throw std::invalid_argument("window length must be positive");
}

void SlidingAirtimeWindow::add(std::size_t user, int delta) {
  const std::uint64_t c = counts_[user];
  if (delta > 0) {
    sum_sq_ += 2 * c + 1;
    ++counts_[user];
    ++sum_;
  } else {
    sum_sq_ -= 2 * c - 1;
    --counts_[user];
    --sum_;
  }
}

void SlidingAirtimeWindow::push(std::optional<std::size_t> user) {
  const std::size_t pos = static_cast<std::size_t>(seen_ % window_length_);
  if (ring_[pos] >= 0) add(static_cast<std::size_t>(ring_[pos]), -1);
  if (user) {
    if (*user >= users_) throw std::out_of_range("user index out of range");
    add(*user, +1);
    ring_[pos] = static_cast<std::int64_t>(*user);
  } else {
    ring_[pos] = -1;
  }
  ++seen_;
}

std::optional<double> SlidingAirtimeWindow::fairness() const {
  if (sum_ == 0) return std::nullopt;
  const auto s = static_cast<long double>(sum_);
  return static_cast<double>(s * s /
                             (static_cast<long double>(users_) * static_cast<long double>(sum_sq_)));
}

std::vector<WindowedFi> windowed_fi_series(std::span<const std::int32_t> user_per_slot,
                                           std::size_t users, std::size_t window_length) {
  SlidingAirtimeWindow window(users, window_length);
  std::vector<WindowedFi> out;
  for (std::size_t i = 0; i < user_per_slot.size(); ++i) {
    const auto u = user_per_slot[i];
    window.push(u >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(u)) : std::nullopt);
    if (!window.full()) continue;
    if (auto fi = window.fairness()) out.push_back({i, *fi});
  }
  return out;
}

double mean_windowed_fi(std::span<const std::int32_t> user_per_slot, std::size_t users,
                        std::size_t window_length) {
  SlidingAirtimeWindow window(users, window_length);
  long double sum = 0.0L;
  std::uint64_t n = 0;
  for (auto u : user_per_slot) {
    window.push(u >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(u)) : std::nullopt);
    if (!window.full()) continue;
    if (auto fi = window.fairness()) {
      sum += *fi;
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("no full window with a transmission");
  return static_cast<double>(sum / static_cast<long double>(n));
}

DelaySamples::DelaySamples(std::size_t users)
    : histograms_(users), counts_(users, 0), first_(users), last_(users) {}

void DelaySamples::cover(std::uint64_t begin, std::uint64_t end) {
  if (end < begin) throw std::invalid_argument("slot range end precedes begin");
  range_ = std::pair{begin, end};
}

void DelaySamples::add_gap(std::size_t user, std::uint64_t gap, std::uint64_t count) {
  if (gap < 1) throw std::invalid_argument("access delay gap must be at least one slot");
  auto& h = histograms_.at(user);
  if (h.size() <= gap) h.resize(gap + 1, 0);
  h[gap] += count;
  counts_[user] += count;
}

void DelaySamples::record(std::size_t user, std::uint64_t slot) {
  auto& last = last_.at(user);
  if (last) {
    if (slot <= *last) throw std::invalid_argument("transmission slots must increase");
    add_gap(user, slot - *last);
  } else {
    first_[user] = slot;
  }
  last = slot;
}

void DelaySamples::merge(const DelaySamples& other) {
  const bool blank = !range_ && std::none_of(first_.begin(), first_.end(),
                                             [](const auto& f) { return f.has_value(); }) &&
                     std::all_of(counts_.begin(), counts_.end(), [](auto c) { return c == 0; });
  if (blank && (histograms_.empty() || other.users() == users())) {
    *this = other;
    return;
  }
  if (other.users() != users()) {
    throw std::invalid_argument("cannot merge delay samples of different user counts");
  }

  const DelaySamples* earlier = nullptr;
  const DelaySamples* later = nullptr;
  if (range_ && other.range_) {
    if (range_->second == other.range_->first) {
      earlier = this;
      later = &other;
    } else if (other.range_->second == range_->first) {
      earlier = &other;
      later = this;
    }
  }

  std::vector<std::optional<std::uint64_t>> bridge(users());
  if (earlier != nullptr) {
    for (std::size_t u = 0; u < users(); ++u) {
      if (earlier->last_[u] && later->first_[u]) bridge[u] = *later->first_[u] - *earlier->last_[u];
    }
  }

  for (std::size_t u = 0; u < users(); ++u) {
    const auto& oh = other.histograms_[u];
    for (std::size_t g = 1; g < oh.size(); ++g) {
      if (oh[g] != 0) add_gap(u, g, oh[g]);
    }
    if (bridge[u]) add_gap(u, *bridge[u]);
    if (other.first_[u] && (!first_[u] || *other.first_[u] < *first_[u])) first_[u] = other.first_[u];
    if (other.last_[u] && (!last_[u] || *other.last_[u] > *last_[u])) last_[u] = other.last_[u];
  }

  if (earlier != nullptr) {
    range_ = std::pair{earlier->range_->first, later->range_->second};
  } else {
    range_.reset();
  }
}

namespace {

DelayMoments moments(long double n, long double sum, long double sum_sq, double slot_duration) {
  DelayMoments m;
  m.gaps = static_cast<std::uint64_t>(n);
  m.sufficient = n >= 2.0L;
  if (n >= 1.0L) m.mean_s = static_cast<double>(sum / n) * slot_duration;
  if (n >= 2.0L) {
    const long double var_slots = (sum_sq - sum * sum / n) / (n - 1.0L);
    m.variance_s2 = static_cast<double>(var_slots) * slot_duration * slot_duration;
  }
  return m;
}

}  // namespace

DelayReport delay_statistics(const DelaySamples& samples, double slot_duration) {
  if (!(slot_duration > 0.0)) throw std::invalid_argument("slot duration must be positive");
  DelayReport report;
  long double pn = 0.0L;
  long double psum = 0.0L;
  long double psq = 0.0L;
  for (std::size_t u = 0; u < samples.users(); ++u) {
    long double n = 0.0L;
    long double sum = 0.0L;
    long double sq = 0.0L;
    const auto h = samples.histogram(u);
    for (std::size_t g = 1; g < h.size(); ++g) {
      const auto c = static_cast<long double>(h[g]);
      const auto lg = static_cast<long double>(g);
      n += c;
      sum += c * lg;
      sq += c * lg * lg;
    }
    report.per_user.push_back(moments(n, sum, sq, slot_duration));
    pn += n;
    psum += sum;
    psq += sq;
  }
  report.pooled = moments(pn, psum, psq, slot_duration);
  return report;
}

}  // namespace relaysched
