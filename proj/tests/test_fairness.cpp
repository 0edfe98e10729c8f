// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relaysched/fairness.hpp"
#include "support.hpp"

using namespace relaysched;

namespace {

double brute_jain(const std::vector<double>& x) {
  double s = 0.0, s2 = 0.0;
  for (double v : x) {
    s += v;
    s2 += v * v;
  }
  return s * s / (static_cast<double>(x.size()) * s2);
}

}  // namespace

TEST_CASE("Jain index values") {
  CHECK(jain_index(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}) == 0.75);
  for (std::size_t m : {1u, 2u, 7u, 8u, 100u}) {
    CHECK(jain_index(std::vector<double>(m, 0.3)) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> spike(m, 0.0);
    spike[m / 2] = 5.0;
    CHECK(jain_index(spike) == doctest::Approx(1.0 / static_cast<double>(m)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(jain_index(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(jain_index(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(jain_index(std::vector<double>{1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("Jain index properties") {
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> x(1 + i % 12);
    for (auto& v : x) v = testing::uniform(0.0, 3.0);
    const double j = jain_index(x);
    REQUIRE(j > 0.0);
    REQUIRE(j <= 1.0 + 1e-15);
    REQUIRE(j == doctest::Approx(brute_jain(x)).epsilon(1e-12));
    auto scaled = x;
    const double c = testing::uniform(0.01, 100.0);
    for (auto& v : scaled) v *= c;
    REQUIRE(jain_index(scaled) == doctest::Approx(j).epsilon(1e-12));
  }
}

TEST_CASE("worst-case grouping bound") {
  const std::size_t m = 8;
  CHECK(fi_lower_bound(1, m) == 1.0);
  CHECK(fi_lower_bound(m, m) == doctest::Approx(1.0 / m));
  for (std::size_t k : {1u, 2u, 4u, 8u}) {
    std::vector<double> x(m, 0.0);
    for (std::size_t i = 0; i < m / k; ++i) x[i] = static_cast<double>(k) / m;
    CHECK(jain_index(x) == 1.0 / static_cast<double>(k));
    CHECK(fi_lower_bound(k, m) == 1.0 / static_cast<double>(k));
    std::vector<std::uint64_t> slots(m, 0);
    for (std::size_t i = 0; i < m / k; ++i) slots[i] = 1000;
    CHECK(jain_index(slots) == 1.0 / static_cast<double>(k));
  }
  CHECK_THROWS_AS(fi_lower_bound(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(fi_lower_bound(0, 8), std::invalid_argument);
}

TEST_CASE("airtime ledger") {
  AirtimeLedger a(3), b(3);
  for (int i = 0; i < 10; ++i) a.record(i % 2);
  b.record(2);
  a.merge(b);
  CHECK(a.total_slots() == 11);
  std::uint64_t sum = 0;
  for (auto v : a.per_user_slots()) sum += v;
  CHECK(sum == a.total_slots());
  const auto shares = a.shares();
  CHECK(shares[2] == doctest::Approx(1.0 / 11));
  CHECK(AirtimeLedger(4).fairness() == 0.0);
  CHECK_THROWS(a.record(3));
}

TEST_CASE("windowed index on simple streams") {
  const std::size_t m = 5;
  std::vector<std::int32_t> rr;
  for (int i = 0; i < 100; ++i) rr.push_back(i % m);
  for (const auto& w : windowed_fi_series(rr, m, m)) CHECK(w.fi == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<std::int32_t> hog(60, 2);
  for (std::size_t len : {1u, 7u, 33u}) {
    for (const auto& w : windowed_fi_series(hog, m, len)) CHECK(w.fi == doctest::Approx(1.0 / m));
  }
}

TEST_CASE("windowed index matches recomputation from scratch") {
  const std::size_t m = 4;
  std::vector<std::int32_t> seq;
  for (int i = 0; i < 500; ++i) seq.push_back(testing::uniform(0, 1) < 0.1 ? -1 : static_cast<int>(testing::uniform(0, 4)));
  for (std::size_t len : {1u, 3u, 10u, 64u}) {
    const auto series = windowed_fi_series(seq, m, len);
    std::size_t idx = 0;
    for (std::size_t end = len; end <= seq.size(); ++end) {
      std::vector<double> counts(m, 0.0);
      for (std::size_t t = end - len; t < end; ++t) {
        if (seq[t] >= 0) counts[static_cast<std::size_t>(seq[t])] += 1.0;
      }
      double total = 0.0;
      for (double c : counts) total += c;
      if (total == 0.0) continue;
      REQUIRE(idx < series.size());
      CHECK(series[idx].slot_index == end - 1);
      CHECK(series[idx].fi == doctest::Approx(brute_jain(counts)).epsilon(1e-12));
      ++idx;
    }
    CHECK(idx == series.size());
  }
}

TEST_CASE("sliding window object") {
  SlidingAirtimeWindow w(3, 4);
  CHECK_FALSE(w.fairness().has_value());
  w.push(std::nullopt);
  CHECK_FALSE(w.fairness().has_value());
  w.push(0);
  w.push(1);
  CHECK_FALSE(w.full());
  w.push(2);
  CHECK(w.full());
  CHECK(*w.fairness() == doctest::Approx(1.0));
  w.push(0);  // window now 0,1,2,0
  CHECK(*w.fairness() == doctest::Approx(brute_jain({2, 1, 1})));
  CHECK_THROWS_AS(w.push(3), std::out_of_range);
  CHECK_THROWS_AS(SlidingAirtimeWindow(3, 0), std::invalid_argument);
}

TEST_CASE("fixed TDMA delay: every gap is M slots") {
  const std::size_t m = 8;
  const double delta = 0.002;
  DelaySamples d(m);
  d.cover(0, 8000);
  for (std::uint64_t s = 0; s < 8000; ++s) d.record(s % m, s);
  const auto rep = delay_statistics(d, delta);
  CHECK(rep.pooled.mean_s == doctest::Approx(m * delta).epsilon(1e-12));
  CHECK(rep.pooled.variance_s2 == 0.0);
  for (const auto& u : rep.per_user) CHECK(u.gaps == 999);
}

TEST_CASE("geometric gaps reproduce the second-moment series") {
  const std::size_t m = 8;
  const double delta = 0.002;
  for (std::size_t k : {2u, 4u, 8u}) {
    const double p = 1.0 / static_cast<double>(k);
    const double unit = static_cast<double>(m / k);  // slots per round of the user's group

    // Direct summation of sum_i (i * unit * delta)^2 p (1-p)^(i-1).
    double series = 0.0;
    double w = p;
    for (int i = 1; i < 20000; ++i, w *= 1.0 - p) series += (i * unit * delta) * (i * unit * delta) * w;

    DelaySamples d(1);
    std::geometric_distribution<int> geo(p);
    for (int i = 0; i < 400000; ++i) d.add_gap(0, static_cast<std::uint64_t>((geo(testing::rng()) + 1) * unit));
    const auto m2 = delay_statistics(d, delta).pooled;
    const double second = m2.variance_s2 * (static_cast<double>(m2.gaps) - 1) / m2.gaps + m2.mean_s * m2.mean_s;
    CHECK(second == doctest::Approx(series).epsilon(0.03));
    CHECK(series == doctest::Approx((2.0 - p) * m * m * delta * delta).epsilon(1e-9));
  }
}

TEST_CASE("delay samples merge across adjacent ranges") {
  const std::size_t m = 3;
  std::vector<std::pair<std::size_t, std::uint64_t>> events;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    if (testing::uniform(0, 1) < 0.6) events.emplace_back(static_cast<std::size_t>(testing::uniform(0, 3)), s);
  }
  DelaySamples serial(m);
  serial.cover(0, 3000);
  for (auto [u, s] : events) serial.record(u, s);

  const std::uint64_t cuts[] = {0, 700, 701, 2200, 3000};
  std::vector<DelaySamples> parts;
  for (int i = 0; i < 4; ++i) {
    DelaySamples part(m);
    part.cover(cuts[i], cuts[i + 1]);
    for (auto [u, s] : events) {
      if (s >= cuts[i] && s < cuts[i + 1]) part.record(u, s);
    }
    parts.push_back(part);
  }
  DelaySamples forward(m);
  for (const auto& p : parts) forward.merge(p);
  CHECK(forward == serial);

  // A different association and order gives the same samples.
  DelaySamples right = parts[3];
  right.merge(parts[2]);
  DelaySamples left = parts[1];
  left.merge(parts[0]);
  right.merge(left);
  for (std::size_t u = 0; u < m; ++u) {
    CHECK(right.gap_count(u) == serial.gap_count(u));
    CHECK(std::vector<std::uint64_t>(right.histogram(u).begin(), right.histogram(u).end()) ==
          std::vector<std::uint64_t>(serial.histogram(u).begin(), serial.histogram(u).end()));
  }
}

TEST_CASE("delay input checks") {
  DelaySamples d(2);
  d.record(0, 5);
  CHECK_THROWS_AS(d.record(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(d.add_gap(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(delay_statistics(d, 0.0), std::invalid_argument);
  CHECK_FALSE(delay_statistics(d, 1.0).pooled.sufficient);
}
