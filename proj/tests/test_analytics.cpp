// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relaysched/analytics.hpp"
#include "support.hpp"

using namespace relaysched;

namespace {

std::vector<double> db_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double x = lo; x <= hi + 1e-9; x += step) g.push_back(x);
  return g;
}

}  // namespace

TEST_CASE("single user, single relay hand value") {
  const auto c = symmetric_network(1, 1);
  const double expected = 1.0 - std::exp(-0.4);
  CHECK(outage_exact(c, 30.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(0.32968).epsilon(1e-5));

  // Monte Carlo cross-check with an independent sampler.
  int outages = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double w = std::min(15.0 * testing::expo(1.0), 15.0 * testing::expo(1.0));
    outages += w < 3.0;
  }
  const double p = static_cast<double>(outages) / n;
  CHECK(std::abs(p - expected) < 4.0 * std::sqrt(expected * (1 - expected) / n));
}

TEST_CASE("exact outage matches the per-relay conditioning oracle") {
  for (int i = 0; i < 500; ++i) {
    const auto c = testing::random_config(1 + i % 9, 1 + i % 6, 0.1, 3.0);
    const double eta = std::pow(10.0, testing::uniform(-1.0, 4.0));
    const double oracle = testing::greedy_outage_oracle(c, eta);
    REQUIRE(outage_exact(c, eta) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("limits in eta") {
  const auto c = testing::random_config(4, 3);
  CHECK(outage_exact(c, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(outage_exact(c, 1e12) < 1e-30);
  CHECK(outage_tdma(c, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(outage_exact(c, 0.0), std::invalid_argument);
}

TEST_CASE("lower bound") {
  const auto sym = symmetric_network(64, 3);
  for (double db : db_grid(-5.0, 30.0, 0.5)) {
    const double eta = db_to_linear(db);
    const double bound = outage_lower_bound(sym, eta);
    if (bound < 1e-2 || bound > 0.5) continue;
    CHECK(std::abs(outage_exact(sym, eta) - bound) / bound < 1e-3);
  }

  auto c = testing::random_config(5, 4);
  auto perturbed = c;
  for (auto& g : perturbed.mean_gain_ur.values()) g *= testing::uniform(0.1, 10.0);
  for (double eta : {0.5, 3.0, 100.0, 1e5}) CHECK(outage_lower_bound(c, eta) == outage_lower_bound(perturbed, eta));

  const auto near_one = outage_lower_bound(c.mean_gain_rb, 1.0 - 1e-12, c.snr_threshold, 10.0);
  CHECK(near_one == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("TDMA outage") {
  const auto c = testing::random_config(1, 4);
  for (double eta : {1.0, 10.0, 300.0}) {
    double prod = 1.0;
    for (std::size_t r = 0; r < 4; ++r) {
      prod *= 1.0 - std::exp(-c.snr_threshold / eta *
                             (1.0 / (c.alpha * c.mean_gain_ur(0, r)) + 1.0 / ((1.0 - c.alpha) * c.mean_gain_rb[r])));
    }
    CHECK(outage_tdma(c, eta) == doctest::Approx(prod).epsilon(1e-12));
    CHECK(outage_user_tdma(c, 0, eta) == doctest::Approx(prod).epsilon(1e-12));
  }

  for (double alpha : {0.3, 0.5, 0.8}) {
    auto s = symmetric_network(6, 3, 1.7);
    s.alpha = alpha;
    for (double eta : {2.0, 20.0, 2000.0}) {
      const double closed = std::pow(1.0 - std::exp(-3.0 / (alpha * (1 - alpha) * eta * 1.7)), 3);
      CHECK(outage_tdma(s, eta) == doctest::Approx(closed).epsilon(1e-12));
      CHECK(outage_symmetric_tdma(3, alpha, 3.0, 1.7, eta) == doctest::Approx(closed).epsilon(1e-12));
      const double bound = std::pow(1.0 - std::exp(-3.0 / ((1 - alpha) * eta * 1.7)), 3);
      CHECK(outage_symmetric_bound(3, alpha, 3.0, 1.7, eta) == doctest::Approx(bound).epsilon(1e-12));
    }
  }
}

TEST_CASE("relaxed TDMA degenerates to TDMA and greedy") {
  const auto c = testing::random_config(6, 3);
  const auto k1 = make_grouping(GroupingStrategy::fixed_order, 1, c);
  const auto k6 = make_grouping(GroupingStrategy::fixed_order, 6, c);
  for (double eta : {1.0, 30.0, 1e3}) {
    CHECK(outage_relaxed_tdma(c, k1, eta) == doctest::Approx(outage_tdma(c, eta)).epsilon(1e-13));
    CHECK(outage_relaxed_tdma(c, k6, eta) == doctest::Approx(outage_exact(c, eta)).epsilon(1e-13));
  }
}

TEST_CASE("high-SNR form") {
  // Symmetric N = 2, single user: within 5% of the exact value once the
  // exact outage is below 1e-2.
  const auto c = symmetric_network(1, 2);
  for (double db : db_grid(0.0, 60.0, 0.5)) {
    const double eta = db_to_linear(db);
    const double exact = outage_exact(c, eta);
    if (exact >= 1e-2) continue;
    CHECK(std::abs(outage_high_snr(c, eta) - exact) / exact < 0.05);
  }

  // Asymptotic agreement with the exact value, eta doubling until within 1%.
  for (int i = 0; i < 20; ++i) {
    const auto r = testing::random_config(1 + i % 4, 1 + i % 3);
    double eta = 10.0;
    bool converged = false;
    for (int step = 0; step < 60 && !converged; ++step, eta *= 2.0) {
      converged = std::abs(outage_high_snr(r, eta) / outage_exact(r, eta) - 1.0) < 0.01;
    }
    CHECK(converged);
  }
}

TEST_CASE("leading-order limit") {
  const auto m1 = testing::random_config(1, 3);
  const auto m4 = testing::random_config(4, 3);
  const double eta = 1e7;
  double p1 = 1.0, p4 = 1.0;
  for (std::size_t r = 0; r < 3; ++r) {
    p1 *= m1.snr_threshold / ((1 - m1.alpha) * m1.mean_gain_rb[r]) + m1.snr_threshold / (m1.alpha * m1.mean_gain_ur(0, r));
    p4 *= m4.snr_threshold / ((1 - m4.alpha) * m4.mean_gain_rb[r]);
  }
  p1 /= eta * eta * eta;
  p4 /= eta * eta * eta;
  CHECK(outage_asymptotic(m1, eta) == doctest::Approx(p1).epsilon(1e-12));
  CHECK(outage_asymptotic(m4, eta) == doctest::Approx(p4).epsilon(1e-12));
  CHECK(outage_high_snr(m4, eta) / p4 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(outage_high_snr(m1, eta) / p1 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("two-user high-SNR form") {
  CHECK(outage_two_user_highsnr(std::vector<double>{1.0}, 0.5, 3.0, 600.0) == doctest::Approx(0.01).epsilon(1e-15));
  const auto c = testing::random_config(2, 4);
  double prev = 10.0;
  for (double eta = 1e2; eta < 1e9; eta *= 10.0) {
    const double ratio = outage_two_user_highsnr(c, eta) / outage_lower_bound(c, eta);
    CHECK(std::abs(ratio - 1.0) < prev);
    prev = std::abs(ratio - 1.0);
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("diversity order fit") {
  std::vector<double> snr_db{10, 15, 20, 25, 30};
  const auto law = make_curve("law", snr_db, [](double eta) { return 7.0 * std::pow(eta, -3.0); });
  CHECK(estimate_diversity_order(law, 1e-300, 1.0) == doctest::Approx(3.0).epsilon(1e-9));

  auto c = testing::random_config(8, 5);
  c.alpha = 0.5;
  const auto grid = db_grid(0.0, 120.0, 0.25);
  const auto greedy = make_curve("greedy", grid, [&](double eta) { return outage_exact(c, eta); });
  const auto tdma = make_curve("tdma", grid, [&](double eta) { return outage_tdma(c, eta); });
  const double dg = estimate_diversity_order(greedy);
  const double dt = estimate_diversity_order(tdma);
  CHECK(dg >= 4.7);
  CHECK(dg <= 5.3);
  CHECK(dt >= 4.7);
  CHECK(dt <= 5.3);
  CHECK_THROWS_AS(estimate_diversity_order(law, 1e-3, 1e-2), std::invalid_argument);
}

TEST_CASE("power gap") {
  CHECK(power_gap_db(0.5) == doctest::Approx(3.0103).epsilon(1e-5));
  CHECK(power_gap_db(0.8) == doctest::Approx(0.9691).epsilon(1e-4));
  CHECK(std::abs(power_gap_db(1.0 - 1e-12)) < 1e-10);

  const auto grid = db_grid(0.0, 40.0, 0.25);
  const auto tdma = make_curve("tdma", grid, [](double eta) { return outage_symmetric_tdma(5, 0.5, 3.0, 1.0, eta); });
  const auto bound = make_curve("bound", grid, [](double eta) { return outage_symmetric_bound(5, 0.5, 3.0, 1.0, eta); });
  CHECK(std::abs(measure_gap_db(tdma, bound, 1e-4) - 3.0103) < 0.1);
  CHECK(measure_gap_db(tdma, tdma, 1e-4) == 0.0);

  // The same curve shifted by a factor of two in eta.
  const auto shifted = make_curve("shifted", grid, [](double eta) { return outage_symmetric_tdma(5, 0.5, 3.0, 1.0, eta / 2.0); });
  CHECK(measure_gap_db(shifted, tdma, 1e-4) == doctest::Approx(3.0103).epsilon(1e-3));
  CHECK_THROWS_AS(crossing_snr(tdma, 1e-30), std::invalid_argument);
}

TEST_CASE("consistency ladder, monotonicity and range") {
  for (int i = 0; i < 300; ++i) {
    const std::size_t m = 1 + i % 8;
    const std::size_t n = 1 + i % 5;
    auto c = testing::random_config(m, n, 0.2, 2.5);
    const double eta = std::pow(10.0, testing::uniform(-0.5, 3.5));
    const double lb = outage_lower_bound(c, eta);
    const double ex = outage_exact(c, eta);
    const double td = outage_tdma(c, eta);
    REQUIRE(lb <= ex * (1 + 1e-12));
    REQUIRE(ex <= td * (1 + 1e-12));
    for (double v : {lb, ex, td}) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
    // The expansion is only a probability once every per-link term is small.
    const double hs_eta = eta * 100.0 * c.snr_threshold / (std::min(c.alpha, 1.0 - c.alpha) * 0.2);
    REQUIRE(outage_high_snr(c, hs_eta) >= 0.0);
    REQUIRE(outage_high_snr(c, hs_eta) <= 1.0);
    REQUIRE(outage_exact(c, eta * 1.5) <= ex);
    REQUIRE(outage_tdma(c, eta * 1.5) <= td);

    // One more user (any gains) never hurts greedy.
    auto more = c;
    more.num_users = m + 1;
    more.mean_gain_ur = GainMatrix(m + 1, n);
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t r = 0; r < n; ++r) more.mean_gain_ur(u, r) = c.mean_gain_ur(u, r);
    }
    for (std::size_t r = 0; r < n; ++r) more.mean_gain_ur(m, r) = testing::uniform(0.2, 2.5);
    REQUIRE(outage_exact(more, eta) <= ex * (1 + 1e-12));

    // One more relay never hurts greedy or TDMA.
    auto wider = c;
    wider.num_relays = n + 1;
    wider.mean_gain_ur = GainMatrix(m, n + 1);
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t r = 0; r <= n; ++r) {
        wider.mean_gain_ur(u, r) = r < n ? c.mean_gain_ur(u, r) : testing::uniform(0.2, 2.5);
      }
    }
    wider.mean_gain_rb.push_back(testing::uniform(0.2, 2.5));
    REQUIRE(outage_exact(wider, eta) <= ex * (1 + 1e-12));
    REQUIRE(outage_tdma(wider, eta) <= td * (1 + 1e-12));
  }
}

TEST_CASE("small-x stability") {
  CHECK(one_minus_exp_neg(1e-20) == 1e-20);
  const auto c = symmetric_network(2, 2);
  CHECK(outage_exact(c, 1e15) > 0.0);
}
