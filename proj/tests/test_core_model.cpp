// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <numbers>

#include "relaysched/fading.hpp"
#include "relaysched/network.hpp"
#include "support.hpp"

using namespace relaysched;

TEST_CASE("network config validation") {
  auto c = symmetric_network(4, 3);
  CHECK_NOTHROW(c.validate());

  auto bad = c;
  bad.alpha = 1.2;
  try {
    bad.validate();
    FAIL("alpha = 1.2 accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
  }

  bad = c;
  bad.mean_gain_ur(1, 2) = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.mean_gain_rb[0] = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.mean_gain_rb.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.num_users = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("power split adds up to the total") {
  for (int i = 0; i < 1000; ++i) {
    auto c = symmetric_network(2, 2);
    c.alpha = testing::uniform(1e-6, 1.0 - 1e-6);
    c.total_power = testing::uniform(0.01, 1e4);
    const double sum = c.user_power() + c.relay_power();
    CHECK(std::abs(sum - c.total_power) <= std::nextafter(c.total_power, 2 * c.total_power) - c.total_power);
  }
}

TEST_CASE("snr conversion") {
  const auto c = symmetric_network(2, 2).at_snr_db(20.0);
  CHECK(c.snr() == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(linear_to_db(db_to_linear(7.3)) == doctest::Approx(7.3).epsilon(1e-14));
  auto n2 = symmetric_network(2, 2);
  n2.noise_power = 2.0;
  CHECK(n2.at_snr(5.0).total_power == doctest::Approx(10.0));
}

TEST_CASE("gain matrix helpers") {
  const auto g = GainMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(g.rows() == 2);
  CHECK(g.cols() == 3);
  CHECK(g(1, 2) == 6.0);
  CHECK(g.row_mean(0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(GainMatrix::from_rows({{1, 2}, {3}}), std::invalid_argument);
}

TEST_CASE("doppler_to_rho against the J0 power series") {
  CHECK(doppler_to_rho(0.0, 0.002) == 1.0);
  CHECK(doppler_to_rho(0.0, 123.0) == 1.0);
  const double x = 2.0 * std::numbers::pi * 15.0 * 0.002;
  CHECK(doppler_to_rho(15.0, 0.002) == doctest::Approx(testing::bessel_j0_series(x)).epsilon(1e-13));
  CHECK(doppler_to_rho(15.0, 0.002) == doctest::Approx(0.99114).epsilon(1e-5));
  for (double fd : {1.0, 10.0, 50.0, 120.0, 300.0}) {
    const double arg = 2.0 * std::numbers::pi * fd * 0.002;
    CHECK(doppler_to_rho(fd, 0.002) == doctest::Approx(testing::bessel_j0_series(arg)).epsilon(1e-12));
  }

  // First zero of J0, located by bisection on the series.
  double lo = 2.0;
  double hi = 3.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (testing::bessel_j0_series(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(2.4048).epsilon(1e-4));
  const double slot = 1.0;
  const double f_at_zero = lo / (2.0 * std::numbers::pi * slot);
  CHECK(std::abs(doppler_to_rho(f_at_zero, slot)) < 1e-4);
}

TEST_CASE("fading mode validation") {
  CHECK_NOTHROW(FadingMode::gauss_markov(1.0).validate());
  CHECK_NOTHROW(FadingMode::gauss_markov(-0.5).validate());
  CHECK_THROWS_AS(FadingMode::gauss_markov(1.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(FadingMode::gauss_markov(-1.0).validate(), std::invalid_argument);
}

TEST_CASE("iid fading: per-link sample means") {
  const auto c = symmetric_network(2, 2);
  FadingProcess p(FadingMode::iid(), 7);
  std::vector<double> sums(6, 0.0);
  const int draws = 1000000;
  ChannelRealization ch;
  for (int i = 0; i < draws; ++i) {
    p.draw_into(c, ch);
    for (std::size_t k = 0; k < 4; ++k) sums[k] += ch.gain_ur.values()[k];
    sums[4] += ch.gain_rb[0];
    sums[5] += ch.gain_rb[1];
  }
  for (double s : sums) {
    CHECK(s / draws >= 0.99);
    CHECK(s / draws <= 1.01);
  }
}

TEST_CASE("marginals are exponential with the configured mean (KS)") {
  auto c = symmetric_network(1, 2);
  c.mean_gain_ur(0, 1) = 2.5;
  c.mean_gain_rb[0] = 0.4;
  const std::size_t n = 100000;
  for (auto mode : {FadingMode::iid(), FadingMode::gauss_markov(0.9)}) {
    FadingProcess p(mode, 11);
    std::vector<double> a, b;
    // Thin the correlated chain so the samples are close to independent.
    const int stride = mode.kind == FadingKind::iid ? 1 : 200;
    for (std::size_t i = 0; i < n; ++i) {
      ChannelRealization ch;
      for (int s = 0; s < stride; ++s) ch = p.draw(c);
      a.push_back(ch.gain_ur(0, 1));
      b.push_back(ch.gain_rb[0]);
    }
    CHECK(testing::ks_exponential(a, 2.5) < testing::ks_critical_1pct(n));
    CHECK(testing::ks_exponential(b, 0.4) < testing::ks_critical_1pct(n));
  }
}

TEST_CASE("rho = 0 reproduces iid statistics") {
  const auto c = symmetric_network(1, 1);
  auto moments = [&](FadingMode mode) {
    FadingProcess p(mode, 99);
    double s = 0.0, s2 = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double g = p.draw(c).gain_ur(0, 0);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    return std::pair{mean, s2 / n - mean * mean};
  };
  const auto [m_iid, v_iid] = moments(FadingMode::iid());
  const auto [m_gm, v_gm] = moments(FadingMode::gauss_markov(0.0));
  CHECK(m_gm == doctest::Approx(m_iid).epsilon(0.01));
  CHECK(v_gm == doctest::Approx(v_iid).epsilon(0.01));
}

TEST_CASE("gauss-markov lag-one autocorrelation") {
  const auto c = symmetric_network(1, 1);
  FadingProcess p(FadingMode::gauss_markov(0.9), 5);
  p.draw(c);
  std::complex<double> prev = p.coefficient_ur(0, 0);
  std::complex<double> cross{};
  double power = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    p.draw(c);
    const auto h = p.coefficient_ur(0, 0);
    cross += h * std::conj(prev);
    power += std::norm(prev);
    prev = h;
  }
  const double rho_hat = cross.real() / power;
  CHECK(rho_hat == doctest::Approx(0.9).epsilon(0.01 / 0.9));
  CHECK(std::abs(cross.imag() / power) < 0.01);
}

TEST_CASE("fading is deterministic per seed and stream-split per link") {
  const auto small = symmetric_network(2, 2);
  const auto large = symmetric_network(4, 3);
  for (auto mode : {FadingMode::iid(), FadingMode::gauss_markov(0.95)}) {
    FadingProcess a(mode, 42), b(mode, 42), c(mode, 43), big(mode, 42);
    bool any_diff = false;
    for (int i = 0; i < 1000; ++i) {
      const auto ra = a.draw(small);
      const auto rb = b.draw(small);
      const auto rc = c.draw(small);
      const auto rbig = big.draw(large);
      REQUIRE(ra == rb);
      any_diff = any_diff || !(ra == rc);
      // Shared links carry the same stream in the larger network.
      for (std::size_t u = 0; u < 2; ++u) {
        for (std::size_t r = 0; r < 2; ++r) REQUIRE(ra.gain_ur(u, r) == rbig.gain_ur(u, r));
      }
      REQUIRE(ra.gain_rb[1] == rbig.gain_rb[1]);
    }
    CHECK(any_diff);
  }
}

TEST_CASE("fading process rejects a change of dimensions") {
  FadingProcess p(FadingMode::iid(), 1);
  p.draw(symmetric_network(2, 2));
  CHECK_THROWS(p.draw(symmetric_network(3, 2)));
}

TEST_CASE("gains scale with the mean and stay nonnegative") {
  auto c = testing::random_config(3, 4, 0.1, 3.0);
  FadingProcess p(FadingMode::gauss_markov(0.7), 3);
  for (int i = 0; i < 10000; ++i) {
    const auto ch = p.draw(c);
    for (double g : ch.gain_ur.values()) REQUIRE(g >= 0.0);
    for (double g : ch.gain_rb) REQUIRE(g >= 0.0);
  }
}
