// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/network.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace relaysched {

GainMatrix GainMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  GainMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw std::invalid_argument("gain matrix rows have unequal length");
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

double GainMatrix::row_mean(std::size_t r) const {
  auto v = row(r);
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void NetworkConfig::validate() const {
  require(num_users > 0, "num_users must be positive");
  require(num_relays > 0, "num_relays must be positive");
  require(mean_gain_ur.rows() == num_users && mean_gain_ur.cols() == num_relays,
          "mean_gain_ur must be num_users x num_relays");
  require(mean_gain_rb.size() == num_relays, "mean_gain_rb must have num_relays entries");
  for (double g : mean_gain_ur.values()) {
    require(positive_finite(g), "mean_gain_ur entries must be positive");
  }
  for (double g : mean_gain_rb) {
    require(positive_finite(g), "mean_gain_rb entries must be positive");
  }
  require(positive_finite(total_power), "total_power must be positive");
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
          "alpha must lie in the open interval (0,1)");
  require(positive_finite(noise_power), "noise_power must be positive");
  require(positive_finite(snr_threshold), "snr_threshold must be positive");
  require(positive_finite(slot_duration), "slot_duration must be positive");
}

NetworkConfig NetworkConfig::at_snr(double snr_linear) const {
  NetworkConfig copy = *this;
  copy.total_power = snr_linear * noise_power;
  return copy;
}

NetworkConfig NetworkConfig::at_snr_db(double snr_db) const {
  return at_snr(db_to_linear(snr_db));
}

NetworkConfig symmetric_network(std::size_t users, std::size_t relays, double sigma) {
  NetworkConfig c;
  c.num_users = users;
  c.num_relays = relays;
  c.mean_gain_ur = GainMatrix(users, relays, sigma);
  c.mean_gain_rb.assign(relays, sigma);
  return c;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace relaysched
