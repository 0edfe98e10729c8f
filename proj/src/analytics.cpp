// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/analytics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace relaysched {

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("SNR must be positive");
}

std::vector<std::size_t> all_users(const NetworkConfig& config) {
  std::vector<std::size_t> users(config.num_users);
  std::iota(users.begin(), users.end(), 0);
  return users;
}

}  // namespace

double outage_exact_users(const NetworkConfig& config, std::span<const std::size_t> users,
                          double eta) {
  check_eta(eta);
  if (users.empty()) throw std::invalid_argument("outage needs at least one user");
  const double tau = config.snr_threshold;
  const double a = config.alpha;
  double out = 1.0;
  for (std::size_t r = 0; r < config.num_relays; ++r) {
    // Per relay: P[min(max_u P_user g_ur, P_relay g_rB) < tau N0]
    //   = 1 - (1 - prod_u F_ur) * exp(-y) = (1 - exp(-y)) + prod_u F_ur * exp(-y)
    double first_hop = 1.0;
    for (std::size_t u : users) {
      first_hop *= one_minus_exp_neg(tau / (a * eta * config.mean_gain_ur(u, r)));
    }
    const double y = tau / ((1.0 - a) * eta * config.mean_gain_rb[r]);
    out *= one_minus_exp_neg(y) + first_hop * std::exp(-y);
  }
  return out;
}

double outage_exact(const NetworkConfig& config, double eta) {
  const auto users = all_users(config);
  return outage_exact_users(config, users, eta);
}

double outage_relaxed_tdma(const NetworkConfig& config, const GroupingPattern& pattern,
                           double eta) {
  if (pattern.groups.empty()) throw std::invalid_argument("empty grouping pattern");
  double sum = 0.0;
  for (const auto& g : pattern.groups) sum += outage_exact_users(config, g, eta);
  return sum / static_cast<double>(pattern.groups.size());
}

double outage_lower_bound(std::span<const double> relay_means, double alpha, double tau,
                          double eta) {
  check_eta(eta);
  double out = 1.0;
  for (double omega : relay_means) out *= one_minus_exp_neg(tau / ((1.0 - alpha) * eta * omega));
  return out;
}

double outage_lower_bound(const NetworkConfig& config, double eta) {
  return outage_lower_bound(config.mean_gain_rb, config.alpha, config.snr_threshold, eta);
}

double outage_user_tdma(const NetworkConfig& config, std::size_t user, double eta) {
  check_eta(eta);
  if (user >= config.num_users) throw std::out_of_range("user index out of range");
  const double tau = config.snr_threshold;
  const double a = config.alpha;
  double out = 1.0;
  for (std::size_t r = 0; r < config.num_relays; ++r) {
    const double x = (tau / eta) * (1.0 / (a * config.mean_gain_ur(user, r)) +
                                    1.0 / ((1.0 - a) * config.mean_gain_rb[r]));
    out *= one_minus_exp_neg(x);
  }
  return out;
}

double outage_tdma(const NetworkConfig& config, double eta) {
  double sum = 0.0;
  for (std::size_t u = 0; u < config.num_users; ++u) sum += outage_user_tdma(config, u, eta);
  return sum / static_cast<double>(config.num_users);
}

double outage_high_snr(const NetworkConfig& config, double eta) {
  check_eta(eta);
  const double tau = config.snr_threshold;
  const double a = config.alpha;
  double out = 1.0;
  for (std::size_t r = 0; r < config.num_relays; ++r) {
    const double relay_term = tau / ((1.0 - a) * config.mean_gain_rb[r] * eta);
    double user_term = 1.0;  // prod_u tau / (alpha W_ur eta)
    for (std::size_t u = 0; u < config.num_users; ++u) {
      user_term *= tau / (a * config.mean_gain_ur(u, r) * eta);
    }
    out *= relay_term + user_term - user_term * relay_term;
  }
  return out;
}

double outage_asymptotic(const NetworkConfig& config, double eta) {
  check_eta(eta);
  const double tau = config.snr_threshold;
  const double a = config.alpha;
  double out = 1.0;
  for (std::size_t r = 0; r < config.num_relays; ++r) {
    double coeff = tau / ((1.0 - a) * config.mean_gain_rb[r]);
    if (config.num_users == 1) coeff += tau / (a * config.mean_gain_ur(0, r));
    out *= coeff / eta;
  }
  return out;
}

double outage_two_user_highsnr(std::span<const double> relay_means, double alpha, double tau,
                               double eta) {
  check_eta(eta);
  double out = 1.0;
  for (double omega : relay_means) out *= tau / ((1.0 - alpha) * omega * eta);
  return out;
}

double outage_two_user_highsnr(const NetworkConfig& config, double eta) {
  return outage_two_user_highsnr(config.mean_gain_rb, config.alpha, config.snr_threshold, eta);
}

double outage_symmetric_tdma(std::size_t relays, double alpha, double tau, double sigma,
                             double eta) {
  check_eta(eta);
  const double x = tau / (alpha * (1.0 - alpha) * eta * sigma);
  return std::pow(one_minus_exp_neg(x), static_cast<double>(relays));
}

double outage_symmetric_bound(std::size_t relays, double alpha, double tau, double sigma,
                              double eta) {
  check_eta(eta);
  const double x = tau / ((1.0 - alpha) * eta * sigma);
  return std::pow(one_minus_exp_neg(x), static_cast<double>(relays));
}

OutageCurve make_curve(std::string label, std::span<const double> snr_db,
                       const std::function<double(double)>& evaluate) {
  OutageCurve curve;
  curve.label = std::move(label);
  curve.snr.reserve(snr_db.size());
  curve.outage.reserve(snr_db.size());
  for (double db : snr_db) {
    const double eta = db_to_linear(db);
    curve.snr.push_back(eta);
    curve.outage.push_back(evaluate(eta));
  }
  return curve;
}

double estimate_diversity_order(const OutageCurve& curve, double lo, double hi) {
  if (curve.snr.size() != curve.outage.size()) {
    throw std::invalid_argument("curve axes differ in length");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < curve.snr.size(); ++i) {
    const double p = curve.outage[i];
    if (p >= lo && p <= hi && p > 0.0) {
      xs.push_back(std::log(curve.snr[i]));
      ys.push_back(std::log(p));
    }
  }
  if (xs.size() < 3) {
    throw std::invalid_argument("diversity fit needs at least 3 points inside the fit window");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("diversity fit needs distinct SNR points");
  return -sxy / sxx;
}

double power_gap_db(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  return 10.0 * std::log10(1.0 / alpha);
}

double crossing_snr(const OutageCurve& curve, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("target outage must be positive");
  for (std::size_t i = 1; i < curve.snr.size(); ++i) {
    const double p0 = curve.outage[i - 1];
    const double p1 = curve.outage[i];
    if (p0 >= target && p1 <= target && p1 > 0.0) {
      if (p0 == p1) return curve.snr[i - 1];
      const double lx0 = std::log(curve.snr[i - 1]);
      const double lx1 = std::log(curve.snr[i]);
      const double t = (std::log(target) - std::log(p0)) / (std::log(p1) - std::log(p0));
      return std::exp(lx0 + t * (lx1 - lx0));
    }
  }
  throw std::invalid_argument("curve '" + curve.label + "' does not cross the target outage");
}

double measure_gap_db(const OutageCurve& a, const OutageCurve& b, double target) {
  return 10.0 * std::log10(crossing_snr(a, target) / crossing_snr(b, target));
}

}  // namespace relaysched
