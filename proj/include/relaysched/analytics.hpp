// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relaysched/network.hpp"
#include "relaysched/scheduling.hpp"

// Closed-form outage probabilities for the two-hop network under Rayleigh
// fading. `eta` is always the linear SNR P_0 / N_0; the network's own
// total_power is ignored by every evaluator here.

namespace relaysched {

struct OutageCurve {
  std::vector<double> snr;     // linear eta, strictly increasing
  std::vector<double> outage;  // same length
  std::string label;
};

/// 1 - exp(-x) without cancellation for small x.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

/// Greedy scheduling over all M users (optimal outage).
double outage_exact(const NetworkConfig& config, double eta);

/// Greedy scheduling restricted to a subset of users.
double outage_exact_users(const NetworkConfig& config, std::span<const std::size_t> users,
                          double eta);

/// Relaxed TDMA: each group receives an equal share of the slots, so the
/// system outage is the mean of the per-group greedy outages.
double outage_relaxed_tdma(const NetworkConfig& config, const GroupingPattern& pattern, double eta);

/// Infinite-user limit; depends on relay-side parameters only.
double outage_lower_bound(std::span<const double> relay_means, double alpha, double tau,
                          double eta);
double outage_lower_bound(const NetworkConfig& config, double eta);

/// Outage of user u when it alone is served (round-robin slot owner).
double outage_user_tdma(const NetworkConfig& config, std::size_t user, double eta);

/// Round-robin TDMA: average of the per-user outages.
double outage_tdma(const NetworkConfig& config, double eta);

/// First-order high-SNR expansion of outage_exact, kept in its displayed
/// three-term form per relay: c_r/eta + P_r eta^-M - P_r c_r eta^-(M+1)
/// with c_r = tau/((1-alpha) W_rB) and P_r = prod_u tau/(alpha W_ur).
double outage_high_snr(const NetworkConfig& config, double eta);

/// Leading eta^-N term of outage_exact: prod_r (c_r + tau/(alpha W_1r)) for
/// M = 1, prod_r c_r for M > 1.
double outage_asymptotic(const NetworkConfig& config, double eta);

/// High-SNR outage of two-user relaxed TDMA: prod_r tau / ((1-alpha) W_rB eta).
double outage_two_user_highsnr(std::span<const double> relay_means, double alpha, double tau,
                               double eta);
double outage_two_user_highsnr(const NetworkConfig& config, double eta);

/// Symmetric network (every mean gain sigma): TDMA and the lower bound.
double outage_symmetric_tdma(std::size_t relays, double alpha, double tau, double sigma,
                             double eta);
double outage_symmetric_bound(std::size_t relays, double alpha, double tau, double sigma,
                              double eta);

/// Samples `evaluate(eta)` at each SNR given in dB.
OutageCurve make_curve(std::string label, std::span<const double> snr_db,
                       const std::function<double(double)>& evaluate);

/// Negated least-squares slope of ln(outage) against ln(eta), using only
/// points with outage in [lo, hi]. Throws std::invalid_argument with fewer
/// than three qualifying points.
double estimate_diversity_order(const OutageCurve& curve, double lo = 1e-10, double hi = 1e-2);

/// 10 log10(1/alpha)
double power_gap_db(double alpha);

/// SNR (linear) at which the curve first falls to `target`, interpolating
/// log(outage) linearly in log(eta). Throws if the curve never crosses.
double crossing_snr(const OutageCurve& curve, double target);

/// Horizontal distance 10 log10(eta_a / eta_b) between two curves at `target`.
double measure_gap_db(const OutageCurve& a, const OutageCurve& b, double target);

}  // namespace relaysched
