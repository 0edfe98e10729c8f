// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace relaysched {

/// Dense row-major matrix of per-link values (users x relays).
class GainMatrix {
 public:
  GainMatrix() = default;
  GainMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static GainMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  double row_mean(std::size_t r) const;

  bool operator==(const GainMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Static description of the two-hop uplink: M users, N decode-and-forward
/// relays, one base station. All quantities are linear (no dB).
struct NetworkConfig {
  std::size_t num_users = 0;
  std::size_t num_relays = 0;
  GainMatrix mean_gain_ur;           // M x N, mean user->relay power gain
  std::vector<double> mean_gain_rb;  // N, mean relay->BS power gain
  double total_power = 1.0;          // P_0, power spent on one symbol over both hops
  double alpha = 0.5;                // user share of P_0
  double noise_power = 1.0;
  double snr_threshold = 3.0;        // decoding threshold, linear
  double slot_duration = 0.002;      // relay cycle length in seconds

  double user_power() const { return alpha * total_power; }
  double relay_power() const { return (1.0 - alpha) * total_power; }
  /// P_0 / N_0
  double snr() const { return total_power / noise_power; }
  /// Received power a link must reach for decoding (tau * N_0).
  double decode_level() const { return snr_threshold * noise_power; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Copy with P_0 set so that P_0/N_0 equals the given SNR in dB.
  NetworkConfig at_snr_db(double snr_db) const;
  NetworkConfig at_snr(double snr_linear) const;

  bool operator==(const NetworkConfig&) const = default;
};

/// Every link has the same mean gain sigma.
NetworkConfig symmetric_network(std::size_t users, std::size_t relays, double sigma = 1.0);

/// One slot's instantaneous power gains.
struct ChannelRealization {
  GainMatrix gain_ur;           // M x N
  std::vector<double> gain_rb;  // N

  std::size_t num_users() const { return gain_ur.rows(); }
  std::size_t num_relays() const { return gain_ur.cols(); }

  bool operator==(const ChannelRealization&) const = default;
};

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace relaysched
