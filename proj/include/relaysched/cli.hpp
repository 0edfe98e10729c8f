// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "relaysched/simulator.hpp"

namespace relaysched::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kCheckFailed = 3 };

struct Options {
  std::string command;  // outage | diversity | fairness | protocol | figures | replay
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = "relaysched-out";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> figure;
  bool check = false;
  bool plot_script = false;
  std::uint64_t protocol_slots = 100000;
  unsigned threads = 1;
};

/// Runs one subcommand and returns its exit code. Validation problems
/// (bad config, unknown figure) return kValidation, I/O and other runtime
/// failures kRuntime; a failed --check returns kCheckFailed. Messages go
/// to `err`, progress and printed results to `log`.
int run(const Options& options, std::ostream& log, std::ostream& err);

/// Thread count from RELAYSCHED_THREADS, else the hardware count.
unsigned threads_from_environment();

// Canned configurations behind the figure set.
NetworkConfig table_one_network();
/// Heterogeneous network: 8 users (4 near, 4 far), 6 relays, ranges drawn
/// from `gain_seed`.
NetworkConfig near_far_network(std::uint64_t gain_seed = 2026);
/// Uniform (0.5, 1.5) mean gains on every link.
NetworkConfig uniform_gain_network(std::size_t users, std::size_t relays,
                                   std::uint64_t gain_seed = 2026);

struct FigurePlan {
  std::string tag;  // sub-run name, used in file names
  ExperimentPlan plan;
};

/// Plans behind one figure, with --seed and --trials overrides applied.
/// Throws std::invalid_argument for an unknown figure id.
std::vector<FigurePlan> figure_plans(int figure, std::optional<std::uint64_t> seed,
                                     std::optional<std::uint64_t> trials);

/// Analytic outage of a policy entry at linear SNR eta.
double analytic_outage(const NetworkConfig& config, const PolicyEntry& policy, double eta);

}  // namespace relaysched::cli
