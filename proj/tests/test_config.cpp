// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "relaysched/config_io.hpp"

using namespace relaysched;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config_string(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config_string(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal file takes the defaults") {
  const auto plan = parse_config_string("network:\n  users: 3\n  relays: 2\n  mean_gain_ur_range: [1, 1]\n  mean_gain_rb: [1, 1]\n");
  CHECK(plan.config.num_users == 3);
  CHECK(plan.config.num_relays == 2);
  CHECK(plan.config.alpha == 0.5);
  CHECK(plan.config.noise_power == 1.0);
  CHECK(plan.config.snr_threshold == 3.0);
  CHECK(plan.config.slot_duration == 0.002);
  CHECK(plan.fading.doppler_hz == 15.0);
  CHECK(plan.config.mean_gain_ur(2, 1) == 1.0);
  CHECK(plan.config.mean_gain_rb == std::vector<double>{1.0, 1.0});
  CHECK(plan.snr_db.size() == 16);
  CHECK(plan.snr_db.back() == 30.0);
  CHECK(plan.policies.size() == 2);
  CHECK(plan.trials_per_point == 100000);
  CHECK(plan.max_trials == 10000000);
  CHECK(plan.min_outage_events == 100);
  CHECK(plan.fading.kind == FadingKind::iid);
  CHECK(plan.base_seed == 1);
}

TEST_CASE("full file") {
  const std::string text = R"(network:
  users: 2
  relays: 2
  mean_gain_ur: [[1, 2], [3, 4]]
  mean_gain_rb: [0.5, 1.5]
  alpha: 0.7
  snr_threshold: 1
fading: {kind: gauss_markov, doppler_hz: 30, doppler_hz_relay_bs: 5}
sweep:
  snr_db: {start: 0, stop: 10, step: 5}
  trials_per_point: 2000
  max_trials: 1e5
  seed: 9
policies:
  - {kind: relaxed, k: 2, grouping: similar_gain}
  - kind: greedy
fairness: {window_units: [1, 2], snr_db: 12, slots: 5000}
protocol: {vulnerable_window: 1e-6}
)";
  const auto p = parse_config_string(text);
  CHECK(p.config.mean_gain_ur(1, 0) == 3.0);
  CHECK(p.config.mean_gain_rb[1] == 1.5);
  CHECK(p.config.alpha == 0.7);
  CHECK(p.fading.kind == FadingKind::gauss_markov);
  CHECK(p.fading.doppler_hz_relay_bs == std::optional<double>{5.0});
  CHECK(p.snr_db == std::vector<double>{0, 5, 10});
  CHECK(p.max_trials == 100000);
  CHECK(p.base_seed == 9);
  REQUIRE(p.policies.size() == 2);
  CHECK(p.policies[0].kind == PolicyKind::relaxed_tdma);
  CHECK(p.policies[0].grouping == GroupingStrategy::similar_gain);
  CHECK(p.fairness.slots == 5000);
  CHECK(p.protocol.vulnerable_window == 1e-6);
}

TEST_CASE("alpha outside (0,1) is rejected with its line") {
  const std::string text = "network:\n  users: 2\n  relays: 2\n  mean_gain_ur_range: [1, 1]\n  alpha: 1.2\n  mean_gain_rb: [1, 1]\n";
  CHECK(error_line(text) == 5);
  const auto msg = error_text(text);
  CHECK(msg.find("cfg.yaml:5") != std::string::npos);
  CHECK(msg.find("(0,1)") != std::string::npos);
}

TEST_CASE("unknown keys are reported with their line") {
  CHECK(error_line("network:\n  users: 2\n  relays: 2\n  mean_gain_ur_range: [1, 1]\n  relay_count: 4\n  mean_gain_rb: [1, 1]\n") == 5);
  CHECK(error_line("network: {users: 2, relays: 2, mean_gain_ur_range: [1, 1], mean_gain_rb: [1, 1]}\nsweeps: {}\n") == 2);
  CHECK(error_text("network: {users: 2, relays: 2, mean_gain_ur_range: [1, 1], mean_gain_rb: [1, 1]}\npolicies:\n  - {kind: greedy, kk: 2}\n").find("kk") !=
        std::string::npos);
}

TEST_CASE("malformed values") {
  CHECK(error_line("network:\n  users: two\n  relays: 2\n  mean_gain_ur_range: [1, 1]\n  mean_gain_rb: [1, 1]\n") == 2);
  CHECK(error_line("network:\n  users: 2\n  relays: 2\n  mean_gain_ur_range: [1, 1]\n  mean_gain_rb: [1, -1]\n") == 5);
  CHECK(error_line("network:\n  users: 2\n  relays: 2\n  mean_gain_ur: [[1, 1]]\n  mean_gain_rb: [1, 1]\n") == 4);
  CHECK(error_line("network:\n  relays: 2\n") > 0);
  CHECK(error_line("network: [\n") >= 0);
  CHECK(error_line("network: {users: 2, relays: 2, mean_gain_ur_range: [1, 1], mean_gain_rb: [1, 1]}\npolicies:\n  - {kind: fastest}\n") == 3);
  CHECK_THROWS_AS(parse_config_string("network: {users: 2, relays: 2, mean_gain_ur_range: [1, 1], mean_gain_rb: [1, 1]}\nsweep: {snr_db: [4, 2]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/relaysched.yaml"), ConfigError);
}

TEST_CASE("range draws are seeded and materialized") {
  const std::string text =
      "network:\n  users: 8\n  relays: 6\n  user_gain_ranges:\n    - {count: 4, range: [1.5, 2.0]}\n"
      "    - {count: 4, range: [0.5, 1.0]}\n  mean_gain_rb_range: [0.5, 1.5]\n  gain_seed: 7\n";
  const auto a = parse_config_string(text);
  const auto b = parse_config_string(text);
  CHECK(a == b);
  for (std::size_t u = 0; u < 8; ++u) {
    for (std::size_t r = 0; r < 6; ++r) {
      const double g = a.config.mean_gain_ur(u, r);
      CHECK(g >= (u < 4 ? 1.5 : 0.5));
      CHECK(g <= (u < 4 ? 2.0 : 1.0));
    }
  }
  CHECK(error_line("network:\n  users: 8\n  relays: 6\n  user_gain_ranges:\n    - {count: 3, range: [1, 2]}\n  mean_gain_rb: [1, 1, 1, 1, 1, 1]\n") > 0);
}

TEST_CASE("parse, serialize and parse again") {
  const std::string text =
      "network:\n  users: 5\n  relays: 3\n  mean_gain_ur_range: [0.3, 1.7]\n  mean_gain_rb: [0.9, 1.1, 0.123456789012345]\n"
      "  alpha: 0.35\n  slot_duration: 0.001\nfading: {kind: gauss_markov, doppler_hz: 12.5}\n"
      "sweep: {snr_db: [1.5, 3, 7.25], trials_per_point: 3000, max_trials: 60000, block_size: 100, seed: 18446744073709551615}\n"
      "policies:\n  - {kind: relaxed, k: 5, grouping: random, seed: 4, patterns: 3}\n  - {kind: tdma}\n"
      "protocol: {backoff_scale: 0.25, pilot_time: 0.0001}\nfairness: {window_units: [0.25, 3], slots: 777}\n";
  const auto first = parse_config_string(text);
  const auto yaml = serialize_plan(first);
  const auto second = parse_config_string(yaml, "round-trip");
  CHECK(second == first);
  CHECK(serialize_plan(second) == yaml);
}

TEST_CASE("parse_config reads files") {
  const auto path = std::filesystem::temp_directory_path() / "relaysched_test_config.yaml";
  {
    std::ofstream out(path);
    out << "network: {users: 2, relays: 4, mean_gain_ur_range: [1, 1], mean_gain_rb_range: [1, 1]}\nrun: {command: outage}\n";
  }
  CHECK(parse_config(path).config.num_relays == 4);
  std::filesystem::remove(path);
}
