// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/config_io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "relaysched/csv.hpp"
#include "relaysched/rng.hpp"

namespace relaysched {

namespace {

constexpr std::uint64_t kGainStream = 0x6761696e;  // "gain"
constexpr std::uint64_t kDefaultGainSeed = 2026;

int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
    throw ConfigError(source_, line_of(at), message);
  }

  void only_keys(const YAML::Node& map, std::string_view section,
                 std::initializer_list<std::string_view> allowed) const {
    if (!map.IsMap()) fail(map, std::string(section) + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(kv.first, "unknown key '" + key + "' in " + std::string(section));
      }
    }
  }

  YAML::Node require(const YAML::Node& map, const char* key, std::string_view section) const {
    YAML::Node node = map[key];
    if (!node) fail(map, "missing required key '" + std::string(key) + "' in " + std::string(section));
    return node;
  }

  double number(const YAML::Node& node, std::string_view what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be a number");
    const std::string& text = node.Scalar();
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last) fail(node, std::string(what) + " must be a number, got '" + text + "'");
    return value;
  }

  std::uint64_t integer(const YAML::Node& node, std::string_view what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be an integer");
    const std::string& text = node.Scalar();
    std::uint64_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && end == text.data() + text.size()) return value;
    // Allow forms such as 1e7.
    const double d = number(node, what);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) {
      fail(node, std::string(what) + " must be a nonnegative integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(d);
  }

  bool boolean(const YAML::Node& node, std::string_view what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be true or false");
    const std::string& t = node.Scalar();
    if (t == "true" || t == "True" || t == "yes") return true;
    if (t == "false" || t == "False" || t == "no") return false;
    fail(node, std::string(what) + " must be true or false, got '" + t + "'");
  }

  std::string text(const YAML::Node& node, std::string_view what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be a string");
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node, std::string_view what) const {
    if (!node.IsSequence()) fail(node, std::string(what) + " must be a sequence of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(number(item, what));
    return out;
  }

  std::pair<double, double> range(const YAML::Node& node, std::string_view what) const {
    const auto v = numbers(node, what);
    if (v.size() != 2) fail(node, std::string(what) + " must be [lo, hi]");
    if (!(v[0] > 0.0) || !(v[1] >= v[0])) {
      fail(node, std::string(what) + " must satisfy 0 < lo <= hi (gains must be positive)");
    }
    return {v[0], v[1]};
  }

  double positive_gain(const YAML::Node& node, std::string_view what) const {
    const double g = number(node, what);
    if (!(g > 0.0) || !std::isfinite(g)) fail(node, std::string(what) + " must be positive");
    return g;
  }

 private:
  std::string source_;
};

void parse_network(const Reader& rd, const YAML::Node& net, NetworkConfig& cfg) {
  rd.only_keys(net, "network",
               {"users", "relays", "mean_gain_ur", "mean_gain_ur_range", "user_gain_ranges",
                "mean_gain_rb", "mean_gain_rb_range", "gain_seed", "alpha", "noise_power",
                "snr_threshold", "slot_duration"});
  const auto users_node = rd.require(net, "users", "network");
  const auto relays_node = rd.require(net, "relays", "network");
  const std::size_t m = rd.integer(users_node, "network.users");
  const std::size_t n = rd.integer(relays_node, "network.relays");
  if (m < 1) rd.fail(users_node, "network.users must be at least 1");
  if (n < 1) rd.fail(relays_node, "network.relays must be at least 1");
  cfg.num_users = m;
  cfg.num_relays = n;

  const std::uint64_t gain_seed =
      net["gain_seed"] ? rd.integer(net["gain_seed"], "network.gain_seed") : kDefaultGainSeed;
  Engine engine(derive_seed(gain_seed, {kGainStream}));

  const int ur_forms = (net["mean_gain_ur"] ? 1 : 0) + (net["mean_gain_ur_range"] ? 1 : 0) +
                       (net["user_gain_ranges"] ? 1 : 0);
  if (ur_forms != 1) {
    rd.fail(net, "network needs exactly one of mean_gain_ur, mean_gain_ur_range, user_gain_ranges");
  }
  cfg.mean_gain_ur = GainMatrix(m, n);
  if (const auto node = net["mean_gain_ur"]) {
    if (!node.IsSequence() || node.size() != m) {
      rd.fail(node, "mean_gain_ur must have one row per user (" + std::to_string(m) + ")");
    }
    for (std::size_t u = 0; u < m; ++u) {
      const auto row = node[u];
      if (!row.IsSequence() || row.size() != n) {
        rd.fail(row, "mean_gain_ur rows must have one entry per relay (" + std::to_string(n) + ")");
      }
      for (std::size_t r = 0; r < n; ++r) cfg.mean_gain_ur(u, r) = rd.positive_gain(row[r], "mean_gain_ur entry");
    }
  } else if (const auto node = net["mean_gain_ur_range"]) {
    const auto [lo, hi] = rd.range(node, "mean_gain_ur_range");
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t r = 0; r < n; ++r) cfg.mean_gain_ur(u, r) = uniform_between(engine, lo, hi);
    }
  } else {
    const auto ranges = net["user_gain_ranges"];
    if (!ranges.IsSequence()) rd.fail(ranges, "user_gain_ranges must be a sequence");
    std::size_t u = 0;
    for (const auto& entry : ranges) {
      rd.only_keys(entry, "user_gain_ranges entry", {"count", "range"});
      const std::size_t count = rd.integer(rd.require(entry, "count", "user_gain_ranges entry"), "count");
      const auto [lo, hi] = rd.range(rd.require(entry, "range", "user_gain_ranges entry"), "range");
      if (u + count > m) rd.fail(entry, "user_gain_ranges covers more users than network.users");
      for (std::size_t i = 0; i < count; ++i, ++u) {
        for (std::size_t r = 0; r < n; ++r) cfg.mean_gain_ur(u, r) = uniform_between(engine, lo, hi);
      }
    }
    if (u != m) rd.fail(ranges, "user_gain_ranges must cover exactly network.users users");
  }

  const int rb_forms = (net["mean_gain_rb"] ? 1 : 0) + (net["mean_gain_rb_range"] ? 1 : 0);
  if (rb_forms != 1) rd.fail(net, "network needs exactly one of mean_gain_rb, mean_gain_rb_range");
  if (const auto node = net["mean_gain_rb"]) {
    if (!node.IsSequence() || node.size() != n) {
      rd.fail(node, "mean_gain_rb must have one entry per relay (" + std::to_string(n) + ")");
    }
    cfg.mean_gain_rb.clear();
    for (const auto& g : node) cfg.mean_gain_rb.push_back(rd.positive_gain(g, "mean_gain_rb entry"));
  } else {
    const auto [lo, hi] = rd.range(net["mean_gain_rb_range"], "mean_gain_rb_range");
    cfg.mean_gain_rb.assign(n, 0.0);
    for (double& g : cfg.mean_gain_rb) g = uniform_between(engine, lo, hi);
  }

  if (const auto node = net["alpha"]) {
    cfg.alpha = rd.number(node, "network.alpha");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
      rd.fail(node, "alpha must lie in the open interval (0,1), got " + node.Scalar());
    }
  }
  if (const auto node = net["noise_power"]) {
    cfg.noise_power = rd.number(node, "network.noise_power");
    if (!(cfg.noise_power > 0.0)) rd.fail(node, "noise_power must be positive");
  }
  if (const auto node = net["snr_threshold"]) {
    cfg.snr_threshold = rd.number(node, "network.snr_threshold");
    if (!(cfg.snr_threshold > 0.0)) rd.fail(node, "snr_threshold must be positive");
  }
  if (const auto node = net["slot_duration"]) {
    cfg.slot_duration = rd.number(node, "network.slot_duration");
    if (!(cfg.slot_duration > 0.0)) rd.fail(node, "slot_duration must be positive");
  }
}

void parse_fading(const Reader& rd, const YAML::Node& node, FadingSettings& f) {
  rd.only_keys(node, "fading", {"kind", "doppler_hz", "doppler_hz_relay_bs"});
  if (const auto k = node["kind"]) {
    const auto kind = rd.text(k, "fading.kind");
    if (kind == "iid") {
      f.kind = FadingKind::iid;
    } else if (kind == "gauss_markov") {
      f.kind = FadingKind::gauss_markov;
    } else {
      rd.fail(k, "fading.kind must be iid or gauss_markov, got '" + kind + "'");
    }
  }
  if (const auto d = node["doppler_hz"]) {
    f.doppler_hz = rd.number(d, "fading.doppler_hz");
    if (!(f.doppler_hz >= 0.0)) rd.fail(d, "doppler_hz must be nonnegative");
  }
  if (const auto d = node["doppler_hz_relay_bs"]) {
    f.doppler_hz_relay_bs = rd.number(d, "fading.doppler_hz_relay_bs");
    if (!(*f.doppler_hz_relay_bs >= 0.0)) rd.fail(d, "doppler_hz_relay_bs must be nonnegative");
  }
}

void parse_sweep(const Reader& rd, const YAML::Node& node, ExperimentPlan& plan) {
  rd.only_keys(node, "sweep",
               {"snr_db", "trials_per_point", "max_trials", "min_outage_events", "block_size", "seed",
                "use_protocol_path"});
  if (const auto s = node["snr_db"]) {
    if (s.IsMap()) {
      rd.only_keys(s, "sweep.snr_db", {"start", "stop", "step"});
      const double start = rd.number(rd.require(s, "start", "sweep.snr_db"), "start");
      const double stop = rd.number(rd.require(s, "stop", "sweep.snr_db"), "stop");
      const double step = rd.number(rd.require(s, "step", "sweep.snr_db"), "step");
      if (!(step > 0.0) || stop < start) rd.fail(s, "snr_db range needs step > 0 and stop >= start");
      plan.snr_db.clear();
      const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (std::size_t i = 0; i < count; ++i) plan.snr_db.push_back(start + step * static_cast<double>(i));
    } else {
      plan.snr_db = rd.numbers(s, "sweep.snr_db");
    }
    for (std::size_t i = 1; i < plan.snr_db.size(); ++i) {
      if (!(plan.snr_db[i] > plan.snr_db[i - 1])) rd.fail(s, "snr sweep must be strictly increasing");
    }
    if (plan.snr_db.empty()) rd.fail(s, "snr sweep must not be empty");
  }
  if (const auto t = node["trials_per_point"]) {
    plan.trials_per_point = rd.integer(t, "sweep.trials_per_point");
    if (plan.trials_per_point < 1000) rd.fail(t, "trials_per_point must be at least 1000");
  }
  if (const auto t = node["max_trials"]) plan.max_trials = rd.integer(t, "sweep.max_trials");
  if (const auto t = node["min_outage_events"]) plan.min_outage_events = rd.integer(t, "sweep.min_outage_events");
  if (const auto t = node["block_size"]) {
    plan.block_size = rd.integer(t, "sweep.block_size");
    if (plan.block_size == 0) rd.fail(t, "block_size must be positive");
  }
  if (const auto t = node["seed"]) plan.base_seed = rd.integer(t, "sweep.seed");
  if (const auto t = node["use_protocol_path"]) plan.use_protocol_path = rd.boolean(t, "sweep.use_protocol_path");
}

void parse_policies(const Reader& rd, const YAML::Node& node, ExperimentPlan& plan) {
  if (!node.IsSequence() || node.size() == 0) rd.fail(node, "policies must be a nonempty sequence");
  plan.policies.clear();
  for (const auto& item : node) {
    rd.only_keys(item, "policy", {"kind", "k", "grouping", "seed", "patterns"});
    PolicyEntry p;
    const auto kind_node = rd.require(item, "kind", "policy");
    try {
      p.kind = parse_policy_kind(rd.text(kind_node, "policy.kind"));
    } catch (const std::invalid_argument& e) {
      rd.fail(kind_node, e.what());
    }
    if (p.kind == PolicyKind::relaxed_tdma) {
      const auto k = rd.require(item, "k", "relaxed policy");
      p.k = rd.integer(k, "policy.k");
      if (p.k < 1 || p.k > plan.config.num_users) rd.fail(k, "policy.k must lie in [1, users]");
      if (const auto g = item["grouping"]) {
        try {
          p.grouping = parse_grouping_strategy(rd.text(g, "policy.grouping"));
        } catch (const std::invalid_argument& e) {
          rd.fail(g, e.what());
        }
      }
      if (const auto s = item["seed"]) p.grouping_seed = rd.integer(s, "policy.seed");
      if (const auto n = item["patterns"]) {
        p.patterns = rd.integer(n, "policy.patterns");
        if (p.patterns == 0) rd.fail(n, "policy.patterns must be positive");
      }
    } else if (item["k"] || item["grouping"] || item["patterns"] || item["seed"]) {
      rd.fail(item, "k, grouping, seed and patterns apply to relaxed policies only");
    }
    plan.policies.push_back(p);
  }
}

void parse_protocol(const Reader& rd, const YAML::Node& node, ProtocolParams& p) {
  rd.only_keys(node, "protocol", {"backoff_scale", "backoff_epsilon", "vulnerable_window", "pilot_time"});
  if (const auto v = node["backoff_scale"]) p.backoff_scale = rd.number(v, "protocol.backoff_scale");
  if (const auto v = node["backoff_epsilon"]) p.backoff_epsilon = rd.number(v, "protocol.backoff_epsilon");
  if (const auto v = node["vulnerable_window"]) {
    p.vulnerable_window = rd.number(v, "protocol.vulnerable_window");
    if (p.vulnerable_window < 0.0) rd.fail(v, "vulnerable_window must be nonnegative");
  }
  if (const auto v = node["pilot_time"]) {
    p.pilot_time = rd.number(v, "protocol.pilot_time");
    if (p.pilot_time < 0.0) rd.fail(v, "pilot_time must be nonnegative");
  }
}

void parse_fairness(const Reader& rd, const YAML::Node& node, FairnessSettings& f) {
  rd.only_keys(node, "fairness", {"window_units", "snr_db", "slots"});
  if (const auto v = node["window_units"]) {
    f.window_units = rd.numbers(v, "fairness.window_units");
    for (double w : f.window_units) {
      if (!(w > 0.0)) rd.fail(v, "fairness windows must be positive");
    }
  }
  if (const auto v = node["snr_db"]) f.snr_db = rd.number(v, "fairness.snr_db");
  if (const auto v = node["slots"]) {
    f.slots = rd.integer(v, "fairness.slots");
    if (f.slots == 0) rd.fail(v, "fairness.slots must be positive");
  }
}

ExperimentPlan default_plan() {
  ExperimentPlan plan;
  for (int db = 0; db <= 30; db += 2) plan.snr_db.push_back(db);
  plan.policies = {PolicyEntry{PolicyKind::greedy}, PolicyEntry{PolicyKind::fixed_tdma}};
  return plan;
}

void emit_list(std::ostream& out, std::span<const double> values) {
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << format_number(values[i]);
  out << ']';
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " + message),
      line_(line),
      message_(message) {}

ExperimentPlan parse_config_string(std::string_view text, std::string_view source) {
  const Reader rd{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(source), e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  if (!root.IsMap()) throw ConfigError(std::string(source), line_of(root), "top level must be a mapping");
  // `run` holds manifest bookkeeping and is ignored here.
  rd.only_keys(root, "top level", {"network", "fading", "sweep", "policies", "protocol", "fairness", "run"});

  ExperimentPlan plan = default_plan();
  parse_network(rd, rd.require(root, "network", "top level"), plan.config);
  if (const auto n = root["fading"]) parse_fading(rd, n, plan.fading);
  if (const auto n = root["sweep"]) parse_sweep(rd, n, plan);
  if (const auto n = root["policies"]) parse_policies(rd, n, plan);
  if (const auto n = root["protocol"]) parse_protocol(rd, n, plan.protocol);
  if (const auto n = root["fairness"]) parse_fairness(rd, n, plan.fairness);

  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source), 0, e.what());
  }
  return plan;
}

ExperimentPlan parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_string(buf.str(), path.string());
}

std::string serialize_plan(const ExperimentPlan& plan) {
  std::ostringstream out;
  const auto& c = plan.config;
  out << "network:\n";
  out << "  users: " << c.num_users << '\n';
  out << "  relays: " << c.num_relays << '\n';
  out << "  mean_gain_ur:\n";
  for (std::size_t u = 0; u < c.num_users; ++u) {
    out << "    - ";
    emit_list(out, c.mean_gain_ur.row(u));
    out << '\n';
  }
  out << "  mean_gain_rb: ";
  emit_list(out, c.mean_gain_rb);
  out << '\n';
  out << "  alpha: " << format_number(c.alpha) << '\n';
  out << "  noise_power: " << format_number(c.noise_power) << '\n';
  out << "  snr_threshold: " << format_number(c.snr_threshold) << '\n';
  out << "  slot_duration: " << format_number(c.slot_duration) << '\n';

  out << "fading:\n";
  out << "  kind: " << (plan.fading.kind == FadingKind::iid ? "iid" : "gauss_markov") << '\n';
  out << "  doppler_hz: " << format_number(plan.fading.doppler_hz) << '\n';
  if (plan.fading.doppler_hz_relay_bs) {
    out << "  doppler_hz_relay_bs: " << format_number(*plan.fading.doppler_hz_relay_bs) << '\n';
  }

  out << "sweep:\n";
  out << "  snr_db: ";
  emit_list(out, plan.snr_db);
  out << '\n';
  out << "  trials_per_point: " << plan.trials_per_point << '\n';
  out << "  max_trials: " << plan.max_trials << '\n';
  out << "  min_outage_events: " << plan.min_outage_events << '\n';
  out << "  block_size: " << plan.block_size << '\n';
  out << "  seed: " << plan.base_seed << '\n';
  out << "  use_protocol_path: " << (plan.use_protocol_path ? "true" : "false") << '\n';

  out << "policies:\n";
  for (const auto& p : plan.policies) {
    out << "  - {kind: " << to_string(p.kind);
    if (p.kind == PolicyKind::relaxed_tdma) {
      out << ", k: " << p.k << ", grouping: " << to_string(p.grouping) << ", seed: " << p.grouping_seed
          << ", patterns: " << p.patterns;
    }
    out << "}\n";
  }

  const auto& pr = plan.protocol;
  out << "protocol:\n";
  out << "  backoff_scale: " << format_number(pr.backoff_scale) << '\n';
  out << "  backoff_epsilon: " << format_number(pr.backoff_epsilon) << '\n';
  out << "  vulnerable_window: " << format_number(pr.vulnerable_window) << '\n';
  out << "  pilot_time: " << format_number(pr.pilot_time) << '\n';

  out << "fairness:\n";
  out << "  window_units: ";
  emit_list(out, plan.fairness.window_units);
  out << '\n';
  out << "  snr_db: " << format_number(plan.fairness.snr_db) << '\n';
  out << "  slots: " << plan.fairness.slots << '\n';
  return out.str();
}

}  // namespace relaysched
