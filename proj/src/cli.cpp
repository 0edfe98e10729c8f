// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <locale>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "relaysched/analytics.hpp"
#include "relaysched/config_io.hpp"
#include "relaysched/csv.hpp"

namespace relaysched::cli {

namespace fs = std::filesystem;

namespace {

// Mean U-R gains of the 8-user, 5-relay reference network, one row per user.
constexpr std::string_view kTableOne = R"(
    - [0.2, 0.8, 1.3, 1.0, 0.5]
    - [0.8, 1.4, 1.2, 1.1, 1.0]
    - [0.8, 0.6, 1.4, 0.2, 0.1]
    - [1.3, 1.1, 0.7, 0.5, 0.3]
    - [0.3, 0.5, 0.7, 1.2, 1.4]
    - [0.5, 0.6, 0.9, 1.0, 1.1]
    - [0.8, 0.7, 0.6, 0.9, 0.4]
    - [1.3, 1.0, 0.7, 0.6, 0.4]
)";

std::string table_one_yaml() {
  return std::string("network:\n  users: 8\n  relays: 5\n  mean_gain_ur:") + std::string(kTableOne) +
         "  mean_gain_rb: [1.2, 0.6, 0.5, 1.3, 0.7]\n";
}

std::string near_far_yaml(std::uint64_t gain_seed) {
  return "network:\n"
         "  users: 8\n"
         "  relays: 6\n"
         "  user_gain_ranges:\n"
         "    - {count: 4, range: [1.5, 2.0]}\n"
         "    - {count: 4, range: [0.5, 1.0]}\n"
         "  mean_gain_rb_range: [1.5, 2.0]\n"
         "  gain_seed: " +
         std::to_string(gain_seed) + "\n";
}

std::string uniform_yaml(std::size_t users, std::size_t relays, std::uint64_t gain_seed) {
  return "network:\n  users: " + std::to_string(users) + "\n  relays: " + std::to_string(relays) +
         "\n  mean_gain_ur_range: [0.5, 1.5]\n  mean_gain_rb_range: [0.5, 1.5]\n  gain_seed: " +
         std::to_string(gain_seed) + "\n";
}

std::string symmetric_yaml(std::size_t users, std::size_t relays, double alpha) {
  std::string row = "[";
  for (std::size_t r = 0; r < relays; ++r) row += r ? ", 1" : "1";
  row += "]";
  std::string out = "network:\n  users: " + std::to_string(users) +
                    "\n  relays: " + std::to_string(relays) + "\n  mean_gain_ur:\n";
  for (std::size_t u = 0; u < users; ++u) out += "    - " + row + "\n";
  out += "  mean_gain_rb: " + row + "\n  alpha: " + format_number(alpha) + "\n";
  return out;
}

ExperimentPlan plan_from(const std::string& yaml, std::string_view name) {
  return parse_config_string(yaml, name);
}

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw std::runtime_error("cannot create output directory " + dir_.string());
    }
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    f.imbue(std::locale::classic());
    return f;
  }

  void write(const std::string& name, const std::string& text) const {
    auto f = open(name);
    f << text;
    if (!f) throw std::runtime_error("write failed for " + (dir_ / name).string());
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
};

// Bookkeeping written at the top of every manifest.
struct RunInfo {
  std::string command;
  std::string config;
  std::optional<int> figure;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::uint64_t protocol_slots = 0;
  std::vector<std::string> plan_files;

  std::string yaml() const {
    std::ostringstream out;
    out << "run:\n";
    out << "  command: " << command << '\n';
    if (!config.empty()) out << "  config: \"" << config << "\"\n";
    if (figure) out << "  figure: " << *figure << '\n';
    if (seed) out << "  seed: " << *seed << '\n';
    if (trials) out << "  trials: " << *trials << '\n';
    out << "  protocol_slots: " << protocol_slots << '\n';
    if (!plan_files.empty()) {
      out << "  plans: [";
      for (std::size_t i = 0; i < plan_files.size(); ++i) out << (i ? ", " : "") << plan_files[i];
      out << "]\n";
    }
    return out.str();
  }
};

struct Context {
  const Options& options;
  std::ostream& log;
  OutputDir out;
  std::string manifest;  // echoed into every CSV header
  bool check_failed = false;

  void fail_check(const std::string& what) {
    check_failed = true;
    log << "CHECK FAILED: " << what << '\n';
  }
  void pass_check(const std::string& what) { log << "check ok: " << what << '\n'; }
};

std::string prefixed(std::string_view tag, std::string_view name) {
  return tag.empty() ? std::string(name) : std::string(tag) + "_" + std::string(name);
}

// ---- outage ---------------------------------------------------------------

void write_sweep_csv(Context& ctx, const std::string& name, const std::vector<SweepRow>& rows) {
  auto f = ctx.out.open(name);
  CsvWriter csv(f, {"snr_db", "policy", "outage", "ci_low", "ci_high", "fi_longrun", "delay_mean_s",
                    "delay_var_s2", "slots", "outage_events", "cap_hit"});
  csv.comment_block(ctx.manifest);
  csv.write_header();
  for (const auto& r : rows) {
    csv.field(r.snr_db).field(r.policy).field(r.outage).field(r.ci_low).field(r.ci_high);
    csv.field(r.fi_longrun).field(r.delay_mean).field(r.delay_var);
    csv.field(r.slots).field(r.outage_events).field(std::uint64_t{r.cap_hit ? 1u : 0u});
    csv.end_row();
  }
}

struct OutageResult {
  std::vector<SweepRow> rows;
  std::vector<double> analytic;  // aligned with rows
  std::vector<double> bound;     // per SNR point
};

OutageResult run_outage(Context& ctx, const ExperimentPlan& plan, const std::string& tag) {
  OutageResult res;
  ctx.log << "simulating " << plan.snr_db.size() << " SNR points x " << plan.policies.size()
          << " policies\n";
  res.rows = run_sweep(plan, ctx.options.threads);
  for (const auto& row : res.rows) {
    const auto it = std::find_if(plan.policies.begin(), plan.policies.end(),
                                 [&](const PolicyEntry& p) { return p.label() == row.policy; });
    res.analytic.push_back(analytic_outage(plan.config, *it, db_to_linear(row.snr_db)));
  }
  const bool has_relaxed = std::any_of(plan.policies.begin(), plan.policies.end(), [](const auto& p) {
    return p.kind == PolicyKind::relaxed_tdma;
  });
  for (double db : plan.snr_db) res.bound.push_back(outage_lower_bound(plan.config, db_to_linear(db)));

  auto f = ctx.out.open(prefixed(tag, "outage.csv"));
  CsvWriter csv(f, {"snr_db", "policy", "source", "outage", "ci_low", "ci_high"});
  csv.comment_block(ctx.manifest);
  csv.write_header();
  const double nan = std::nan("");
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    csv.field(r.snr_db).field(r.policy).field("analytic").field(res.analytic[i]).field(nan).field(nan);
    csv.end_row();
    csv.field(r.snr_db).field(r.policy).field("sim").field(r.outage).field(r.ci_low).field(r.ci_high);
    csv.end_row();
  }
  if (has_relaxed) {
    for (std::size_t s = 0; s < plan.snr_db.size(); ++s) {
      csv.field(plan.snr_db[s]).field("lower_bound").field("analytic").field(res.bound[s]);
      csv.field(nan).field(nan).end_row();
    }
  }
  write_sweep_csv(ctx, prefixed(tag, "sweep.csv"), res.rows);
  return res;
}

// Simulated TDMA and greedy points with analytic outage >= 1e-4 must hold
// the analytic value inside their confidence interval.
void check_agreement(Context& ctx, const OutageResult& res) {
  std::size_t checked = 0;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    if (r.policy != "greedy" && r.policy != "tdma") continue;
    if (res.analytic[i] < 1e-4) continue;
    ++checked;
    if (res.analytic[i] < r.ci_low || res.analytic[i] > r.ci_high || r.cap_hit) {
      ctx.fail_check(r.policy + " at " + format_number(r.snr_db) + " dB: analytic " +
                     format_number(res.analytic[i]) + " outside [" + format_number(r.ci_low) + ", " +
                     format_number(r.ci_high) + "]");
    }
  }
  ctx.pass_check("analytic/simulated agreement evaluated on " + std::to_string(checked) + " points");
}

// ---- diversity --------------------------------------------------------------

OutageCurve analytic_curve(const ExperimentPlan& plan, const PolicyEntry& policy) {
  std::vector<double> grid;
  for (int i = 0; i <= 480; ++i) grid.push_back(0.25 * i);
  return make_curve(policy.label(), grid,
                    [&](double eta) { return analytic_outage(plan.config, policy, eta); });
}

struct DiversityResult {
  std::string policy;
  double analytic = 0.0;
  double simulated = 0.0;
};

std::vector<DiversityResult> run_diversity(Context& ctx, const ExperimentPlan& plan,
                                           const std::string& tag) {
  const auto rows = run_sweep(plan, ctx.options.threads);
  write_sweep_csv(ctx, prefixed(tag, "sweep.csv"), rows);

  auto cf = ctx.out.open(prefixed(tag, "analytic_curves.csv"));
  CsvWriter curves(cf, {"snr_db", "policy", "outage"});
  curves.comment_block(ctx.manifest);
  curves.write_header();

  std::vector<DiversityResult> out;
  for (const auto& policy : plan.policies) {
    DiversityResult d;
    d.policy = policy.label();
    const auto curve = analytic_curve(plan, policy);
    for (std::size_t i = 0; i < curve.snr.size(); ++i) {
      if (curve.outage[i] < 1e-14) break;
      curves.field(linear_to_db(curve.snr[i])).field(d.policy).field(curve.outage[i]).end_row();
    }
    d.analytic = estimate_diversity_order(curve);

    OutageCurve sim;
    sim.label = d.policy;
    for (const auto& r : rows) {
      if (r.policy != d.policy || r.outage_events < plan.min_outage_events || r.cap_hit) continue;
      sim.snr.push_back(db_to_linear(r.snr_db));
      sim.outage.push_back(r.outage);
    }
    try {
      d.simulated = estimate_diversity_order(sim, 1e-5, 1e-2);
    } catch (const std::invalid_argument&) {
      d.simulated = std::nan("");
    }
    out.push_back(d);
  }

  auto f = ctx.out.open(prefixed(tag, "diversity.csv"));
  CsvWriter csv(f, {"policy", "users", "relays", "source", "slope"});
  csv.comment_block(ctx.manifest);
  csv.write_header();
  for (const auto& d : out) {
    for (const auto& [source, value] : {std::pair{"analytic", d.analytic}, std::pair{"sim", d.simulated}}) {
      csv.field(d.policy).field(std::uint64_t{plan.config.num_users});
      csv.field(std::uint64_t{plan.config.num_relays}).field(source).field(value).end_row();
    }
    ctx.log << "slope " << (tag.empty() ? "" : tag + " ") << d.policy << " (N=" << plan.config.num_relays
            << ", M=" << plan.config.num_users << "): analytic " << format_number(d.analytic)
            << ", simulated " << format_number(d.simulated) << '\n';
  }
  return out;
}

void check_diversity(Context& ctx, const ExperimentPlan& plan, const std::vector<DiversityResult>& res) {
  const auto n = static_cast<double>(plan.config.num_relays);
  for (const auto& d : res) {
    const std::string what = d.policy + " N=" + std::to_string(plan.config.num_relays);
    if (std::abs(d.analytic - n) > 0.1) {
      ctx.fail_check(what + " analytic slope " + format_number(d.analytic) + " not within 0.1 of N");
    }
    if (!(std::abs(d.simulated - n) <= 0.5)) {
      ctx.fail_check(what + " simulated slope " + format_number(d.simulated) + " not within 0.5 of N");
    }
  }
}

// ---- fairness ---------------------------------------------------------------

std::vector<FairnessCurve> run_fairness(Context& ctx, const ExperimentPlan& plan, const std::string& tag) {
  const auto curves = run_fairness_experiment(plan, ctx.options.threads);
  auto f = ctx.out.open(prefixed(tag, "fairness.csv"));
  CsvWriter csv(f, {"policy", "window_units", "window_slots", "mean_fi", "fi_longrun"});
  csv.comment_block(ctx.manifest);
  csv.write_header();
  for (const auto& c : curves) {
    for (std::size_t w = 0; w < c.window_units.size(); ++w) {
      csv.field(c.policy).field(c.window_units[w]).field(std::uint64_t{c.window_slots[w]});
      csv.field(c.mean_fi[w]).field(c.fi_longrun).end_row();
    }
    ctx.log << "fairness " << c.policy << ": long-run " << format_number(c.fi_longrun) << '\n';
  }
  return curves;
}

const FairnessCurve* find_curve(const std::vector<FairnessCurve>& curves, std::string_view label) {
  for (const auto& c : curves) {
    if (c.policy == label) return &c;
  }
  return nullptr;
}

// ---- protocol ---------------------------------------------------------------

int run_protocol(Context& ctx, const ExperimentPlan& plan) {
  const PolicyEntry* relaxed = nullptr;
  for (const auto& p : plan.policies) {
    if (p.kind == PolicyKind::relaxed_tdma) {
      relaxed = &p;
      break;
    }
  }
  PolicyEntry fallback{PolicyKind::relaxed_tdma, std::min<std::size_t>(2, plan.config.num_users)};
  const PolicyEntry& policy = relaxed ? *relaxed : fallback;
  const double snr_db = plan.snr_db[plan.snr_db.size() / 2];
  const NetworkConfig config = plan.config.at_snr_db(snr_db);
  const auto pattern = policy.groupings(config).front();

  auto trace = ctx.out.open("protocol_trace.csv");
  std::ostringstream head;
  CsvWriter(head, {}).comment_block(ctx.manifest);
  trace << head.str();
  const auto report = compare_protocol_to_centralized(config, pattern, plan.protocol,
                                                      plan.fading.mode(config.slot_duration),
                                                      plan.base_seed, ctx.options.protocol_slots, &trace);

  auto f = ctx.out.open("protocol_report.csv");
  CsvWriter csv(f, {"policy", "snr_db", "vulnerable_window_s", "slots", "pair_mismatches",
                    "outage_mismatches", "rts_per_slot", "collision_rate", "mean_backoff_s",
                    "protocol_outage", "centralized_outage"});
  csv.comment_block(ctx.manifest);
  csv.write_header();
  const auto n = static_cast<double>(report.slots);
  csv.field(policy.label()).field(snr_db).field(plan.protocol.vulnerable_window).field(report.slots);
  csv.field(report.pair_mismatches).field(report.outage_mismatches);
  csv.field(report.overhead.rts_per_slot).field(report.overhead.collision_rate);
  csv.field(report.overhead.mean_backoff);
  csv.field(static_cast<double>(report.protocol_outages) / n);
  csv.field(static_cast<double>(report.centralized_outages) / n).end_row();

  ctx.log << "protocol " << policy.label() << " at " << format_number(snr_db) << " dB over "
          << report.slots << " slots: mismatches = " << report.pair_mismatches
          << ", rts/slot = " << format_number(report.overhead.rts_per_slot)
          << ", collision rate = " << format_number(report.overhead.collision_rate) << '\n';

  if (ctx.options.check && plan.protocol.vulnerable_window == 0.0) {
    if (report.pair_mismatches != 0) ctx.fail_check("protocol selected a different pair");
    if (report.overhead.rts_per_slot != 1.0) ctx.fail_check("more than one RTS in a slot");
    if (!ctx.check_failed) ctx.pass_check("protocol matches centralized selection");
  }
  return kOk;
}

// ---- plot scripts -----------------------------------------------------------

constexpr std::string_view kPlotPrelude = R"(import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent


def rows(name):
    with open(here / name) as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))

)";

void write_plot_script(Context& ctx, const std::string& kind, const std::vector<std::string>& files) {
  if (!ctx.options.plot_script) return;
  std::ostringstream py;
  py << kPlotPrelude;
  for (const auto& file : files) {
    const std::string stem = file.substr(0, file.rfind('.'));
    py << "\nseries = defaultdict(lambda: ([], []))\n";
    if (kind == "outage") {
      py << "for r in rows(\"" << file << "\"):\n"
         << "    key = r[\"policy\"] + \" (\" + r[\"source\"] + \")\"\n"
         << "    series[key][0].append(float(r[\"snr_db\"]))\n"
         << "    series[key][1].append(float(r[\"outage\"]))\n"
         << "plt.figure()\n"
         << "for key, (x, y) in series.items():\n"
         << "    plt.semilogy(x, y, \"o\" if key.endswith(\"(sim)\") else \"-\", label=key)\n"
         << "plt.xlabel(\"P0/N0 (dB)\")\nplt.ylabel(\"outage probability\")\n";
    } else {
      py << "for r in rows(\"" << file << "\"):\n"
         << "    series[r[\"policy\"]][0].append(float(r[\"window_units\"]))\n"
         << "    series[r[\"policy\"]][1].append(float(r[\"mean_fi\"]))\n"
         << "plt.figure()\n"
         << "for key, (x, y) in series.items():\n"
         << "    plt.semilogx(x, y, \"-o\", label=key)\n"
         << "plt.xlabel(\"window (normalized Doppler units)\")\nplt.ylabel(\"Jain index\")\n";
    }
    py << "plt.grid(True, which=\"both\", alpha=0.3)\nplt.legend()\n"
       << "plt.savefig(here / \"" << stem << ".png\", dpi=150)\n";
  }
  ctx.out.write("plot.py", py.str());
}

// ---- figures ----------------------------------------------------------------

int run_figure(Context& ctx, int figure, const std::vector<FigurePlan>& plans) {
  std::vector<std::string> plotted;
  switch (figure) {
    case 1: {
      const auto res = run_outage(ctx, plans.front().plan, "");
      plotted.push_back("outage.csv");
      if (ctx.options.check) check_agreement(ctx, res);
      break;
    }
    case 2: {
      auto f = ctx.out.open("outage.csv");
      CsvWriter csv(f, {"snr_db", "policy", "source", "outage", "ci_low", "ci_high", "alpha"});
      csv.comment_block(ctx.manifest);
      csv.write_header();
      const double nan = std::nan("");
      for (const auto& fp : plans) {
        const auto& c = fp.plan.config;
        std::vector<double> grid;
        for (int i = 0; i <= 160; ++i) grid.push_back(0.25 * i);
        const auto tdma = make_curve("tdma", grid, [&](double eta) {
          return outage_symmetric_tdma(c.num_relays, c.alpha, c.snr_threshold, 1.0, eta);
        });
        const auto bound = make_curve("lower_bound", grid, [&](double eta) {
          return outage_symmetric_bound(c.num_relays, c.alpha, c.snr_threshold, 1.0, eta);
        });
        const auto greedy = make_curve("greedy", grid, [&](double eta) { return outage_exact(c, eta); });
        for (const auto* curve : {&tdma, &bound, &greedy}) {
          for (std::size_t i = 0; i < grid.size(); ++i) {
            csv.field(grid[i]).field(curve->label).field("analytic").field(curve->outage[i]);
            csv.field(nan).field(nan).field(c.alpha).end_row();
          }
        }
        const double gap = measure_gap_db(tdma, bound, 1e-4);
        ctx.log << "power gap alpha=" << format_number(c.alpha) << ": measured " << format_number(gap)
                << " dB, expected " << format_number(power_gap_db(c.alpha)) << " dB\n";
        if (ctx.options.check) {
          if (std::abs(gap - power_gap_db(c.alpha)) > 0.1) {
            ctx.fail_check("power gap at alpha=" + format_number(c.alpha));
          } else {
            ctx.pass_check("power gap at alpha=" + format_number(c.alpha));
          }
        }
      }
      plotted.push_back("outage.csv");
      break;
    }
    case 3:
      for (const auto& fp : plans) {
        const auto res = run_diversity(ctx, fp.plan, fp.tag);
        if (ctx.options.check) check_diversity(ctx, fp.plan, res);
      }
      break;
    case 4: {
      const auto& plan = plans.front().plan;
      const auto res = run_outage(ctx, plan, "");
      plotted.push_back("outage.csv");
      if (ctx.options.check) {
        // Highest SNR where the two-user row collected enough events.
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < res.rows.size(); ++i) {
          const auto& r = res.rows[i];
          if (r.policy.rfind("relaxed_k2", 0) == 0 && !r.cap_hit && r.outage_events >= plan.min_outage_events) {
            best = i;
          }
        }
        if (!best) {
          ctx.fail_check("no two-user point collected enough outage events");
          break;
        }
        const double db = res.rows[*best].snr_db;
        auto at = [&](std::string_view prefix) {
          for (const auto& r : res.rows) {
            if (r.snr_db == db && r.policy.rfind(prefix, 0) == 0) return r.outage;
          }
          return std::nan("");
        };
        const std::size_t s = static_cast<std::size_t>(
            std::find(plan.snr_db.begin(), plan.snr_db.end(), db) - plan.snr_db.begin());
        const double k1 = at("relaxed_k1"), k2 = at("relaxed_k2"), k4 = at("relaxed_k4"),
                     k8 = at("relaxed_k8");
        const double rel = std::abs(k2 - res.bound[s]) / res.bound[s];
        ctx.log << "two-user outage at " << format_number(db) << " dB: " << format_number(k2)
                << ", bound " << format_number(res.bound[s]) << ", relative gap " << format_number(rel)
                << '\n';
        if (rel > 0.1) ctx.fail_check("two-user outage not within 10% of the bound");
        if (!((k2 - k4) < (k1 - k2) && (k2 - k8) < (k1 - k2))) {
          ctx.fail_check("k=4/8 gains are not smaller than the k=2 gain");
        } else {
          ctx.pass_check("gains beyond k=2 are marginal");
        }
      }
      break;
    }
    case 5:
    case 6:
    case 7: {
      const auto curves = run_fairness(ctx, plans.front().plan, "");
      plotted.push_back("fairness.csv");
      if (!ctx.options.check) break;
      if (figure == 5) {
        for (const auto& c : curves) {
          if (std::abs(c.fi_longrun - 1.0) > 0.02) ctx.fail_check(c.policy + " long-run index not near 1");
        }
      } else if (figure == 6) {
        const auto* k2 = find_curve(curves, "relaxed_k2_random");
        const auto* g = find_curve(curves, "greedy");
        if (!k2 || !g || k2->fi_longrun - g->fi_longrun < 0.1) {
          ctx.fail_check("two-user grouping does not raise the long-run index by 0.1");
        }
      } else {
        const auto* sim = find_curve(curves, "relaxed_k2_similar_gain");
        const auto* rnd = find_curve(curves, "relaxed_k2_random");
        if (!sim || !rnd || !(sim->fi_longrun > rnd->fi_longrun)) {
          ctx.fail_check("similar-gain grouping is not fairer than random grouping");
        }
      }
      if (!ctx.check_failed) ctx.pass_check("fairness ordering");
      break;
    }
    default:
      throw std::invalid_argument("unknown figure id " + std::to_string(figure));
  }
  write_plot_script(ctx, figure >= 5 ? "fairness" : "outage", plotted);
  return kOk;
}

ExperimentPlan apply_overrides(ExperimentPlan plan, std::optional<std::uint64_t> seed,
                               std::optional<std::uint64_t> trials) {
  if (seed) plan.base_seed = *seed;
  if (trials) {
    plan.trials_per_point = *trials;
    plan.max_trials = std::max(plan.max_trials, *trials);
  }
  plan.validate();
  return plan;
}

int dispatch(const Options& options, std::ostream& log, RunInfo info) {
  Context ctx{options, log, OutputDir(options.out_dir), {}, false};

  if (info.command == "figures") {
    if (!info.figure) throw std::invalid_argument("figures needs --figure {1..7}");
    const auto plans = figure_plans(*info.figure, info.seed, info.trials);
    for (const auto& fp : plans) {
      const std::string file = prefixed(fp.tag, "plan.yaml");
      info.plan_files.push_back(file);
      ctx.out.write(file, serialize_plan(fp.plan));
    }
    ctx.manifest = info.yaml();
    ctx.out.write("manifest.yaml", ctx.manifest);
    log << "figure " << *info.figure << " -> " << ctx.out.path().string() << '\n';
    run_figure(ctx, *info.figure, plans);
  } else {
    if (!options.config) throw std::invalid_argument(info.command + " needs --config");
    const auto plan = apply_overrides(parse_config(*options.config), info.seed, info.trials);
    ctx.manifest = info.yaml() + serialize_plan(plan);
    ctx.out.write("manifest.yaml", ctx.manifest);
    if (info.command == "outage") {
      const auto res = run_outage(ctx, plan, "");
      write_plot_script(ctx, "outage", {"outage.csv"});
      if (options.check) check_agreement(ctx, res);
    } else if (info.command == "diversity") {
      const auto res = run_diversity(ctx, plan, "");
      if (options.check) check_diversity(ctx, plan, res);
    } else if (info.command == "fairness") {
      run_fairness(ctx, plan, "");
      write_plot_script(ctx, "fairness", {"fairness.csv"});
    } else if (info.command == "protocol") {
      run_protocol(ctx, plan);
    } else {
      throw std::invalid_argument("unknown command '" + info.command + "'");
    }
  }
  return ctx.check_failed ? kCheckFailed : kOk;
}

// Reads a manifest's run section and rebuilds the original invocation. The
// plan itself comes from the manifest, so overrides are already applied.
int replay(const Options& options, std::ostream& log) {
  if (!options.config) throw std::invalid_argument("replay needs --config pointing at a manifest");
  YAML::Node root;
  try {
    root = YAML::LoadFile(options.config->string());
  } catch (const YAML::Exception& e) {
    throw ConfigError(options.config->string(), e.mark.line + 1, e.msg);
  }
  const auto run = root["run"];
  if (!run || !run["command"]) {
    throw ConfigError(options.config->string(), 0, "manifest has no run.command");
  }
  RunInfo info;
  info.command = run["command"].as<std::string>();
  if (run["config"]) info.config = run["config"].as<std::string>();
  if (run["figure"]) info.figure = run["figure"].as<int>();
  if (run["seed"]) info.seed = run["seed"].as<std::uint64_t>();
  if (run["trials"]) info.trials = run["trials"].as<std::uint64_t>();
  Options replayed = options;
  replayed.command = info.command;
  replayed.figure = info.figure;
  if (run["protocol_slots"]) replayed.protocol_slots = run["protocol_slots"].as<std::uint64_t>();
  info.protocol_slots = replayed.protocol_slots;
  if (info.command != "figures") {
    // The manifest doubles as a fully resolved config.
    replayed.config = options.config;
  }
  log << "replaying " << info.command << " from " << options.config->string() << '\n';
  return dispatch(replayed, log, info);
}

}  // namespace

NetworkConfig table_one_network() { return plan_from(table_one_yaml(), "table-one").config; }

NetworkConfig near_far_network(std::uint64_t gain_seed) {
  return plan_from(near_far_yaml(gain_seed), "near-far").config;
}

NetworkConfig uniform_gain_network(std::size_t users, std::size_t relays, std::uint64_t gain_seed) {
  return plan_from(uniform_yaml(users, relays, gain_seed), "uniform").config;
}

std::vector<FigurePlan> figure_plans(int figure, std::optional<std::uint64_t> seed,
                                     std::optional<std::uint64_t> trials) {
  const std::string sweep_0_30 = "sweep:\n  snr_db: {start: 0, stop: 30, step: 2}\n";
  const std::string markov = "fading:\n  kind: gauss_markov\n  doppler_hz: 15\n";
  const std::string windows =
      "fairness:\n  window_units: [0.25, 0.5, 1, 2, 5, 10, 20, 50, 100]\n  snr_db: 15\n"
      "  slots: 200000\n";
  std::vector<FigurePlan> out;
  auto add = [&](std::string tag, const std::string& yaml) {
    out.push_back({std::move(tag), apply_overrides(plan_from(yaml, "figure-" + std::to_string(figure)),
                                                   seed, trials)});
  };
  switch (figure) {
    case 1:
      add("", table_one_yaml() + sweep_0_30 + "policies:\n  - {kind: greedy}\n  - {kind: tdma}\n");
      break;
    case 2:
      for (double alpha : {0.5, 0.8}) {
        add(alpha == 0.5 ? "alpha0.5" : "alpha0.8",
            symmetric_yaml(8, 5, alpha) + sweep_0_30 + "policies:\n  - {kind: greedy}\n  - {kind: tdma}\n");
      }
      break;
    case 3:
      for (std::size_t n : {5u, 8u}) {
        for (std::size_t m : {2u, 4u, 8u}) {
          add("n" + std::to_string(n) + "_m" + std::to_string(m),
              uniform_yaml(m, n, 2026) +
                  "sweep:\n  snr_db: {start: 0, stop: 20, step: 1}\n  trials_per_point: 20000\n"
                  "  max_trials: 2000000\npolicies:\n  - {kind: greedy}\n");
        }
      }
      break;
    case 4:
      add("", near_far_yaml(2026) +
                  "sweep:\n  snr_db: {start: 0, stop: 20, step: 2}\n  trials_per_point: 20000\n"
                  "policies:\n"
                  "  - {kind: relaxed, k: 1, grouping: random, seed: 1, patterns: 100}\n"
                  "  - {kind: relaxed, k: 2, grouping: random, seed: 1, patterns: 100}\n"
                  "  - {kind: relaxed, k: 4, grouping: random, seed: 1, patterns: 100}\n"
                  "  - {kind: relaxed, k: 8, grouping: random, seed: 1, patterns: 100}\n");
      break;
    case 5:
      add("", symmetric_yaml(8, 5, 0.5) + markov + windows +
                  "policies:\n  - {kind: relaxed, k: 2, grouping: fixed_order}\n"
                  "  - {kind: relaxed, k: 4, grouping: fixed_order}\n  - {kind: greedy}\n");
      break;
    case 6:
      add("", near_far_yaml(2026) + markov + windows +
                  "policies:\n  - {kind: greedy}\n"
                  "  - {kind: relaxed, k: 2, grouping: random, seed: 1, patterns: 20}\n");
      break;
    case 7:
      add("", near_far_yaml(2026) + markov + windows +
                  "policies:\n  - {kind: relaxed, k: 2, grouping: similar_gain}\n"
                  "  - {kind: relaxed, k: 2, grouping: dissimilar_gain}\n"
                  "  - {kind: relaxed, k: 2, grouping: random, seed: 1, patterns: 20}\n");
      break;
    default:
      throw std::invalid_argument("unknown figure id " + std::to_string(figure) + " (expected 1..7)");
  }
  return out;
}

double analytic_outage(const NetworkConfig& config, const PolicyEntry& policy, double eta) {
  switch (policy.kind) {
    case PolicyKind::greedy:
      return outage_exact(config, eta);
    case PolicyKind::fixed_tdma:
      return outage_tdma(config, eta);
    case PolicyKind::relaxed_tdma:
      break;
  }
  const auto patterns = policy.groupings(config);
  double sum = 0.0;
  for (const auto& p : patterns) sum += outage_relaxed_tdma(config, p, eta);
  return sum / static_cast<double>(patterns.size());
}

unsigned threads_from_environment() {
  if (const char* env = std::getenv("RELAYSCHED_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 1024ul));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const Options& options, std::ostream& log, std::ostream& err) {
  try {
    if (options.command == "replay") return replay(options, log);
    RunInfo info;
    info.command = options.command;
    if (options.config) info.config = options.config->string();
    info.figure = options.figure;
    info.seed = options.seed;
    info.trials = options.trials;
    info.protocol_slots = options.protocol_slots;
    return dispatch(options, log, info);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const YAML::Exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace relaysched::cli
