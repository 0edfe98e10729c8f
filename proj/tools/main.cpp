// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <iostream>

#include "relaysched/cli.hpp"

int main(int argc, char** argv) {
  namespace rc = relaysched::cli;
  rc::Options opt;
  opt.threads = rc::threads_from_environment();

  CLI::App app{"relaysched: outage, fairness and protocol experiments for two-hop relay scheduling"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  int figure = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config, "YAML configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->default_str("relaysched-out");
    sub->add_option("--seed", seed, "override the base seed");
    sub->add_option("--trials", trials, "override the minimum trials per point");
    sub->add_flag("--check", opt.check, "compare against analytic expectations; exit 3 on mismatch");
    sub->add_flag("--plot", opt.plot_script, "also write a matplotlib script next to the CSVs");
    sub->add_option("--threads", opt.threads, "worker threads (default: RELAYSCHED_THREADS)");
  };

  auto* outage = app.add_subcommand("outage", "outage sweep, simulated and analytic");
  add_common(outage, true);
  auto* diversity = app.add_subcommand("diversity", "fitted diversity order per policy");
  add_common(diversity, true);
  auto* fairness = app.add_subcommand("fairness", "windowed Jain index under correlated fading");
  add_common(fairness, true);
  auto* protocol = app.add_subcommand("protocol", "distributed contention against centralized selection");
  add_common(protocol, true);
  protocol->add_option("--slots", opt.protocol_slots, "slots to simulate")->default_val(100000);
  auto* figures = app.add_subcommand("figures", "canned figure configurations");
  add_common(figures, false);
  figures->add_option("--figure", figure, "figure id")->required()->check(CLI::Range(1, 7));
  auto* replay = app.add_subcommand("replay", "re-run from a manifest.yaml");
  replay->add_option("--config", config, "manifest.yaml written by an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", out, "output directory")->default_str("relaysched-out");
  replay->add_option("--threads", opt.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rc::kOk : rc::kValidation;
  }

  for (auto* sub : {outage, diversity, fairness, protocol, figures, replay}) {
    if (!sub->parsed()) continue;
    opt.command = sub->get_name();
    if (!config.empty()) opt.config = config;
    if (!out.empty()) opt.out_dir = out;
    if (sub == replay) continue;
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--trials")) opt.trials = trials;
    if (sub == figures) opt.figure = figure;
  }
  if (opt.threads == 0) opt.threads = 1;
  return rc::run(opt, std::cout, std::cerr);
}
