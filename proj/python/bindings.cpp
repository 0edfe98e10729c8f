// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "relaysched/analytics.hpp"
#include "relaysched/config_io.hpp"
#include "relaysched/fairness.hpp"
#include "relaysched/scheduling.hpp"
#include "relaysched/simulator.hpp"

namespace py = pybind11;
using namespace relaysched;

namespace {

std::vector<std::vector<double>> to_rows(const GainMatrix& g) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    const auto row = g.row(r);
    rows.emplace_back(row.begin(), row.end());
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Relay selection and scheduling for two-hop uplinks";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_readwrite("num_users", &NetworkConfig::num_users)
      .def_readwrite("num_relays", &NetworkConfig::num_relays)
      .def_property(
          "mean_gain_ur", [](const NetworkConfig& c) { return to_rows(c.mean_gain_ur); },
          [](NetworkConfig& c, const std::vector<std::vector<double>>& rows) {
            c.mean_gain_ur = GainMatrix::from_rows(rows);
          })
      .def_readwrite("mean_gain_rb", &NetworkConfig::mean_gain_rb)
      .def_readwrite("total_power", &NetworkConfig::total_power)
      .def_readwrite("alpha", &NetworkConfig::alpha)
      .def_readwrite("noise_power", &NetworkConfig::noise_power)
      .def_readwrite("snr_threshold", &NetworkConfig::snr_threshold)
      .def_readwrite("slot_duration", &NetworkConfig::slot_duration)
      .def("snr", &NetworkConfig::snr)
      .def("validate", &NetworkConfig::validate)
      .def("at_snr_db", &NetworkConfig::at_snr_db, py::arg("snr_db"))
      .def(py::self == py::self);

  m.def("symmetric_network", &symmetric_network, py::arg("users"), py::arg("relays"), py::arg("sigma") = 1.0);

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def(py::init([](const std::vector<std::vector<double>>& ur, std::vector<double> rb) {
             return ChannelRealization{GainMatrix::from_rows(ur), std::move(rb)};
           }),
           py::arg("gain_ur"), py::arg("gain_rb"))
      .def_property_readonly("gain_ur", [](const ChannelRealization& c) { return to_rows(c.gain_ur); })
      .def_readonly("gain_rb", &ChannelRealization::gain_rb);

  py::class_<GroupingPattern>(m, "GroupingPattern")
      .def_readonly("group_size", &GroupingPattern::group_size)
      .def_readonly("groups", &GroupingPattern::groups)
      .def_readonly("seed", &GroupingPattern::seed)
      .def("group_for_slot", &GroupingPattern::group_for_slot, py::arg("slot"));

  m.def(
      "make_grouping",
      [](const std::string& strategy, std::size_t k, const NetworkConfig& c, std::uint64_t seed) {
        return make_grouping(parse_grouping_strategy(strategy), k, c, seed);
      },
      py::arg("strategy"), py::arg("k"), py::arg("config"), py::arg("seed") = 0);

  py::class_<SlotOutcome>(m, "SlotOutcome")
      .def_readonly("slot_index", &SlotOutcome::slot_index)
      .def_readonly("scheduled_user", &SlotOutcome::scheduled_user)
      .def_readonly("selected_relay", &SlotOutcome::selected_relay)
      .def_readonly("metric_w", &SlotOutcome::metric_w)
      .def_readonly("outage", &SlotOutcome::outage);

  m.def("schedule_fixed_tdma", &schedule_fixed_tdma, py::arg("slot_index"), py::arg("channel"), py::arg("config"));
  m.def("schedule_greedy", &schedule_greedy, py::arg("channel"), py::arg("config"), py::arg("slot_index") = 0);
  m.def("schedule_relaxed_tdma", &schedule_relaxed_tdma, py::arg("slot_index"), py::arg("pattern"),
        py::arg("channel"), py::arg("config"));

  // eta is P_0/N_0 in linear units.
  m.def("outage_exact", py::overload_cast<const NetworkConfig&, double>(&outage_exact), py::arg("config"),
        py::arg("eta"));
  m.def("outage_tdma", &outage_tdma, py::arg("config"), py::arg("eta"));
  m.def("outage_relaxed_tdma", &outage_relaxed_tdma, py::arg("config"), py::arg("pattern"), py::arg("eta"));
  m.def("outage_lower_bound", py::overload_cast<const NetworkConfig&, double>(&outage_lower_bound),
        py::arg("config"), py::arg("eta"));

  m.def(
      "jain_index", [](const std::vector<double>& x) { return jain_index(std::span<const double>(x)); },
      py::arg("airtime"));
  m.def("fi_lower_bound", &fi_lower_bound, py::arg("k"), py::arg("users"));

  m.def(
      "wilson_interval",
      [](std::uint64_t events, std::uint64_t trials, double z) {
        const auto ci = wilson_interval(events, trials, z);
        return py::make_tuple(ci.low, ci.high);
      },
      py::arg("events"), py::arg("trials"), py::arg("z") = kZ95);

  py::class_<ExperimentPlan>(m, "ExperimentPlan")
      .def_readwrite("config", &ExperimentPlan::config)
      .def_readwrite("snr_db", &ExperimentPlan::snr_db)
      .def_readwrite("trials_per_point", &ExperimentPlan::trials_per_point)
      .def_readwrite("max_trials", &ExperimentPlan::max_trials)
      .def_readwrite("min_outage_events", &ExperimentPlan::min_outage_events)
      .def_readwrite("block_size", &ExperimentPlan::block_size)
      .def_readwrite("base_seed", &ExperimentPlan::base_seed)
      .def_property_readonly("policies",
                             [](const ExperimentPlan& p) {
                               std::vector<std::string> labels;
                               for (const auto& e : p.policies) labels.push_back(e.label());
                               return labels;
                             })
      .def("validate", &ExperimentPlan::validate)
      .def(py::self == py::self);

  m.def("parse_config", &parse_config, py::arg("path"));
  m.def("parse_config_string", &parse_config_string, py::arg("text"), py::arg("source") = "<config>");
  m.def("serialize_plan", &serialize_plan, py::arg("plan"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("snr_db", &SweepRow::snr_db)
      .def_readonly("policy", &SweepRow::policy)
      .def_readonly("outage", &SweepRow::outage)
      .def_readonly("ci_low", &SweepRow::ci_low)
      .def_readonly("ci_high", &SweepRow::ci_high)
      .def_readonly("fi_longrun", &SweepRow::fi_longrun)
      .def_readonly("delay_mean", &SweepRow::delay_mean)
      .def_readonly("delay_var", &SweepRow::delay_var)
      .def_readonly("slots", &SweepRow::slots)
      .def_readonly("outage_events", &SweepRow::outage_events)
      .def_readonly("cap_hit", &SweepRow::cap_hit)
      .def("__repr__", [](const SweepRow& r) {
        return "<SweepRow " + r.policy + " @" + std::to_string(r.snr_db) + " dB: " + std::to_string(r.outage) + ">";
      });

  m.def("run_sweep", &run_sweep, py::arg("plan"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  py::class_<FairnessCurve>(m, "FairnessCurve")
      .def_readonly("policy", &FairnessCurve::policy)
      .def_readonly("window_units", &FairnessCurve::window_units)
      .def_readonly("window_slots", &FairnessCurve::window_slots)
      .def_readonly("mean_fi", &FairnessCurve::mean_fi)
      .def_readonly("fi_longrun", &FairnessCurve::fi_longrun);

  m.def("run_fairness_experiment", &run_fairness_experiment, py::arg("plan"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
}
