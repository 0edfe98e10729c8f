"""Relay selection and scheduling for two-hop uplinks."""

from ._core import (
    ChannelRealization,
    ConfigError,
    ExperimentPlan,
    FairnessCurve,
    GroupingPattern,
    NetworkConfig,
    SweepRow,
    fi_lower_bound,
    jain_index,
    make_grouping,
    outage_exact,
    outage_lower_bound,
    outage_relaxed_tdma,
    outage_tdma,
    parse_config,
    parse_config_string,
    run_fairness_experiment,
    run_sweep,
    schedule_fixed_tdma,
    schedule_greedy,
    schedule_relaxed_tdma,
    serialize_plan,
    symmetric_network,
    wilson_interval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
