"""Downlink RAN simulator: geometry, traffic, scheduling and BS energy."""

from .channel import (
    channel_gain,
    compute_energy,
    compute_load,
    first_packet_latency,
    link_distance,
    max_power_w,
    noise_power_mw,
    path_loss,
    sinr,
    throughput,
)
from .config import CqiTable, ScenarioConfig, default_cqi_table
from .sim import (
    METRICS_HEADER,
    BsState,
    NetworkState,
    Packet,
    TickMetrics,
    UeState,
    apply_operation,
    attach_ues,
    bs_view,
    init_scenario,
    refresh_links,
    round_robin,
    schedule_tti,
    sinr_and_throughput,
    snapshot,
    step,
    ue_view,
    wake_all,
    write_metrics_csv,
)

__all__ = [
    "BsState",
    "CqiTable",
    "METRICS_HEADER",
    "NetworkState",
    "Packet",
    "ScenarioConfig",
    "TickMetrics",
    "UeState",
    "apply_operation",
    "attach_ues",
    "bs_view",
    "channel_gain",
    "compute_energy",
    "compute_load",
    "default_cqi_table",
    "first_packet_latency",
    "init_scenario",
    "link_distance",
    "max_power_w",
    "noise_power_mw",
    "path_loss",
    "refresh_links",
    "round_robin",
    "schedule_tti",
    "sinr",
    "sinr_and_throughput",
    "snapshot",
    "step",
    "throughput",
    "ue_view",
    "wake_all",
    "write_metrics_csv",
]
