"""Normalized multi-objective reward and the observation vector built from it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BoundsError
from ..intent_codec import ObjectiveBounds
from ..ransim.channel import max_power_w
from ..ransim.config import ScenarioConfig
from ..ransim.sim import NetworkState, TickMetrics

__all__ = [
    "DEFAULT_DELTAS",
    "OBS_DIM",
    "RewardWeights",
    "build_observations",
    "normalized_metrics",
    "reward",
    "reward_from_metrics",
]

DEFAULT_DELTAS = (0.8, 0.6, 0.2)
OBS_DIM = 7


@dataclass(frozen=True)
class RewardWeights:
    """Weights for throughput, energy and latency plus their normalization ranges.

    Units: throughput in bits/s, energy in W, latency in ms.
    """

    delta_thpt: float = DEFAULT_DELTAS[0]
    delta_energy: float = DEFAULT_DELTAS[1]
    delta_latency: float = DEFAULT_DELTAS[2]
    r_min: float = 0.0
    r_max: float = 1.0
    e_min: float = 0.0
    e_max: float = 1.0
    t_min: float = 0.0
    t_max: float = 1.0

    def __post_init__(self):
        for name in ("delta_thpt", "delta_energy", "delta_latency"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise BoundsError(f"{name} must be a finite non-negative number, got {v}")
        for lo, hi in (("r_min", "r_max"), ("e_min", "e_max"), ("t_min", "t_max")):
            if not getattr(self, hi) > getattr(self, lo):
                raise BoundsError(f"{hi}={getattr(self, hi)} must exceed {lo}={getattr(self, lo)}")

    @property
    def deltas(self) -> tuple[float, float, float]:
        return (self.delta_thpt, self.delta_energy, self.delta_latency)

    @classmethod
    def for_scenario(
        cls,
        config: ScenarioConfig,
        bounds: ObjectiveBounds | None = None,
        deltas: tuple[float, float, float] = DEFAULT_DELTAS,
    ) -> RewardWeights:
        """Per-BS ranges derived from the radio configuration.

        Energy spans sleep (0 W) to full load at the top power level;
        throughput spans 0 to every RB at the top CQI; latency spans the
        all-RB top-CQI transmission time to the intent's latency bound
        (or 1 ms without an intent).
        """
        table = config.cqi_table
        rbs = config.total_rbs
        top_sinr = 10.0 ** (table.sinr_thresholds_db[-1] / 10.0)
        r_max = rbs * config.rb_bandwidth_khz * 1e3 * math.log2(1.0 + top_sinr)
        e_max = float(max_power_w(config.tx_power_levels_dbm[-1], config.power_slope, config.power_offset_w))
        t_min = config.first_packet_bits / (table.coding_rates[-1] * rbs * table.rb_bits[-1]) * config.tti_ms
        t_max = bounds.latency_max_ms if bounds is not None else 1.0
        return cls(*deltas, r_min=0.0, r_max=r_max, e_min=0.0, e_max=e_max, t_min=t_min, t_max=t_max)


def normalized_metrics(thpt, energy, latency, w: RewardWeights) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Clip each metric into its range and map it onto [0, 1].

    A missing throughput (NaN) counts as the minimum and a missing latency
    as the best case, so a BS with nothing to serve is not penalized twice.
    """
    thpt = np.nan_to_num(np.asarray(thpt, dtype=float), nan=w.r_min)
    energy = np.asarray(energy, dtype=float)
    latency = np.nan_to_num(np.asarray(latency, dtype=float), nan=w.t_min)
    rn = (np.clip(thpt, w.r_min, w.r_max) - w.r_min) / (w.r_max - w.r_min)
    en = (np.clip(energy, w.e_min, w.e_max) - w.e_min) / (w.e_max - w.e_min)
    tn = (np.clip(latency, w.t_min, w.t_max) - w.t_min) / (w.t_max - w.t_min)
    return rn, en, tn


def reward(thpt, energy, latency, w: RewardWeights):
    rn, en, tn = normalized_metrics(thpt, energy, latency, w)
    out = w.delta_thpt * rn - w.delta_energy * en - w.delta_latency * tn
    return float(out) if np.ndim(out) == 0 else out


def reward_from_metrics(metrics: TickMetrics, w: RewardWeights) -> np.ndarray:
    """One reward per BS from a step's aggregates."""
    return np.asarray(reward(metrics.avg_thpt_bps, metrics.energy_w, metrics.avg_latency_ms, w), dtype=float)


def build_observations(state: NetworkState, metrics: TickMetrics, w: RewardWeights) -> np.ndarray:
    """(M, 7) observations: load, normalized E/R/T, power index, angle index, asleep."""
    cfg = state.config
    rn, en, tn = normalized_metrics(metrics.avg_thpt_bps, metrics.energy_w, metrics.avg_latency_ms, w)
    levels = np.asarray(cfg.tx_power_levels_dbm)
    angles = np.asarray(cfg.antenna_angles_deg)
    p_idx = np.abs(levels[None, :] - state.tx_power_dbm[:, None]).argmin(axis=1)
    a_idx = np.abs(angles[None, :] - state.antenna_deg[:, None]).argmin(axis=1)
    return np.column_stack(
        (
            np.clip(metrics.load, 0.0, 1.0),
            en,
            rn,
            tn,
            p_idx / max(len(levels) - 1, 1),
            a_idx / max(len(angles) - 1, 1),
            metrics.asleep.astype(float),
        )
    )
