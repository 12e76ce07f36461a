from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Mapping

import numpy as np

from ..errors import ConfigError

__all__ = ["CqiTable", "ScenarioConfig", "default_cqi_table"]


@dataclass(frozen=True)
class CqiTable:
    """CQI level -> SINR threshold, coding rate and raw per-RB bits.

    Index 0 of each array is CQI 1. A UE whose SINR is below the CQI 1
    threshold reports CQI 0 and cannot be scheduled.
    """

    sinr_thresholds_db: tuple[float, ...]
    coding_rates: tuple[float, ...]
    max_coding_rate: float
    rb_bits: tuple[float, ...]  # raw bits per RB per TTI before coding

    def __post_init__(self):
        n = len(self.sinr_thresholds_db)
        if not (len(self.coding_rates) == len(self.rb_bits) == n) or n == 0:
            raise ConfigError("CQI table columns must have equal, non-zero length")
        for col in (self.sinr_thresholds_db, self.coding_rates):
            if any(b <= a for a, b in zip(col, col[1:])):
                raise ConfigError("CQI thresholds and coding rates must be strictly increasing")
        if any(b < a for a, b in zip(self.rb_bits, self.rb_bits[1:])) or self.rb_bits[0] <= 0:
            raise ConfigError("per-RB bits must be positive and non-decreasing")
        if self.coding_rates[-1] > self.max_coding_rate:
            raise ConfigError("coding rates must not exceed the maximum coding rate")

    @property
    def levels(self) -> int:
        return len(self.sinr_thresholds_db)

    def cqi(self, sinr_db: np.ndarray) -> np.ndarray:
        """CQI level 0..N for each SINR (0 = out of range)."""
        return np.searchsorted(np.asarray(self.sinr_thresholds_db), sinr_db, side="right")

    def effective_bits(self, cqi: np.ndarray) -> np.ndarray:
        """Coded bits one RB carries per TTI at each CQI (0 for CQI 0)."""
        table = np.concatenate(([0.0], np.asarray(self.coding_rates) * np.asarray(self.rb_bits)))
        return table[cqi]


def default_cqi_table() -> CqiTable:
    levels = 15
    thresholds = np.linspace(-6.7, 22.7, levels)
    rates = np.linspace(0.076, 0.926, levels)
    # QPSK / 16QAM / 64QAM over 12 subcarriers x 14 symbols
    modulation = [2] * 6 + [4] * 3 + [6] * 6
    return CqiTable(
        sinr_thresholds_db=tuple(float(x) for x in thresholds),
        coding_rates=tuple(float(x) for x in rates),
        max_coding_rate=0.926,
        rb_bits=tuple(float(12 * 14 * q) for q in modulation),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    num_bs: int = 40
    num_ue: int = 320
    bs_altitude_m: float = 25.0
    inter_site_distance_m: float = 500.0
    bandwidth_mhz: float = 20.0
    rb_bandwidth_khz: float = 180.0
    tx_power_levels_dbm: tuple[float, ...] = (50.0, 51.0, 52.0, 53.0)
    initial_tx_power_dbm: float = 53.0
    power_slope: float = 21.45  # g_i
    power_offset_w: float = 354.44  # h_i
    energy_mix: float = 0.5  # eta_i
    standby_power_w: float = 0.0
    carrier_ghz: float = 3.5
    antenna_angles_deg: tuple[float, ...] = (0.0, 5.0, 15.0)
    initial_antenna_angle_deg: float = 0.0
    shadow_range_db: tuple[float, float] = (-15.0, 15.0)
    shadow_coherence_ms: int = 1000
    noise_density_dbm_hz: float = -174.0
    min_rx_power_dbm: float = -100.0
    arrival_rates: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
    packet_bits: float = 100_000.0  # bits per arrival (one burst)
    first_packet_bits: float = 320.0
    speed_mean: float = 3.0
    speed_var: float = 1.0
    heading_interval_ms: int = 1000
    mobility_interval_ms: int = 100
    tti_ms: int = 1
    rng_seed: int = 0
    cqi_table: CqiTable = field(default_factory=default_cqi_table)

    def __post_init__(self):
        if self.num_bs < 1 or self.num_ue < 1:
            raise ConfigError("num_bs and num_ue must be >= 1")
        if self.bandwidth_mhz <= 0 or self.rb_bandwidth_khz <= 0:
            raise ConfigError("bandwidths must be positive")
        if self.total_rbs < 1:
            raise ConfigError("bandwidth must hold at least one RB")
        if not 0.0 <= self.energy_mix <= 1.0:
            raise ConfigError("energy_mix must lie in [0, 1]")
        if not self.tx_power_levels_dbm or list(self.tx_power_levels_dbm) != sorted(self.tx_power_levels_dbm):
            raise ConfigError("tx_power_levels_dbm must be non-empty and ascending")
        if self.initial_tx_power_dbm not in self.tx_power_levels_dbm:
            raise ConfigError("initial_tx_power_dbm must be one of tx_power_levels_dbm")
        if self.initial_antenna_angle_deg not in self.antenna_angles_deg:
            raise ConfigError("initial_antenna_angle_deg must be one of antenna_angles_deg")
        if any(not 0.0 <= a < 90.0 for a in self.antenna_angles_deg):
            raise ConfigError("antenna angles must lie in [0, 90) degrees")
        if not self.arrival_rates or any(r <= 0 for r in self.arrival_rates):
            raise ConfigError("arrival rates must be positive")
        if self.packet_bits <= 0 or self.first_packet_bits <= 0:
            raise ConfigError("packet sizes must be positive")
        if self.shadow_range_db[0] > self.shadow_range_db[1]:
            raise ConfigError("shadow_range_db must be (low, high)")
        for name in ("tti_ms", "mobility_interval_ms", "heading_interval_ms", "shadow_coherence_ms"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.mobility_interval_ms % self.tti_ms:
            raise ConfigError("mobility_interval_ms must be a multiple of tti_ms")
        if self.speed_var < 0 or self.bs_altitude_m < 0:
            raise ConfigError("speed_var and bs_altitude_m must be non-negative")

    @property
    def total_rbs(self) -> int:
        return int(math.floor(self.bandwidth_mhz * 1000.0 / self.rb_bandwidth_khz + 1e-9))

    def with_overrides(self, **kwargs: Any) -> ScenarioConfig:
        return replace(self, **kwargs)

    @classmethod
    def desk(cls, **kwargs: Any) -> ScenarioConfig:
        """Small scenario used by the default experiment profile."""
        return cls(**{"num_bs": 4, "num_ue": 32, **kwargs})

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> ScenarioConfig:
        known = {f.name for f in fields(cls)} - {"cqi_table"}
        unknown = set(data) - known - {"cqi"}
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        kwargs = {}
        for key, value in data.items():
            if key == "cqi":
                kwargs["cqi_table"] = CqiTable(
                    tuple(value["sinr_thresholds_db"]),
                    tuple(value["coding_rates"]),
                    float(value["max_coding_rate"]),
                    tuple(value["rb_bits"]),
                )
            elif isinstance(value, list):
                kwargs[key] = tuple(value)
            else:
                kwargs[key] = value
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return asdict(self)
