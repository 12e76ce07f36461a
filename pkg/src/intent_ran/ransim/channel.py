"""Link-budget, load, energy and latency formulas.

Everything here is a pure function of its arguments and accepts numpy
arrays where that makes sense. Path loss and channel gain are in dB; SINR
is a linear ratio.
"""

from __future__ import annotations

import numpy as np

from ..errors import CapacityError, DomainError, SchedulingError

__all__ = [
    "channel_gain",
    "compute_energy",
    "compute_load",
    "dbm_to_mw",
    "dbm_to_w",
    "first_packet_latency",
    "link_distance",
    "max_power_w",
    "noise_power_mw",
    "path_loss",
    "sinr",
    "throughput",
]


def dbm_to_mw(dbm):
    return np.power(10.0, np.asarray(dbm, dtype=float) / 10.0)


def dbm_to_w(dbm):
    return dbm_to_mw(dbm) / 1000.0


def link_distance(bs_xy, ue_xy, altitude_m: float):
    """3-D distance from each BS (rows) to each UE (columns)."""
    bs_xy = np.atleast_2d(np.asarray(bs_xy, dtype=float))
    ue_xy = np.atleast_2d(np.asarray(ue_xy, dtype=float))
    dx = bs_xy[:, None, 0] - ue_xy[None, :, 0]
    dy = bs_xy[:, None, 1] - ue_xy[None, :, 1]
    return np.sqrt(altitude_m**2 + dx**2 + dy**2)


def path_loss(d, f_c_ghz):
    """Urban-macro LOS path loss in dB for distance ``d`` (m) at ``f_c_ghz``."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise DomainError("path loss needs a positive distance")
    out = 28.0 + 22.0 * np.log10(d) + 20.0 * np.log10(f_c_ghz)
    return float(out) if out.ndim == 0 else out


def channel_gain(path_loss_db, angle_deg, shadow_db):
    """Channel gain in dB including the antenna-tilt term and shadowing."""
    angle = np.asarray(angle_deg, dtype=float)
    if np.any(angle < 0) or np.any(angle >= 90.0):
        raise DomainError("antenna angle must lie in [0, 90) degrees")
    out = 10.0 - 20.0 * np.log10(np.cos(np.pi * angle / 180.0)) - path_loss_db - shadow_db
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def compute_load(allocated_rbs, total_rbs: int) -> float:
    """Fraction of a BS's RBs in use; ``allocated_rbs`` holds one entry per attached UE."""
    used = int(np.sum(allocated_rbs))
    if used > total_rbs:
        raise CapacityError(f"{used} RBs allocated but only {total_rbs} available")
    return used / total_rbs


def max_power_w(tx_power_dbm, slope: float, offset_w: float):
    """Affine power model on the transmit power converted to watts."""
    return slope * dbm_to_w(tx_power_dbm) + offset_w


def compute_energy(load, p_max_w, energy_mix: float, asleep=False, standby_w: float = 0.0):
    """Power draw of a BS in watts: a load-proportional part plus a fixed part."""
    load = np.asarray(load, dtype=float)
    active = (1.0 - energy_mix) * load * p_max_w + energy_mix * p_max_w
    out = np.where(asleep, standby_w, active)
    return float(out) if out.ndim == 0 else out


def noise_power_mw(density_dbm_hz: float, bandwidth_hz: float) -> float:
    return float(dbm_to_mw(density_dbm_hz + 10.0 * np.log10(bandwidth_hz)))


def sinr(signal_mw, interference_mw, noise_mw):
    """Linear SINR from linear received powers (mW)."""
    return np.asarray(signal_mw) / (np.asarray(interference_mw) + noise_mw)


def throughput(rbs, rb_bandwidth_hz: float, sinr_linear):
    """Shannon-style rate in bits/s of ``rbs`` resource blocks at ``sinr_linear``."""
    return np.asarray(rbs) * rb_bandwidth_hz * np.log2(1.0 + np.asarray(sinr_linear))


def first_packet_latency(
    arrival_ms: float,
    depart_ms: float,
    first_packet_bits: float,
    coding_rate: float,
    rbs: int,
    rb_bits: float,
    tti_ms: float = 1.0,
    scheduled: bool = True,
) -> float:
    """Queueing delay plus the time to carry the first packet on ``rbs`` RBs.

    ``rb_bits`` is the raw per-RB capacity per TTI; ``scheduled`` is False when
    the coding rate the channel needs exceeds the maximum, in which case the
    latency is undefined.
    """
    if not scheduled:
        raise SchedulingError("latency undefined: coding rate exceeds the maximum coding rate")
    if rbs < 1:
        raise SchedulingError("latency undefined without allocated RBs")
    if depart_ms < arrival_ms:
        raise SchedulingError("packet departs before it arrives")
    return (depart_ms - arrival_ms) + first_packet_bits / (coding_rate * rbs * rb_bits) * tti_ms
