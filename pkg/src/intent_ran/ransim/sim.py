"""Discrete-time multi-BS / multi-UE downlink simulator.

State is stored column-wise in numpy arrays; :func:`bs_view` and
:func:`ue_view` return per-entity snapshots. Link quantities (received power,
attachment, SINR, CQI) are refreshed whenever geometry, shadowing or a BS
configuration changes, at most once per mobility interval, and are constant
in between. Idle TTIs with no schedulable backlog are skipped in bulk.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from ..errors import ConfigError, InvalidOp
from ..ontology import EnergySavingOp, OpKind
from .channel import (
    channel_gain,
    compute_energy,
    dbm_to_mw,
    first_packet_latency,
    link_distance,
    max_power_w,
    noise_power_mw,
    path_loss,
)
from .config import ScenarioConfig

__all__ = [
    "BsState",
    "METRICS_HEADER",
    "NetworkState",
    "Packet",
    "TickMetrics",
    "UeState",
    "apply_operation",
    "attach_ues",
    "bs_view",
    "init_scenario",
    "refresh_links",
    "round_robin",
    "schedule_tti",
    "sinr_and_throughput",
    "snapshot",
    "step",
    "ue_view",
    "wake_all",
    "write_metrics_csv",
]

METRICS_HEADER = ("tick", "bs_id", "load", "energy_w", "avg_thpt_bps", "avg_latency_ms", "attached_ues")


class Packet:
    """One downlink arrival queued at the serving BS.

    ``depart_ms`` is when the packet leaves the buffer (its first RBs are
    granted); ``done_ms`` is when its last bit is delivered.
    """

    __slots__ = ("size_bits", "arrival_ms", "depart_ms", "done_ms", "remaining")

    def __init__(self, size_bits: float, arrival_ms: int):
        self.size_bits = size_bits
        self.arrival_ms = arrival_ms
        self.depart_ms: int | None = None
        self.done_ms: int | None = None
        self.remaining = size_bits

    def __repr__(self) -> str:
        return f"Packet({self.size_bits:g} bits, in={self.arrival_ms}, out={self.depart_ms}, done={self.done_ms})"


@dataclass(frozen=True)
class BsState:
    position: tuple[float, float]
    tx_power_dbm: float
    antenna_angle_deg: float
    asleep: bool
    total_rbs: int
    buffer: tuple[Packet, ...]
    load: float
    energy_w: float


@dataclass(frozen=True)
class UeState:
    position: tuple[float, float]
    speed: float
    heading: float
    serving_bs: int | None
    cqi: int
    arrival_rate: float
    allocated_rbs: int


@dataclass
class NetworkState:
    config: ScenarioConfig
    bs_xy: np.ndarray
    area: tuple[float, float]
    tx_power_dbm: np.ndarray
    antenna_deg: np.ndarray
    asleep: np.ndarray
    ue_xy: np.ndarray
    speed: np.ndarray
    heading: np.ndarray
    arrival_rate: np.ndarray
    next_arrival_ms: np.ndarray
    shadow_db: np.ndarray
    rng_mobility: np.random.Generator
    rng_traffic: np.random.Generator
    rng_shadow: np.random.Generator
    time_ms: int = 0
    tick: int = 0
    serving: np.ndarray = field(default=None)
    rx_dbm: np.ndarray = field(default=None)
    sinr: np.ndarray = field(default=None)
    cqi: np.ndarray = field(default=None)
    queues: list = field(default_factory=list)
    backlog_bits: np.ndarray = field(default=None)
    backlogged: set = field(default_factory=set)
    rr_offset: np.ndarray = field(default=None)
    last_alloc: np.ndarray = field(default=None)
    last_load: np.ndarray = field(default=None)
    reattach_tick: np.ndarray = field(default=None)  # UE may not attach before this tick
    arrivals: np.ndarray = field(default=None)  # packets generated per UE so far
    next_mobility_ms: int = 0
    next_heading_ms: int = 0
    next_shadow_ms: int = 0
    last_move_ms: int = 0
    dirty: bool = True

    @property
    def num_bs(self) -> int:
        return len(self.bs_xy)

    @property
    def num_ue(self) -> int:
        return len(self.ue_xy)

    @property
    def total_rbs(self) -> int:
        return self.config.total_rbs


@dataclass
class TickMetrics:
    """Per-step metrics. Link matrices are indexed ``[bs, ue]`` and NaN where unobserved."""

    tick: int
    time_ms: int
    duration_ms: int
    load: np.ndarray
    energy_w: np.ndarray
    avg_thpt_bps: np.ndarray
    avg_latency_ms: np.ndarray
    attached_ues: np.ndarray
    asleep: np.ndarray
    link_thpt_bps: np.ndarray
    link_latency_ms: np.ndarray

    @classmethod
    def empty(cls, state: NetworkState) -> TickMetrics:
        m, k = state.num_bs, state.num_ue
        nan_mk = np.full((m, k), np.nan)
        return cls(
            tick=state.tick,
            time_ms=state.time_ms,
            duration_ms=0,
            load=np.zeros(m),
            energy_w=np.zeros(m),
            avg_thpt_bps=np.full(m, np.nan),
            avg_latency_ms=np.full(m, np.nan),
            attached_ues=np.zeros(m, dtype=int),
            asleep=state.asleep.copy(),
            link_thpt_bps=nan_mk,
            link_latency_ms=nan_mk.copy(),
        )

    @property
    def is_empty(self) -> bool:
        return self.duration_ms == 0

    def rows(self) -> Iterable[tuple]:
        for b in range(len(self.load)):
            yield (
                self.tick,
                b,
                float(self.load[b]),
                float(self.energy_w[b]),
                float(self.avg_thpt_bps[b]),
                float(self.avg_latency_ms[b]),
                int(self.attached_ues[b]),
            )


def write_metrics_csv(metrics: Iterable[TickMetrics], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    for m in metrics:
        for row in m.rows():
            writer.writerow([row[0], row[1], *(repr(v) for v in row[2:6]), row[6]])


def _bs_layout(num_bs: int, isd: float) -> tuple[np.ndarray, tuple[float, float]]:
    """Hexagonal-style grid: rows ISD*sqrt(3)/2 apart, odd rows shifted by ISD/2."""
    cols = math.ceil(math.sqrt(num_bs))
    rows = math.ceil(num_bs / cols)
    row_gap = isd * math.sqrt(3.0) / 2.0
    margin = isd / 2.0
    xy = []
    for idx in range(num_bs):
        r, c = divmod(idx, cols)
        x = margin + c * isd + (isd / 2.0 if r % 2 else 0.0)
        y = margin + r * row_gap
        xy.append((x, y))
    width = 2 * margin + (cols - 1) * isd + (isd / 2.0 if rows > 1 else 0.0)
    height = 2 * margin + (rows - 1) * row_gap
    return np.asarray(xy, dtype=float), (width, height)


def init_scenario(config: ScenarioConfig) -> NetworkState:
    seeds = np.random.SeedSequence(config.rng_seed).spawn(4)
    rng_place, rng_mob, rng_traffic, rng_shadow = (np.random.default_rng(s) for s in seeds)
    m, k = config.num_bs, config.num_ue

    bs_xy, area = _bs_layout(m, config.inter_site_distance_m)
    ue_xy = rng_place.uniform((0.0, 0.0), area, size=(k, 2))
    speed = np.abs(rng_place.normal(config.speed_mean, math.sqrt(config.speed_var), size=k))
    heading = rng_place.uniform(0.0, 2 * math.pi, size=k)
    rates = rng_place.choice(np.asarray(config.arrival_rates, dtype=float), size=k)
    next_arrival = rng_traffic.exponential(1000.0 / rates)
    lo, hi = config.shadow_range_db
    shadow = rng_shadow.uniform(lo, hi, size=(m, k))

    state = NetworkState(
        config=config,
        bs_xy=bs_xy,
        area=area,
        tx_power_dbm=np.full(m, float(config.initial_tx_power_dbm)),
        antenna_deg=np.full(m, float(config.initial_antenna_angle_deg)),
        asleep=np.zeros(m, dtype=bool),
        ue_xy=ue_xy,
        speed=speed,
        heading=heading,
        arrival_rate=rates,
        next_arrival_ms=next_arrival,
        shadow_db=shadow,
        rng_mobility=rng_mob,
        rng_traffic=rng_traffic,
        rng_shadow=rng_shadow,
        serving=np.full(k, -1, dtype=int),
        queues=[deque() for _ in range(k)],
        backlog_bits=np.zeros(k),
        rr_offset=np.zeros(m, dtype=int),
        last_alloc=np.zeros(k, dtype=int),
        last_load=np.zeros(m),
        reattach_tick=np.zeros(k, dtype=np.int64),
        arrivals=np.zeros(k, dtype=np.int64),
        next_mobility_ms=config.mobility_interval_ms,
        next_heading_ms=config.heading_interval_ms,
        next_shadow_ms=config.shadow_coherence_ms,
    )
    refresh_links(state)
    return state


def _received_dbm(state: NetworkState) -> np.ndarray:
    cfg = state.config
    d = link_distance(state.bs_xy, state.ue_xy, cfg.bs_altitude_m)
    gain = channel_gain(path_loss(d, cfg.carrier_ghz), state.antenna_deg[:, None], state.shadow_db)
    return state.tx_power_dbm[:, None] + gain


def attach_ues(state: NetworkState) -> np.ndarray:
    """Attach every UE to the awake BS with the strongest received power above the floor."""
    rx = np.where(state.asleep[:, None], -np.inf, state.rx_dbm)
    best = np.argmax(rx, axis=0)
    best_rx = rx[best, np.arange(state.num_ue)]
    state.serving = np.where(best_rx >= state.config.min_rx_power_dbm, best, -1)
    return state.serving


def _sinr_matrix(state: NetworkState) -> np.ndarray:
    """SINR each UE would see from each BS, treating every other awake BS as interference."""
    cfg = state.config
    rx_mw = np.where(state.asleep[:, None], 0.0, dbm_to_mw(state.rx_dbm))
    total = rx_mw.sum(axis=0)
    noise = noise_power_mw(cfg.noise_density_dbm_hz, cfg.bandwidth_mhz * 1e6)
    own = dbm_to_mw(state.rx_dbm)
    return own / (total[None, :] - rx_mw + noise)


def refresh_links(state: NetworkState) -> None:
    state.rx_dbm = _received_dbm(state)
    attach_ues(state)
    state.serving[state.reattach_tick > state.tick] = -1
    sinr_all = _sinr_matrix(state)
    attached = state.serving >= 0
    sinr = np.zeros(state.num_ue)
    sinr[attached] = sinr_all[state.serving[attached], np.nonzero(attached)[0]]
    state.sinr = sinr
    with np.errstate(divide="ignore"):
        cqi = state.config.cqi_table.cqi(10.0 * np.log10(sinr))
    state.cqi = np.where(attached, cqi, 0)
    state.dirty = False


def sinr_and_throughput(state: NetworkState, bs: int, ue: int, rbs: int) -> tuple[float, float]:
    """Linear SINR of the ``bs`` -> ``ue`` link and its rate on ``rbs`` resource blocks."""
    sinr = float(_sinr_matrix(state)[bs, ue])
    rb_hz = state.config.rb_bandwidth_khz * 1e3
    return sinr, rbs * rb_hz * math.log2(1.0 + sinr)


def round_robin(needs: list[int], capacity: int, offset: int) -> list[int]:
    """Hand out RBs one at a time in rotating order until demand or capacity runs out.

    Equivalent to RB-by-RB round robin starting at position ``offset``: full
    rounds give every UE still in need one RB, and the final partial round
    goes to the first UEs in rotated order.
    """
    n = len(needs)
    if sum(needs) <= capacity:
        return list(needs)
    alloc = [0] * n
    remaining = capacity
    active = [i for i in range(n) if needs[i] > 0]
    while remaining > 0 and active:
        share = remaining // len(active)
        if share == 0:
            order = [(offset + i) % n for i in range(n)]
            live = set(active)
            for i in order:
                if remaining == 0:
                    break
                if i in live:
                    alloc[i] += 1
                    remaining -= 1
            break
        still = []
        for i in active:
            give = min(share, needs[i] - alloc[i])
            alloc[i] += give
            remaining -= give
            if alloc[i] < needs[i]:
                still.append(i)
        active = still
    return alloc


class _Accumulator:
    def __init__(self, m: int, k: int):
        self.used_rbs = np.zeros(m, dtype=np.int64)
        self.active = np.zeros((m, k), dtype=np.int64)
        self.rate_sum = np.zeros((m, k))
        self.lat_sum = np.zeros((m, k))
        self.lat_cnt = np.zeros((m, k), dtype=np.int64)
        self.ttis = 0


def _enqueue_arrivals(state: NetworkState, t: int) -> None:
    cfg = state.config
    horizon = t + cfg.tti_ms
    due = np.nonzero(state.next_arrival_ms < horizon)[0]
    for j in due:
        mean_gap = 1000.0 / state.arrival_rate[j]
        q = state.queues[j]
        while state.next_arrival_ms[j] < horizon:
            q.append(Packet(cfg.packet_bits, t))
            state.arrivals[j] += 1
            state.backlog_bits[j] += cfg.packet_bits
            state.next_arrival_ms[j] += state.rng_traffic.exponential(mean_gap)
        state.backlogged.add(int(j))


def schedule_tti(state: NetworkState, acc: _Accumulator | None = None) -> tuple[dict[int, dict[int, int]], list[Packet]]:
    """Allocate one TTI of RBs at every BS and serve queued bits FIFO.

    Returns ``{bs: {ue: rbs}}`` and the packets completed in this TTI.
    """
    cfg = state.config
    table = cfg.cqi_table
    t = state.time_ms
    rb_hz = cfg.rb_bandwidth_khz * 1e3
    total_rbs = cfg.total_rbs
    by_bs: dict[int, list[int]] = {}
    for j in sorted(state.backlogged):
        b = int(state.serving[j])
        if b < 0:
            continue
        if acc is not None:
            acc.active[b, j] += 1
        if state.cqi[j] == 0:
            continue
        by_bs.setdefault(b, []).append(j)

    allocations: dict[int, dict[int, int]] = {}
    served: list[Packet] = []
    for b in sorted(by_bs):
        ues = by_bs[b]
        bits = [table.coding_rates[state.cqi[j] - 1] * table.rb_bits[state.cqi[j] - 1] for j in ues]
        needs = [math.ceil(state.backlog_bits[j] / bpr - 1e-9) for j, bpr in zip(ues, bits)]
        alloc = round_robin(needs, total_rbs, int(state.rr_offset[b]))
        state.rr_offset[b] += 1
        allocations[b] = dict(zip(ues, alloc))
        if acc is not None:
            acc.used_rbs[b] += sum(alloc)
        for j, r, bpr in zip(ues, alloc, bits):
            state.last_alloc[j] = r
            if r == 0:
                continue
            n = state.cqi[j] - 1
            if acc is not None:
                acc.rate_sum[b, j] += r * rb_hz * math.log2(1.0 + state.sinr[j])
            cap = r * bpr
            q = state.queues[j]
            while cap > 1e-9 and q:
                p = q[0]
                if p.depart_ms is None:
                    p.depart_ms = t
                    if acc is not None:
                        acc.lat_sum[b, j] += first_packet_latency(
                            p.arrival_ms, t, cfg.first_packet_bits, table.coding_rates[n], r, table.rb_bits[n], cfg.tti_ms
                        )
                        acc.lat_cnt[b, j] += 1
                take = min(cap, p.remaining)
                p.remaining -= take
                cap -= take
                state.backlog_bits[j] -= take
                if p.remaining <= 1e-9:
                    p.remaining = 0.0
                    p.done_ms = t
                    q.popleft()
                    served.append(p)
            if not q:
                state.backlog_bits[j] = 0.0
                state.backlogged.discard(j)
    return allocations, served


def _has_schedulable(state: NetworkState) -> bool:
    for j in state.backlogged:
        if state.serving[j] >= 0 and state.cqi[j] > 0:
            return True
    return False


def _move_ues(state: NetworkState, elapsed_ms: int) -> None:
    if elapsed_ms <= 0:
        return
    w, h = state.area
    dist = state.speed * (elapsed_ms / 1000.0)
    x = state.ue_xy[:, 0] + dist * np.cos(state.heading)
    y = state.ue_xy[:, 1] + dist * np.sin(state.heading)
    # reflect off the scenario rectangle; headings mirror accordingly
    hit_x = (x < 0) | (x > w)
    hit_y = (y < 0) | (y > h)
    x = np.where(x < 0, -x, np.where(x > w, 2 * w - x, x))
    y = np.where(y < 0, -y, np.where(y > h, 2 * h - y, y))
    state.ue_xy = np.column_stack((np.clip(x, 0, w), np.clip(y, 0, h)))
    state.heading = np.where(hit_x, math.pi - state.heading, state.heading)
    state.heading = np.where(hit_y, -state.heading, state.heading)
    state.dirty = True


def _advance_clocks(state: NetworkState) -> None:
    cfg = state.config
    t = state.time_ms
    if t >= state.next_mobility_ms:
        _move_ues(state, t - state.last_move_ms)
        state.last_move_ms = t
        while state.next_mobility_ms <= t:
            state.next_mobility_ms += cfg.mobility_interval_ms
    if t >= state.next_heading_ms:
        state.heading = state.rng_mobility.uniform(0.0, 2 * math.pi, size=state.num_ue)
        while state.next_heading_ms <= t:
            state.next_heading_ms += cfg.heading_interval_ms
    if t >= state.next_shadow_ms:
        lo, hi = cfg.shadow_range_db
        state.shadow_db = state.rng_shadow.uniform(lo, hi, size=state.shadow_db.shape)
        state.dirty = True
        while state.next_shadow_ms <= t:
            state.next_shadow_ms += cfg.shadow_coherence_ms
    if state.dirty:
        refresh_links(state)


def _unschedulable_active(state: NetworkState, acc: _Accumulator, ttis: int) -> None:
    for j in state.backlogged:
        b = state.serving[j]
        if b >= 0:
            acc.active[b, j] += ttis


def step(state: NetworkState, dt_ms: int) -> tuple[NetworkState, TickMetrics]:
    """Advance ``dt_ms`` of simulated time and return the step's metrics."""
    cfg = state.config
    if dt_ms < 0 or dt_ms % cfg.tti_ms:
        raise ConfigError(f"dt_ms={dt_ms} must be a non-negative multiple of tti_ms={cfg.tti_ms}")
    if dt_ms == 0:
        return state, TickMetrics.empty(state)

    m, k = state.num_bs, state.num_ue
    if np.any(state.reattach_tick == state.tick):
        state.dirty = True
    acc = _Accumulator(m, k)
    start = state.time_ms
    end = start + dt_ms
    tti = cfg.tti_ms
    while state.time_ms < end:
        _advance_clocks(state)
        chunk_end = min(end, state.next_mobility_ms, state.next_heading_ms, state.next_shadow_ms)
        while state.time_ms < chunk_end:
            t = state.time_ms
            _enqueue_arrivals(state, t)
            if not _has_schedulable(state):
                nxt = int(math.floor(float(state.next_arrival_ms.min()) / tti)) * tti
                jump = min(chunk_end, max(t + tti, nxt))
                _unschedulable_active(state, acc, (jump - t) // tti)
                state.last_alloc[:] = 0
                state.time_ms = jump
                continue
            state.last_alloc[:] = 0
            schedule_tti(state, acc)
            state.time_ms = t + tti

    n_ttis = dt_ms // tti
    load = acc.used_rbs / (cfg.total_rbs * n_ttis)
    state.last_load = load
    p_max = max_power_w(state.tx_power_dbm, cfg.power_slope, cfg.power_offset_w)
    energy = compute_energy(load, p_max, cfg.energy_mix, state.asleep, cfg.standby_power_w)

    with np.errstate(invalid="ignore", divide="ignore"):
        link_thpt = np.where(acc.active > 0, acc.rate_sum / acc.active, np.nan)
        link_lat = np.where(acc.lat_cnt > 0, acc.lat_sum / acc.lat_cnt, np.nan)
    avg_thpt = _row_nanmean(link_thpt)
    avg_lat = _row_nanmean(link_lat)
    # a sleeping BS delivers nothing: zero throughput, unbounded latency
    avg_thpt[state.asleep] = 0.0
    avg_lat[state.asleep] = np.inf
    attached = np.bincount(state.serving[state.serving >= 0], minlength=m)

    metrics = TickMetrics(
        tick=state.tick,
        time_ms=start,
        duration_ms=dt_ms,
        load=load,
        energy_w=np.asarray(energy, dtype=float).reshape(m),
        avg_thpt_bps=avg_thpt,
        avg_latency_ms=avg_lat,
        attached_ues=attached,
        asleep=state.asleep.copy(),
        link_thpt_bps=link_thpt,
        link_latency_ms=link_lat,
    )
    state.tick += 1
    return state, metrics


def _row_nanmean(mat: np.ndarray) -> np.ndarray:
    counts = np.sum(~np.isnan(mat), axis=1)
    sums = np.nansum(mat, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def apply_operation(state: NetworkState, bs: int, op: EnergySavingOp) -> NetworkState:
    cfg = state.config
    if not isinstance(op, EnergySavingOp):
        raise InvalidOp(f"not an energy-saving operation: {op!r}")
    if not 0 <= bs < state.num_bs:
        raise InvalidOp(f"no BS with id {bs}")
    if op.kind is OpKind.POWER_DELTA:
        lo, hi = cfg.tx_power_levels_dbm[0], cfg.tx_power_levels_dbm[-1]
        state.tx_power_dbm[bs] = min(hi, max(lo, state.tx_power_dbm[bs] + op.parameter))
    elif op.kind is OpKind.ANTENNA_ANGLE_SET:
        if op.parameter not in cfg.antenna_angles_deg:
            raise InvalidOp(f"antenna angle {op.parameter} not configured")
        state.antenna_deg[bs] = op.parameter
    elif op.kind is OpKind.SLEEP:
        state.asleep[bs] = True
        dropped = state.serving == bs
        state.serving[dropped] = -1
        state.reattach_tick[dropped] = state.tick + 1
    else:  # pragma: no cover - OpKind is closed
        raise InvalidOp(f"unknown operation kind {op.kind}")
    state.dirty = True
    return state


def wake_all(state: NetworkState) -> None:
    if state.asleep.any():
        state.asleep[:] = False
        state.dirty = True


def bs_view(state: NetworkState, bs: int) -> BsState:
    cfg = state.config
    buffer = tuple(p for j in np.nonzero(state.serving == bs)[0] for p in state.queues[j])
    p_max = max_power_w(state.tx_power_dbm[bs], cfg.power_slope, cfg.power_offset_w)
    load = float(state.last_load[bs])
    return BsState(
        position=(float(state.bs_xy[bs, 0]), float(state.bs_xy[bs, 1])),
        tx_power_dbm=float(state.tx_power_dbm[bs]),
        antenna_angle_deg=float(state.antenna_deg[bs]),
        asleep=bool(state.asleep[bs]),
        total_rbs=cfg.total_rbs,
        buffer=buffer,
        load=load,
        energy_w=compute_energy(load, float(p_max), cfg.energy_mix, bool(state.asleep[bs]), cfg.standby_power_w),
    )


def ue_view(state: NetworkState, ue: int) -> UeState:
    b = int(state.serving[ue])
    return UeState(
        position=(float(state.ue_xy[ue, 0]), float(state.ue_xy[ue, 1])),
        speed=float(state.speed[ue]),
        heading=float(state.heading[ue]),
        serving_bs=None if b < 0 else b,
        cqi=int(state.cqi[ue]),
        arrival_rate=float(state.arrival_rate[ue]),
        allocated_rbs=int(state.last_alloc[ue]),
    )


def snapshot(state: NetworkState) -> str:
    """JSON dump of the mutable state, for debugging and replay comparisons."""
    data = {
        "time_ms": state.time_ms,
        "tick": state.tick,
        "bs_xy": state.bs_xy.tolist(),
        "tx_power_dbm": state.tx_power_dbm.tolist(),
        "antenna_deg": state.antenna_deg.tolist(),
        "asleep": state.asleep.tolist(),
        "ue_xy": state.ue_xy.tolist(),
        "speed": state.speed.tolist(),
        "heading": state.heading.tolist(),
        "arrival_rate": state.arrival_rate.tolist(),
        "next_arrival_ms": state.next_arrival_ms.tolist(),
        "shadow_db": state.shadow_db.tolist(),
        "serving": state.serving.tolist(),
        "backlog_bits": state.backlog_bits.tolist(),
        "queues": [[(p.size_bits, p.arrival_ms, p.depart_ms, p.remaining) for p in q] for q in state.queues],
    }
    buf = io.StringIO()
    json.dump(data, buf, sort_keys=True)
    return buf.getvalue()
