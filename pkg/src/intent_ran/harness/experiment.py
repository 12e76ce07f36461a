"""Decomposition pipeline, scheme runs and the decomposition benchmark."""

from __future__ import annotations

import csv
import gc
import json
import statistics
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConfigError
from ..intent_codec import IntentDocument, extract_bounds, load_intent, parse_intent_yaml
from ..ontology import DEFAULT_CONFLICT_RULES, ConflictRule, build_knowledge_base
from ..optimizer.reward import RewardWeights
from ..optimizer.training import (
    TrainingTrace,
    q_learning_baseline,
    run_training,
    static_baseline,
    write_trace_csv,
)
from ..ransim.sim import write_metrics_csv
from ..sig import DecompositionResult, SigModel, decompose, load_sig_json
from .config import ExperimentConfig

__all__ = [
    "BENCH_HEADER",
    "SCHEMES",
    "RunSummary",
    "bench_decomposition",
    "decompose_files",
    "reward_weights",
    "run_experiment",
    "smooth",
    "write_bench_csv",
]

SCHEMES = ("dqn", "dqn_no_conflict", "q_learning", "static")
BENCH_HEADER = ("num_bs", "with_conflict", "median_s", "repetitions")


def decompose_files(
    config: ExperimentConfig, with_conflict: bool = True
) -> tuple[IntentDocument, DecompositionResult, float]:
    """Run the full pipeline from the configured files; returns the wall time in seconds too."""
    config.check_paths()
    t0 = time.perf_counter()
    doc = load_intent(config.intent_path)
    model = load_sig_json(Path(config.sig_model_path).read_text(encoding="utf-8"))
    ontology = build_knowledge_base(doc, config.conflict_rules, config.scenario.num_bs)
    result = decompose(
        doc, ontology, model, config.threshold, with_conflict=with_conflict, harm_threshold=config.harm_threshold
    )
    return doc, result, time.perf_counter() - t0


def reward_weights(config: ExperimentConfig, doc: IntentDocument) -> RewardWeights:
    base = RewardWeights.for_scenario(config.scenario, extract_bounds(doc), config.deltas)
    if not config.reward_bounds:
        return base
    return RewardWeights(**{**asdict(base), **config.reward_bounds})


@dataclass(frozen=True)
class RunSummary:
    scheme: str
    seed: int
    steps: int
    mean_energy_w: float
    mean_thpt_bps: float
    mean_latency_ms: float
    cumulative_reward: float
    mean_reward: float
    decomposition_time_s: float
    satisfied: bool
    latency_within_bound: bool
    num_actions: int

    def __post_init__(self):
        for name in ("mean_energy_w", "mean_thpt_bps", "mean_latency_ms", "cumulative_reward", "mean_reward"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")

    def to_json(self, include_timing: bool = True) -> str:
        data = asdict(self)
        if not include_timing:
            data.pop("decomposition_time_s")
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _finite_mean(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    a = a[np.isfinite(a)]
    return float(a.mean()) if a.size else 0.0


def summarize(trace: TrainingTrace, seed: int, result: DecompositionResult, t_decomp: float, latency_bound: float):
    latency = _finite_mean(trace.latency_ms)
    rewards = np.asarray(trace.reward, dtype=float)
    return RunSummary(
        scheme=trace.scheme,
        seed=seed,
        steps=len(trace),
        mean_energy_w=_finite_mean(trace.energy_w),
        mean_thpt_bps=_finite_mean(trace.thpt_bps),
        mean_latency_ms=latency,
        cumulative_reward=float(rewards.sum()),
        mean_reward=float(rewards.mean()) if rewards.size else 0.0,
        decomposition_time_s=t_decomp,
        satisfied=result.satisfied,
        latency_within_bound=latency <= latency_bound,
        num_actions=len(trace.actions),
    )


def run_experiment(
    config: ExperimentConfig,
    scheme: str,
    seed: int | None = None,
    episodes: int | None = None,
    write: bool = True,
) -> tuple[RunSummary, TrainingTrace]:
    """Run one scheme for one seed and, with ``write``, emit its CSV traces and summary JSON.

    Files go to ``<output_dir>/<scheme>_seed<seed>_{trace,metrics}.csv`` and
    ``..._summary.json``. The static scheme writes no trace CSV.
    """
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    seed = config.seeds[0] if seed is None else seed
    doc, result, t_decomp = decompose_files(config, with_conflict=scheme != "dqn_no_conflict")
    weights = reward_weights(config, doc)
    cfg, hp = config.scenario, config.hp
    if scheme in ("dqn", "dqn_no_conflict"):
        trace = run_training(cfg, result, hp, weights, seed, episodes, scheme=scheme)
    elif scheme == "q_learning":
        trace = q_learning_baseline(cfg, result.energy_saving_ops(), hp, weights, seed, episodes)
    else:
        trace = static_baseline(cfg, hp, weights, seed, episodes)
    summary = summarize(trace, seed, result, t_decomp, extract_bounds(doc).latency_max_ms)

    if write:
        out = config.resolved_output_dir()
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{scheme}_seed{seed}"
        if scheme != "static":
            with open(out / f"{stem}_trace.csv", "w", encoding="utf-8", newline="") as fh:
                write_trace_csv(trace, fh)
        with open(out / f"{stem}_metrics.csv", "w", encoding="utf-8", newline="") as fh:
            write_metrics_csv(_renumbered(trace), fh)
        (out / f"{stem}_summary.json").write_text(summary.to_json(), encoding="utf-8")
    return summary, trace


def _renumbered(trace: TrainingTrace):
    """Metrics with a run-wide tick so the CSV's time column strictly increases."""
    for i, m in enumerate(trace.metrics, start=1):
        yield type(m)(**{**m.__dict__, "tick": i})


def smooth(values: Sequence[float], window: int = 100) -> np.ndarray:
    """Centered moving average that skips NaN entries (e.g. steps before training starts)."""
    v = np.asarray(values, dtype=float)
    ok = np.isfinite(v)
    kernel = np.ones(window)
    num = np.convolve(np.where(ok, v, 0.0), kernel, mode="same")
    den = np.convolve(ok.astype(float), kernel, mode="same")
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / den, np.nan)


def _decompose_once(
    intent_text: str, model: SigModel, rules: Iterable[ConflictRule], num_bs: int, with_conflict: bool
) -> DecompositionResult:
    doc = parse_intent_yaml(intent_text)
    ontology = build_knowledge_base(doc, rules, num_bs)
    return decompose(doc, ontology, model, with_conflict=with_conflict)


def bench_decomposition(
    m_values: Sequence[int],
    repetitions: int,
    with_conflict: bool,
    intent_text: str,
    model: SigModel,
    rules: Iterable[ConflictRule] = DEFAULT_CONFLICT_RULES,
    warmup: int = 3,
) -> list[tuple[int, bool, float, int]]:
    """Median wall time of decomposing the intent once per BS, for each network size M."""
    if repetitions < 1:
        raise ConfigError("repetitions must be >= 1")
    if any(m < 1 for m in m_values):
        raise ConfigError("every M must be >= 1")
    rules = tuple(rules)
    for _ in range(warmup):
        _decompose_once(intent_text, model, rules, 1, with_conflict)
    rows = []
    gc_was_enabled = gc.isenabled()
    gc.disable()  # as timeit does, keep collector pauses out of the samples
    try:
        for m in m_values:
            times = []
            for _ in range(repetitions):
                t0 = time.perf_counter()
                for _ in range(m):
                    _decompose_once(intent_text, model, rules, m, with_conflict)
                times.append(time.perf_counter() - t0)
            rows.append((m, with_conflict, statistics.median(times), repetitions))
    finally:
        if gc_was_enabled:
            gc.enable()
    return rows


def write_bench_csv(rows: Iterable[tuple], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    for m, wc, med, reps in rows:
        writer.writerow([m, int(wc), repr(med), reps])
