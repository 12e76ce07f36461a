"""Episode loops shared by the DQN, tabular and static schemes."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from ..errors import ConfigError
from ..ontology import EnergySavingOp
from ..ransim.config import ScenarioConfig
from ..ransim.sim import TickMetrics, apply_operation, init_scenario, step, wake_all
from ..sig import DecompositionResult
from .agent import Hyperparams, StaticPolicy, make_agents
from .reward import OBS_DIM, RewardWeights, build_observations, reward_from_metrics

__all__ = [
    "TRACE_HEADER",
    "TrainingTrace",
    "action_set",
    "episode_seed",
    "q_learning_baseline",
    "run_training",
    "static_baseline",
    "write_trace_csv",
]

TRACE_HEADER = ("step", "episode", "reward", "loss", "epsilon", "action")

_AGENT_STREAM = 0x5EED


@dataclass
class TrainingTrace:
    """Per-step records of one run. Metric arrays have shape (steps, M)."""

    scheme: str
    actions: tuple[str, ...]
    step: list[int] = field(default_factory=list)
    episode: list[int] = field(default_factory=list)
    reward: list[float] = field(default_factory=list)
    loss: list[float] = field(default_factory=list)
    epsilon: list[float] = field(default_factory=list)
    action: list[str] = field(default_factory=list)
    metrics: list[TickMetrics] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.step)

    def _stack(self, attr: str) -> np.ndarray:
        if not self.metrics:
            return np.zeros((0, 0))
        return np.vstack([getattr(m, attr) for m in self.metrics])

    @property
    def energy_w(self) -> np.ndarray:
        return self._stack("energy_w")

    @property
    def thpt_bps(self) -> np.ndarray:
        return self._stack("avg_thpt_bps")

    @property
    def latency_ms(self) -> np.ndarray:
        return self._stack("avg_latency_ms")

    @property
    def load(self) -> np.ndarray:
        return self._stack("load")


def write_trace_csv(trace: TrainingTrace, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for row in zip(trace.step, trace.episode, trace.reward, trace.loss, trace.epsilon, trace.action):
        s, ep, r, loss, eps, act = row
        writer.writerow([s, ep, repr(r), "" if math.isnan(loss) else repr(loss), repr(eps), act])


def episode_seed(seed: int, episode: int) -> int:
    """Scenario seed of one episode; identical for every scheme run with the same seed."""
    return int(np.random.SeedSequence([seed, episode]).generate_state(1)[0])


def action_set(ops: Sequence[EnergySavingOp], include_noop: bool) -> tuple[EnergySavingOp | None, ...]:
    """Operations the agent chooses from; ``None`` (no change) is appended when enabled."""
    out = tuple(ops) + ((None,) if include_noop else ())
    if not out:
        raise ConfigError("action set is empty")
    return out


def _label(op: EnergySavingOp | None) -> str:
    return "NoOp" if op is None else op.label


def _run(
    scheme: str,
    config: ScenarioConfig,
    actions: tuple[EnergySavingOp | None, ...],
    policy_for,
    hp: Hyperparams,
    weights: RewardWeights,
    seed: int,
    episodes: int,
    epsilon: float,
) -> TrainingTrace:
    trace = TrainingTrace(scheme=scheme, actions=tuple(_label(a) for a in actions))
    m = config.num_bs
    global_step = 0
    for ep in range(episodes):
        state = init_scenario(config.with_overrides(rng_seed=episode_seed(seed, ep)))
        state, metrics = step(state, hp.step_ms)  # settle one step to get a first observation
        obs = build_observations(state, metrics, weights)
        for _ in range(hp.steps_per_episode):
            wake_all(state)  # a sleep lasts one decision step
            chosen = np.empty(m, dtype=np.int64)
            for idx, agent in policy_for:
                chosen[idx] = agent.act(obs[idx])
            for b in range(m):
                op = actions[chosen[b]]
                if op is not None:
                    apply_operation(state, b, op)
            state, metrics = step(state, hp.step_ms)
            rewards = reward_from_metrics(metrics, weights)
            next_obs = build_observations(state, metrics, weights)
            losses = [agent.learn(obs[idx], chosen[idx], rewards[idx], next_obs[idx]) for idx, agent in policy_for]
            finite = [x for x in losses if not math.isnan(x)]
            global_step += 1
            trace.step.append(global_step)
            trace.episode.append(ep)
            trace.reward.append(float(rewards.sum()))
            trace.loss.append(float(np.mean(finite)) if finite else float("nan"))
            trace.epsilon.append(epsilon)
            trace.action.append(";".join(str(int(a)) for a in chosen))
            trace.metrics.append(metrics)
            obs = next_obs
    return trace


def _assign(agents: Sequence, m: int) -> list[tuple[np.ndarray, object]]:
    if len(agents) == 1:
        return [(np.arange(m), agents[0])]
    return [(np.array([i]), agent) for i, agent in enumerate(agents)]


def run_training(
    config: ScenarioConfig,
    result: DecompositionResult,
    hp: Hyperparams,
    weights: RewardWeights,
    seed: int = 0,
    episodes: int | None = None,
    scheme: str = "dqn",
) -> TrainingTrace:
    """Train a DQN over the decomposition's pruned operations.

    ``reward`` in the trace is the sum of the per-BS rewards at each step.
    """
    ops = result.energy_saving_ops()
    if not ops:
        raise ConfigError("decomposition left no operations to learn over")
    actions = action_set(ops, hp.include_noop)
    rng = np.random.default_rng([seed, _AGENT_STREAM])
    agents = make_agents("dqn", config.num_bs, OBS_DIM, len(actions), hp, rng)
    n_ep = hp.episodes if episodes is None else episodes
    return _run(scheme, config, actions, _assign(agents, config.num_bs), hp, weights, seed, n_ep, hp.epsilon)


def q_learning_baseline(
    config: ScenarioConfig,
    ops: Sequence[EnergySavingOp],
    hp: Hyperparams,
    weights: RewardWeights,
    seed: int = 0,
    episodes: int | None = None,
) -> TrainingTrace:
    if not ops:
        raise ConfigError("q-learning needs at least one operation")
    actions = action_set(ops, hp.include_noop)
    rng = np.random.default_rng([seed, _AGENT_STREAM])
    agents = make_agents("q_learning", config.num_bs, OBS_DIM, len(actions), hp, rng)
    n_ep = hp.episodes if episodes is None else episodes
    return _run("q_learning", config, actions, _assign(agents, config.num_bs), hp, weights, seed, n_ep, hp.epsilon)


def static_baseline(
    config: ScenarioConfig,
    hp: Hyperparams,
    weights: RewardWeights,
    seed: int = 0,
    episodes: int | None = None,
) -> TrainingTrace:
    """Same episodes and metrics as the learners, with every BS left at its initial configuration."""
    n_ep = hp.episodes if episodes is None else episodes
    policy = [(np.arange(config.num_bs), StaticPolicy())]
    return _run("static", config, (None,), policy, hp, weights, seed, n_ep, 0.0)
