"""DQN, tabular Q-learning and static policies over a shared action set."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from ..errors import ConfigError, InsufficientData
from .network import QNetwork
from .replay import ReplayMemory

__all__ = [
    "DqnAgent",
    "Hyperparams",
    "QTableAgent",
    "StaticPolicy",
    "bellman_loss",
    "discretize",
    "make_agents",
    "select_action",
    "sync_target",
    "train_step",
]


@dataclass(frozen=True)
class Hyperparams:
    gamma: float = 0.7
    exploit_prob: float = 0.7
    sync_period: int = 100
    learning_rate: float = 0.01
    batch_size: int = 32
    steps_per_episode: int = 100
    step_ms: int = 100
    episodes: int = 200
    replay_capacity: int = 3000
    hidden: tuple[int, ...] = (64, 64)
    shared_agent: bool = True
    include_noop: bool = True
    table_lr: float = 0.1
    table_bins: int = 4

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError("gamma must lie in [0, 1)")
        if not 0.0 <= self.exploit_prob <= 1.0:
            raise ConfigError("exploit_prob must lie in [0, 1]")
        if self.sync_period < 1:
            raise ConfigError("sync_period must be >= 1")
        if self.learning_rate <= 0 or self.table_lr <= 0:
            raise ConfigError("learning rates must be positive")
        for name in ("batch_size", "steps_per_episode", "step_ms", "replay_capacity", "table_bins"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.episodes < 0:
            raise ConfigError("episodes must be >= 0")

    @property
    def epsilon(self) -> float:
        return round(1.0 - self.exploit_prob, 12)

    def with_overrides(self, **kwargs: Any) -> Hyperparams:
        return replace(self, **kwargs)

    @classmethod
    def paper_scale(cls, **kwargs: Any) -> Hyperparams:
        return cls(**{"steps_per_episode": 1000, **kwargs})


def _greedy(q_values: np.ndarray) -> int:
    return int(np.argmax(q_values))  # first maximum wins ties


def select_action(q: QNetwork, obs: np.ndarray, exploit_prob: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy: argmax with probability ``exploit_prob``, otherwise a uniform action."""
    if rng.random() < exploit_prob:
        return _greedy(q.forward(obs)[0])
    return int(rng.integers(q.n_outputs))


def sync_target(q: QNetwork, target: QNetwork) -> None:
    if q.sizes != target.sizes:
        raise ConfigError(f"network shapes differ: {q.sizes} vs {target.sizes}")
    target.weights = [w.copy() for w in q.weights]
    target.biases = [b.copy() for b in q.biases]


def bellman_loss(q: QNetwork, target: QNetwork, batch, gamma: float):
    """Mean squared Bellman error and its gradient with respect to ``q``'s outputs."""
    obs, actions, rewards, next_obs = batch
    y = rewards + gamma * target.forward(next_obs).max(axis=1)
    out, acts = q.forward(obs, keep=True)
    rows = np.arange(len(actions))
    err = out[rows, actions] - y
    grad = np.zeros_like(out)
    grad[rows, actions] = 2.0 * err / len(actions)
    return float(np.mean(err**2)), acts, grad


def train_step(
    q: QNetwork,
    target: QNetwork,
    memory: ReplayMemory,
    hp: Hyperparams,
    rng: np.random.Generator,
) -> float:
    """One SGD step on a uniform minibatch; returns the loss before the update."""
    if len(memory) < hp.batch_size:
        raise InsufficientData(f"need {hp.batch_size} transitions, memory holds {len(memory)}")
    batch = memory.sample(rng, hp.batch_size)
    loss, acts, grad = bellman_loss(q, target, batch, hp.gamma)
    gw, gb = q.backward(acts, grad)
    q.sgd(gw, gb, hp.learning_rate)
    return loss


class DqnAgent:
    """Online and target network plus replay memory for one or more BSs."""

    def __init__(self, obs_dim: int, n_actions: int, hp: Hyperparams, rng: np.random.Generator):
        self.hp = hp
        self.rng = rng
        self.q = QNetwork((obs_dim, *hp.hidden, n_actions), rng)
        self.target = self.q.copy()
        self.memory = ReplayMemory(hp.replay_capacity, obs_dim)
        self.train_steps = 0

    def act(self, obs: np.ndarray) -> np.ndarray:
        """Epsilon-greedy action for each row of ``obs``."""
        q_values = self.q.forward(obs)
        out = np.empty(len(obs), dtype=np.int64)
        for i in range(len(obs)):
            if self.rng.random() < self.hp.exploit_prob:
                out[i] = _greedy(q_values[i])
            else:
                out[i] = self.rng.integers(self.q.n_outputs)
        return out

    def learn(self, obs, actions, rewards, next_obs) -> float:
        self.memory.push_batch(obs, actions, rewards, next_obs)
        if len(self.memory) < self.hp.batch_size:
            return float("nan")
        loss = train_step(self.q, self.target, self.memory, self.hp, self.rng)
        self.train_steps += 1
        if self.train_steps % self.hp.sync_period == 0:
            sync_target(self.q, self.target)
        return loss


def discretize(values: np.ndarray, bins: int) -> np.ndarray:
    """Map each row of values in [0, 1] to a single table index (row-major over ``bins`` levels)."""
    levels = np.minimum((np.clip(values, 0.0, 1.0) * bins).astype(np.int64), bins - 1)
    weights = bins ** np.arange(levels.shape[-1] - 1, -1, -1)
    return levels @ weights


class QTableAgent:
    """Tabular Q-learning over the first ``n_metrics`` observation entries, each binned."""

    def __init__(self, n_actions: int, hp: Hyperparams, rng: np.random.Generator, n_metrics: int = 4):
        self.hp = hp
        self.rng = rng
        self.n_metrics = n_metrics
        self.table = np.zeros((hp.table_bins**n_metrics, n_actions))

    def state_index(self, obs: np.ndarray) -> np.ndarray:
        return discretize(np.atleast_2d(obs)[:, : self.n_metrics], self.hp.table_bins)

    def act(self, obs: np.ndarray) -> np.ndarray:
        states = self.state_index(obs)
        out = np.empty(len(states), dtype=np.int64)
        for i, s in enumerate(states):
            if self.rng.random() < self.hp.exploit_prob:
                out[i] = _greedy(self.table[s])
            else:
                out[i] = self.rng.integers(self.table.shape[1])
        return out

    def update(self, s: int, a: int, r: float, s_next: int) -> float:
        td = r + self.hp.gamma * self.table[s_next].max() - self.table[s, a]
        self.table[s, a] += self.hp.table_lr * td
        return td

    def learn(self, obs, actions, rewards, next_obs) -> float:
        """Apply one update per BS; returns the mean squared TD error."""
        states, nexts = self.state_index(obs), self.state_index(next_obs)
        tds = [self.update(int(s), int(a), float(r), int(n)) for s, a, r, n in zip(states, actions, rewards, nexts)]
        return float(np.mean(np.square(tds)))


class StaticPolicy:
    """Always picks action 0, which the caller maps to "leave the BS unchanged"."""

    def act(self, obs: np.ndarray) -> np.ndarray:
        return np.zeros(len(obs), dtype=np.int64)

    def learn(self, obs, actions, rewards, next_obs) -> float:
        return float("nan")


def make_agents(kind: str, n_bs: int, obs_dim: int, n_actions: int, hp: Hyperparams, rng) -> Sequence:
    """One shared agent, or one per BS when ``hp.shared_agent`` is off."""
    count = 1 if hp.shared_agent else n_bs
    if kind == "dqn":
        return [DqnAgent(obs_dim, n_actions, hp, rng) for _ in range(count)]
    if kind == "q_learning":
        return [QTableAgent(n_actions, hp, rng) for _ in range(count)]
    raise ConfigError(f"unknown agent kind {kind!r}")
