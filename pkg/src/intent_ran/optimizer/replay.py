from __future__ import annotations

import numpy as np

from ..errors import InsufficientData

__all__ = ["ReplayMemory"]


class ReplayMemory:
    """Fixed-capacity ring buffer of (obs, action, reward, next_obs); oldest entries are overwritten first."""

    def __init__(self, capacity: int, obs_dim: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.obs = np.zeros((capacity, obs_dim))
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity)
        self.next_obs = np.zeros((capacity, obs_dim))
        self.count = 0  # total insertions

    def __len__(self) -> int:
        return min(self.count, self.capacity)

    def push(self, obs, action: int, reward: float, next_obs) -> None:
        i = self.count % self.capacity
        self.obs[i] = obs
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_obs[i] = next_obs
        self.count += 1

    def push_batch(self, obs, actions, rewards, next_obs) -> None:
        for row in zip(obs, actions, rewards, next_obs):
            self.push(*row)

    def sample(self, rng: np.random.Generator, batch_size: int):
        """Uniform minibatch, with replacement."""
        n = len(self)
        if n < batch_size or batch_size < 1:
            raise InsufficientData(f"need {batch_size} transitions, memory holds {n}")
        idx = rng.integers(0, n, size=batch_size)
        return self.obs[idx], self.actions[idx], self.rewards[idx], self.next_obs[idx]

    def ordered(self):
        """Stored transitions from oldest to newest."""
        n = len(self)
        start = self.count % self.capacity if self.count > self.capacity else 0
        idx = (start + np.arange(n)) % self.capacity
        return self.obs[idx], self.actions[idx], self.rewards[idx], self.next_obs[idx]
