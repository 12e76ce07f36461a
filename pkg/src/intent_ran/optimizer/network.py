"""Small fully connected Q-network with hand-written backpropagation."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import DimensionError

__all__ = ["QNetwork", "load_checkpoint", "save_checkpoint"]


class QNetwork:
    """ReLU MLP mapping an observation to one value per action.

    Parameters are a list of ``(W, b)`` pairs; ``flat()`` / ``set_flat()``
    expose them as a single vector.
    """

    def __init__(self, sizes: Sequence[int], rng: np.random.Generator | None = None):
        if len(sizes) < 2 or any(int(s) < 1 for s in sizes):
            raise DimensionError(f"layer sizes must be >= 1, got {sizes}")
        self.sizes = tuple(int(s) for s in sizes)
        rng = rng if rng is not None else np.random.default_rng(0)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            self.weights.append(rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))

    @property
    def n_outputs(self) -> int:
        return self.sizes[-1]

    def forward(self, x: np.ndarray, keep: bool = False):
        """Q-values for a batch ``x`` of shape (B, in). With ``keep`` also returns activations."""
        h = np.atleast_2d(np.asarray(x, dtype=float))
        acts = [h]
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i < last:
                h = np.maximum(h, 0.0)
            acts.append(h)
        return (h, acts) if keep else h

    def backward(self, acts: list[np.ndarray], grad_out: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """Gradients of a scalar loss given dLoss/dOutput for the cached forward pass."""
        gw = [np.empty(0)] * len(self.weights)
        gb = [np.empty(0)] * len(self.biases)
        g = grad_out
        for i in range(len(self.weights) - 1, -1, -1):
            gw[i] = acts[i].T @ g
            gb[i] = g.sum(axis=0)
            if i > 0:
                g = (g @ self.weights[i].T) * (acts[i] > 0)
        return gw, gb

    def flat(self) -> np.ndarray:
        return np.concatenate([p.ravel() for pair in zip(self.weights, self.biases) for p in pair])

    def set_flat(self, vec: np.ndarray) -> None:
        vec = np.asarray(vec, dtype=float)
        if vec.size != self.num_params:
            raise DimensionError(f"expected {self.num_params} parameters, got {vec.size}")
        pos = 0
        for i in range(len(self.weights)):
            for store, shape in ((self.weights, self.weights[i].shape), (self.biases, self.biases[i].shape)):
                n = int(np.prod(shape))
                store[i] = vec[pos : pos + n].reshape(shape).copy()
                pos += n

    @property
    def num_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> QNetwork:
        clone = QNetwork.__new__(QNetwork)
        clone.sizes = self.sizes
        clone.weights = [w.copy() for w in self.weights]
        clone.biases = [b.copy() for b in self.biases]
        return clone

    def sgd(self, gw: list[np.ndarray], gb: list[np.ndarray], lr: float) -> None:
        for i in range(len(self.weights)):
            self.weights[i] -= lr * gw[i]
            self.biases[i] -= lr * gb[i]


def save_checkpoint(net: QNetwork, path: str | Path) -> None:
    """Write ``sizes`` (the shape header) and the flat parameter vector to an ``.npz`` file."""
    with open(path, "wb") as fh:
        np.savez(fh, sizes=np.asarray(net.sizes, dtype=np.int64), params=net.flat())


def load_checkpoint(path: str | Path) -> QNetwork:
    with np.load(path) as data:
        net = QNetwork(data["sizes"].tolist())
        net.set_flat(data["params"])
    return net
