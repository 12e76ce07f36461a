import numpy as np
import pytest

from intent_ran.errors import DimensionError, InsufficientData
from intent_ran.optimizer import (
    Hyperparams,
    QNetwork,
    ReplayMemory,
    bellman_loss,
    load_checkpoint,
    save_checkpoint,
    sync_target,
    train_step,
)


def _loss_of(q, target, batch, gamma):
    return bellman_loss(q, target, batch, gamma)[0]


def _analytic_and_numeric(q, target, batch, gamma, eps=1e-6):
    loss, acts, grad = bellman_loss(q, target, batch, gamma)
    gw, gb = q.backward(acts, grad)
    analytic = np.concatenate([p.ravel() for pair in zip(gw, gb) for p in pair])
    theta = q.flat()
    numeric = np.empty_like(theta)
    for i in range(theta.size):
        t = theta.copy()
        t[i] = theta[i] + eps
        q.set_flat(t)
        up = _loss_of(q, target, batch, gamma)
        t[i] = theta[i] - eps
        q.set_flat(t)
        down = _loss_of(q, target, batch, gamma)
        numeric[i] = (up - down) / (2 * eps)
    q.set_flat(theta)
    return analytic, numeric


def _batch(rng, n, obs_dim, n_actions):
    return (
        rng.normal(size=(n, obs_dim)),
        rng.integers(0, n_actions, size=n),
        rng.normal(size=n),
        rng.normal(size=(n, obs_dim)),
    )


def _rel_err(a, b):
    """Norm-wise relative error, robust to entries that are exactly zero (inactive ReLUs)."""
    return np.linalg.norm(a - b) / max(np.linalg.norm(a) + np.linalg.norm(b), 1e-12)


def test_gradient_four_parameter_network():
    rng = np.random.default_rng(0)
    q = QNetwork((1, 1, 1), rng)
    q.set_flat(np.array([0.7, 0.2, -1.3, 0.4]))  # keep the hidden unit active
    assert q.num_params == 4
    target = QNetwork((1, 1, 1), rng)
    batch = (np.array([[0.5], [1.5]]), np.array([0, 0]), np.array([0.3, -0.1]), np.array([[0.2], [0.9]]))
    a, n = _analytic_and_numeric(q, target, batch, 0.7)
    assert _rel_err(a, n) < 1e-4


def test_gradient_random_networks():
    rng = np.random.default_rng(1)
    for _ in range(20):
        obs_dim, n_actions = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        hidden = tuple(int(h) for h in rng.integers(1, 6, size=rng.integers(1, 3)))
        q = QNetwork((obs_dim, *hidden, n_actions), rng)
        target = QNetwork((obs_dim, *hidden, n_actions), rng)
        # random biases keep pre-activations off the ReLU kink at exactly 0
        q.set_flat(rng.normal(size=q.num_params))
        a, n = _analytic_and_numeric(q, target, _batch(rng, 6, obs_dim, n_actions), 0.7)
        assert _rel_err(a, n) < 1e-4


def test_flat_round_trip_and_bad_length():
    q = QNetwork((3, 4, 2), np.random.default_rng(2))
    v = q.flat()
    q2 = QNetwork((3, 4, 2), np.random.default_rng(3))
    q2.set_flat(v)
    assert np.array_equal(q2.flat(), v)
    with pytest.raises(DimensionError):
        q2.set_flat(v[:-1])
    with pytest.raises(DimensionError):
        QNetwork((3,))


def test_checkpoint_round_trip(tmp_path):
    q = QNetwork((7, 64, 64, 5), np.random.default_rng(4))
    save_checkpoint(q, tmp_path / "q.npz")
    back = load_checkpoint(tmp_path / "q.npz")
    assert back.sizes == q.sizes and np.array_equal(back.flat(), q.flat())


def test_output_shape():
    q = QNetwork((7, 64, 64, 6), np.random.default_rng(5))
    assert q.forward(np.zeros(7)).shape == (1, 6)
    assert q.forward(np.zeros((9, 7))).shape == (9, 6)


def test_replay_fifo_eviction():
    mem = ReplayMemory(5, 2)
    for i in range(8):
        mem.push([i, i], i, float(i), [i + 1, i + 1])
    assert len(mem) == 5
    _, actions, rewards, _ = mem.ordered()
    assert actions.tolist() == [3, 4, 5, 6, 7]  # three oldest gone
    assert rewards.tolist() == [3.0, 4.0, 5.0, 6.0, 7.0]


def test_replay_insufficient():
    mem = ReplayMemory(10, 2)
    mem.push([0, 0], 0, 0.0, [0, 0])
    with pytest.raises(InsufficientData):
        mem.sample(np.random.default_rng(0), 2)


def _filled_memory(rng, n, obs_dim, n_actions, rewards=None):
    mem = ReplayMemory(3000, obs_dim)
    for i in range(n):
        r = rng.normal() if rewards is None else rewards
        mem.push(rng.uniform(size=obs_dim), int(rng.integers(n_actions)), r, rng.uniform(size=obs_dim))
    return mem


def test_train_step_requires_batch():
    rng = np.random.default_rng(0)
    q = QNetwork((2, 4, 2), rng)
    mem = _filled_memory(rng, 5, 2, 2)
    with pytest.raises(InsufficientData):
        train_step(q, q.copy(), mem, Hyperparams(batch_size=32), rng)


def test_degenerate_target_loss_shrinks():
    rng = np.random.default_rng(1)
    hp = Hyperparams(gamma=0.0, learning_rate=0.01)
    q = QNetwork((3, 8, 2), rng)
    target = q.copy()
    mem = _filled_memory(rng, 200, 3, 2, rewards=0.0)
    losses = [train_step(q, target, mem, hp, rng) for _ in range(400)]
    assert np.mean(losses[-20:]) < 0.1 * np.mean(losses[:20])


def test_train_step_reproducible():
    def once():
        rng = np.random.default_rng(7)
        q = QNetwork((3, 8, 2), rng)
        mem = _filled_memory(rng, 100, 3, 2)
        return train_step(q, q.copy(), mem, Hyperparams(), rng), q.flat()

    (l1, p1), (l2, p2) = once(), once()
    assert l1 == l2 and np.array_equal(p1, p2)


def test_train_step_returns_pre_update_loss():
    rng = np.random.default_rng(3)
    q = QNetwork((3, 8, 2), rng)
    target = q.copy()
    mem = _filled_memory(rng, 100, 3, 2)
    batch_rng = np.random.default_rng(11)
    expected = bellman_loss(q, target, mem.sample(np.random.default_rng(11), 32), 0.7)[0]
    assert train_step(q, target, mem, Hyperparams(), batch_rng) == expected


def test_sync_target():
    rng = np.random.default_rng(0)
    q = QNetwork((3, 5, 2), rng)
    target = QNetwork((3, 5, 2), np.random.default_rng(99))
    x = rng.normal(size=(10, 3))
    assert not np.allclose(q.forward(x), target.forward(x))
    sync_target(q, target)
    assert np.array_equal(q.forward(x), target.forward(x))
    q.weights[0] += 1.0  # target keeps its own copy
    assert not np.array_equal(q.forward(x), target.forward(x))
