"""Learning agents that pick energy-saving operations per BS."""

from .agent import (
    DqnAgent,
    Hyperparams,
    QTableAgent,
    StaticPolicy,
    bellman_loss,
    discretize,
    select_action,
    sync_target,
    train_step,
)
from .network import QNetwork, load_checkpoint, save_checkpoint
from .replay import ReplayMemory
from .reward import OBS_DIM, RewardWeights, build_observations, normalized_metrics, reward, reward_from_metrics
from .training import (
    TRACE_HEADER,
    TrainingTrace,
    action_set,
    episode_seed,
    q_learning_baseline,
    run_training,
    static_baseline,
    write_trace_csv,
)

__all__ = [
    "DqnAgent",
    "Hyperparams",
    "OBS_DIM",
    "QNetwork",
    "QTableAgent",
    "ReplayMemory",
    "RewardWeights",
    "StaticPolicy",
    "TRACE_HEADER",
    "TrainingTrace",
    "action_set",
    "bellman_loss",
    "build_observations",
    "discretize",
    "episode_seed",
    "load_checkpoint",
    "normalized_metrics",
    "q_learning_baseline",
    "reward",
    "reward_from_metrics",
    "run_training",
    "save_checkpoint",
    "select_action",
    "static_baseline",
    "sync_target",
    "train_step",
    "write_trace_csv",
]
