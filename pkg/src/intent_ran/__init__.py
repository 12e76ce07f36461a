"""Energy-aware intent decomposition and DQN-based RAN optimization."""

__version__ = "0.1.0"
