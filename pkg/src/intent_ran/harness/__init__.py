"""Configuration, experiment orchestration, benchmarks and the CLI."""

from .config import OUTPUT_ENV, ExperimentConfig, bundled_path, load_config
from .experiment import (
    BENCH_HEADER,
    SCHEMES,
    RunSummary,
    bench_decomposition,
    decompose_files,
    reward_weights,
    run_experiment,
    smooth,
    write_bench_csv,
)

__all__ = [
    "BENCH_HEADER",
    "ExperimentConfig",
    "OUTPUT_ENV",
    "RunSummary",
    "SCHEMES",
    "bench_decomposition",
    "bundled_path",
    "decompose_files",
    "load_config",
    "reward_weights",
    "run_experiment",
    "smooth",
    "write_bench_csv",
]
