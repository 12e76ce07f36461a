"""Experiment configuration loaded from TOML."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from ..errors import ConfigError
from ..ontology import ConflictRule, DEFAULT_CONFLICT_RULES, conflict_rules_from_config
from ..optimizer.agent import Hyperparams
from ..ransim.config import ScenarioConfig
from ..sig import DEFAULT_THRESHOLD

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["OUTPUT_ENV", "ExperimentConfig", "bundled_path", "load_config"]

OUTPUT_ENV = "INTENT_RAN_OUT"


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("intent_ran.data") / name))


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig.desk)
    intent_path: Path = field(default_factory=lambda: bundled_path("energy_saving_intent.yaml"))
    sig_model_path: Path = field(default_factory=lambda: bundled_path("sig_model.json"))
    hp: Hyperparams = field(default_factory=Hyperparams)
    deltas: tuple[float, float, float] = (0.8, 0.6, 0.2)
    reward_bounds: Mapping[str, float] = field(default_factory=dict)  # overrides of r_min, e_max, ...
    seeds: tuple[int, ...] = (0,)
    output_dir: Path = Path("out")
    threshold: float = DEFAULT_THRESHOLD
    harm_threshold: float | None = None
    conflict_rules: tuple[ConflictRule, ...] = DEFAULT_CONFLICT_RULES

    def __post_init__(self):
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        unknown = set(self.reward_bounds) - {"r_min", "r_max", "e_min", "e_max", "t_min", "t_max"}
        if unknown:
            raise ConfigError(f"unknown reward bounds: {sorted(unknown)}")

    def check_paths(self) -> None:
        for p in (self.intent_path, self.sig_model_path):
            if not Path(p).is_file():
                raise ConfigError(f"file not found: {p}")

    def resolved_output_dir(self) -> Path:
        """``$INTENT_RAN_OUT`` wins over the configured directory."""
        env = os.environ.get(OUTPUT_ENV)
        return Path(env) if env else Path(self.output_dir)

    def paper_scale(self) -> ExperimentConfig:
        """Full-size scenario (40 BSs, 320 UEs) and 1000-step episodes."""
        return replace(
            self,
            scenario=self.scenario.with_overrides(num_bs=40, num_ue=320),
            hp=self.hp.with_overrides(steps_per_episode=1000),
        )

    def with_overrides(self, **kwargs: Any) -> ExperimentConfig:
        return replace(self, **kwargs)


def _hp_from_mapping(data: Mapping[str, Any]) -> Hyperparams:
    known = {f.name for f in fields(Hyperparams)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown training keys: {sorted(unknown)}")
    return Hyperparams(**{k: tuple(v) if isinstance(v, list) else v for k, v in data.items()})


def load_config(path: str | Path | None = None) -> ExperimentConfig:
    """Read a TOML file with optional ``[scenario]``, ``[training]``, ``[reward]``,
    ``[experiment]`` tables and a ``[[conflict_rules]]`` array. Missing parts keep
    their defaults; relative paths are resolved against the file's directory.
    """
    if path is None:
        return ExperimentConfig()
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    unknown = set(data) - {"scenario", "training", "reward", "experiment", "conflict_rules"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    base = path.parent
    kwargs: dict[str, Any] = {}
    scenario = ScenarioConfig.desk()
    if "scenario" in data:
        scenario = ScenarioConfig.from_mapping({**{"num_bs": 4, "num_ue": 32}, **data["scenario"]})
    kwargs["scenario"] = scenario
    if "training" in data:
        kwargs["hp"] = _hp_from_mapping(data["training"])
    if "reward" in data:
        reward = dict(data["reward"])
        if "deltas" in reward:
            deltas = reward.pop("deltas")
            if len(deltas) != 3:
                raise ConfigError("reward.deltas needs three values")
            kwargs["deltas"] = tuple(float(d) for d in deltas)
        kwargs["reward_bounds"] = {k: float(v) for k, v in reward.items()}
    exp = dict(data.get("experiment", {}))
    for key, target in (("intent", "intent_path"), ("sig_model", "sig_model_path"), ("output_dir", "output_dir")):
        if key in exp:
            kwargs[target] = base / exp.pop(key)
    if "seeds" in exp:
        kwargs["seeds"] = tuple(int(s) for s in exp.pop("seeds"))
    if "threshold" in exp:
        kwargs["threshold"] = float(exp.pop("threshold"))
    if "harm_threshold" in exp:
        kwargs["harm_threshold"] = float(exp.pop("harm_threshold"))
    if exp:
        raise ConfigError(f"unknown experiment keys: {sorted(exp)}")
    if "conflict_rules" in data:
        kwargs["conflict_rules"] = conflict_rules_from_config(data["conflict_rules"])
    return ExperimentConfig(**kwargs)
