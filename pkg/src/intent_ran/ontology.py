"""KAOS-style network ontology and target-level conflict detection."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Iterable, Mapping

from .errors import ConfigError
from .intent_codec import (
    ENERGY_TARGET,
    LATENCY_TARGET,
    THROUGHPUT_TARGET,
    IntentDocument,
    extract_bounds,
)

__all__ = [
    "ConflictRule",
    "ConflictSet",
    "Direction",
    "EnergySavingOp",
    "NetworkOntology",
    "OpKind",
    "Objective",
    "ObjectiveKind",
    "DEFAULT_CONFLICT_RULES",
    "DEFAULT_OPERATIONS",
    "DEFAULT_PRIORITY",
    "build_knowledge_base",
    "conflict_rules_from_config",
    "detect_target_conflicts",
]


class ObjectiveKind(str, Enum):
    TOTAL_ENERGY_CONSUMPTION = "TotalEnergyConsumption"
    DOWNLINK_THROUGHPUT = "DownlinkThroughput"
    FIRST_PACKET_LATENCY = "FirstPacketLatency"


class Direction(str, Enum):
    MINIMIZE = "Minimize"
    MAXIMIZE = "Maximize"


class OpKind(str, Enum):
    POWER_DELTA = "PowerDelta"
    ANTENNA_ANGLE_SET = "AntennaAngleSet"
    SLEEP = "Sleep"


_DIRECTIONS = {
    ObjectiveKind.TOTAL_ENERGY_CONSUMPTION: Direction.MINIMIZE,
    ObjectiveKind.DOWNLINK_THROUGHPUT: Direction.MAXIMIZE,
    ObjectiveKind.FIRST_PACKET_LATENCY: Direction.MINIMIZE,
}

TARGET_OBJECTIVES = {
    ENERGY_TARGET: ObjectiveKind.TOTAL_ENERGY_CONSUMPTION,
    THROUGHPUT_TARGET: ObjectiveKind.DOWNLINK_THROUGHPUT,
    LATENCY_TARGET: ObjectiveKind.FIRST_PACKET_LATENCY,
}


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    direction: Direction
    bound: float
    unit: str

    def __post_init__(self):
        if _DIRECTIONS[self.kind] is not self.direction:
            raise ConfigError(f"{self.kind.value} must be {_DIRECTIONS[self.kind].value}")


@dataclass(frozen=True)
class EnergySavingOp:
    """One actuation on a base station.

    ``parameter`` is a dBm delta for PowerDelta and an angle in degrees for
    AntennaAngleSet; it is ignored for Sleep.
    """

    kind: OpKind
    parameter: float = 0.0

    def __post_init__(self):
        if self.kind is OpKind.POWER_DELTA and self.parameter not in (-1.0, 1.0):
            raise ConfigError(f"PowerDelta parameter must be -1 or +1, got {self.parameter}")
        if self.kind is OpKind.ANTENNA_ANGLE_SET and self.parameter not in (5.0, 15.0):
            raise ConfigError(f"AntennaAngleSet parameter must be 5 or 15, got {self.parameter}")

    @property
    def label(self) -> str:
        if self.kind is OpKind.POWER_DELTA:
            return f"TransmitPower{self.parameter:+.0f}dBm"
        if self.kind is OpKind.ANTENNA_ANGLE_SET:
            return f"AntennaAngle={self.parameter:.0f}deg"
        return "BSSleep"

    @classmethod
    def from_label(cls, label: str) -> EnergySavingOp:
        for op in DEFAULT_OPERATIONS:
            if op.label == label:
                return op
        raise ConfigError(f"unknown energy-saving operation label {label!r}")


# Order matches the rows of the bundled SIG model.
DEFAULT_OPERATIONS = (
    EnergySavingOp(OpKind.POWER_DELTA, 1.0),
    EnergySavingOp(OpKind.POWER_DELTA, -1.0),
    EnergySavingOp(OpKind.ANTENNA_ANGLE_SET, 5.0),
    EnergySavingOp(OpKind.ANTENNA_ANGLE_SET, 15.0),
    EnergySavingOp(OpKind.SLEEP),
)

# Descending softgoal-edge weight: energy 0.80 > latency 0.60 > throughput 0.50.
DEFAULT_PRIORITY = (
    ObjectiveKind.TOTAL_ENERGY_CONSUMPTION,
    ObjectiveKind.FIRST_PACKET_LATENCY,
    ObjectiveKind.DOWNLINK_THROUGHPUT,
)


@dataclass(frozen=True)
class ConflictRule:
    objective_a: ObjectiveKind
    objective_b: ObjectiveKind
    priority_order: tuple[ObjectiveKind, ...] = DEFAULT_PRIORITY
    level: int = 1

    def __post_init__(self):
        if self.objective_a is self.objective_b:
            raise ConfigError("conflict rule must reference two distinct objectives")
        if sorted(self.priority_order, key=lambda k: k.value) != sorted(ObjectiveKind, key=lambda k: k.value):
            raise ConfigError("priority_order must be a permutation of all objectives")
        if self.level < 1:
            raise ConfigError("conflict level must be >= 1")

    def dominant(self) -> ObjectiveKind:
        """The higher-priority objective of this rule's pair."""
        for kind in self.priority_order:
            if kind in (self.objective_a, self.objective_b):
                return kind
        raise AssertionError("unreachable")


DEFAULT_CONFLICT_RULES = (
    ConflictRule(ObjectiveKind.TOTAL_ENERGY_CONSUMPTION, ObjectiveKind.DOWNLINK_THROUGHPUT),
    ConflictRule(ObjectiveKind.DOWNLINK_THROUGHPUT, ObjectiveKind.FIRST_PACKET_LATENCY),
)


def conflict_rules_from_config(section: Iterable[Mapping[str, Any]] | None) -> tuple[ConflictRule, ...]:
    """Build rules from a ``[conflict_rules]`` config section; None means the defaults."""
    if section is None:
        return DEFAULT_CONFLICT_RULES
    rules = []
    for entry in section:
        try:
            rules.append(
                ConflictRule(
                    ObjectiveKind(entry["objective_a"]),
                    ObjectiveKind(entry["objective_b"]),
                    tuple(ObjectiveKind(k) for k in entry.get("priority_order", [k.value for k in DEFAULT_PRIORITY])),
                    int(entry.get("level", 1)),
                )
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad conflict rule {dict(entry)!r}: {exc}") from exc
    return tuple(rules)


@dataclass(frozen=True)
class NetworkOntology:
    objectives: tuple[Objective, ...]
    domain_properties: tuple[str, ...]
    ran_requirements: tuple[str, ...]
    energy_saving_ops: tuple[EnergySavingOp, ...]
    bs_agents: tuple[str, ...]
    conflict_rules: tuple[ConflictRule, ...] = field(default=())

    def __post_init__(self):
        kinds = [o.kind for o in self.objectives]
        if sorted(kinds, key=lambda k: k.value) != sorted(ObjectiveKind, key=lambda k: k.value):
            raise ConfigError(f"ontology needs exactly the three objectives, got {kinds}")
        for rule in self.conflict_rules:
            if rule.objective_a not in kinds or rule.objective_b not in kinds:
                raise ConfigError(f"conflict rule references unknown objective: {rule}")

    def objective(self, kind: ObjectiveKind) -> Objective:
        return next(o for o in self.objectives if o.kind is kind)

    @property
    def objective_labels(self) -> tuple[str, ...]:
        return tuple(o.kind.value for o in self.objectives)


DOMAIN_PROPERTIES = (
    "the maximum transmit power of BSs p_max is fixed",
    "the location of BSs (x, y) is fixed",
)


def build_knowledge_base(
    doc: IntentDocument,
    rules: Iterable[ConflictRule] = DEFAULT_CONFLICT_RULES,
    num_bs: int = 1,
) -> NetworkOntology:
    bounds = extract_bounds(doc)
    objectives = (
        Objective(ObjectiveKind.TOTAL_ENERGY_CONSUMPTION, Direction.MINIMIZE, bounds.energy_max_kwh, "kWh"),
        Objective(ObjectiveKind.DOWNLINK_THROUGHPUT, Direction.MAXIMIZE, bounds.throughput_min_gbps, "Gbps"),
        Objective(ObjectiveKind.FIRST_PACKET_LATENCY, Direction.MINIMIZE, bounds.latency_max_ms, "ms"),
    )
    requirements = (
        f"total energy consumption <= {bounds.energy_max_kwh:g} kWh",
        f"downlink throughput >= {bounds.throughput_min_gbps:g} Gbps",
        f"first packet latency <= {bounds.latency_max_ms:g} ms",
    )
    return NetworkOntology(
        objectives=objectives,
        domain_properties=DOMAIN_PROPERTIES,
        ran_requirements=requirements,
        energy_saving_ops=DEFAULT_OPERATIONS,
        bs_agents=tuple(f"BSAgent-{i}" for i in range(num_bs)),
        conflict_rules=tuple(rules),
    )


@dataclass(frozen=True)
class ConflictSet:
    """Unordered pairs of target names with opposing conditions."""

    pairs: tuple[tuple[str, str, str], ...] = ()

    def __post_init__(self):
        seen = set()
        for a, b, _ in self.pairs:
            if a == b:
                raise ValueError(f"conflict pair with identical names: {a}")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate conflict pair: {a}, {b}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.pairs)

    def unordered(self) -> set[frozenset[str]]:
        return {frozenset((a, b)) for a, b, _ in self.pairs}

    def objective_pairs(self) -> list[tuple[ObjectiveKind, ObjectiveKind]]:
        return [
            (TARGET_OBJECTIVES[a], TARGET_OBJECTIVES[b])
            for a, b, _ in self.pairs
            if a in TARGET_OBJECTIVES and b in TARGET_OBJECTIVES
        ]


def detect_target_conflicts(doc: IntentDocument) -> ConflictSet:
    """Pair up targets whose conditions oppose (one upper bound, one lower bound).

    Pairs are emitted in document order; the result as a set does not depend
    on the order of the targets.
    """
    pairs = []
    for t1, t2 in combinations(doc.expectation.targets, 2):
        if t1.target_condition is not t2.target_condition:
            reason = f"{t1.target_condition.value} vs {t2.target_condition.value}"
            pairs.append((t1.target_name, t2.target_name, reason))
    return ConflictSet(tuple(pairs))

