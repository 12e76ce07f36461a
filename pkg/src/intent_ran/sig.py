"""Softgoal Interdependency Graph decomposition.

A two-level SIG links one softgoal to its objectives (``sg_weights``) and each
objective to the candidate operations (``op_weights``, rows = operations).
Scores propagate as weighted sums:

* operation score  = op_weights[op] . sg_weights
* objective score  = sum of the objective's column of op_weights
* softgoal score   = mean of the objective scores
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, EmptyInput, InconsistentModel, IntentSyntaxError, RangeError
from .intent_codec import IntentDocument
from .ontology import (
    ConflictRule,
    ConflictSet,
    EnergySavingOp,
    NetworkOntology,
    ObjectiveKind,
    detect_target_conflicts,
)

__all__ = [
    "DEFAULT_THRESHOLD",
    "DecompositionResult",
    "SigModel",
    "SigScores",
    "check_satisfaction",
    "decompose",
    "load_sig_json",
    "prune_conflicting_ops",
    "score_objectives",
    "score_operations",
    "score_softgoal",
    "sig_to_json",
]

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class SigModel:
    softgoal: str
    objectives: tuple[str, ...]
    operations: tuple[str, ...]
    sg_weights: tuple[float, ...]
    op_weights: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.sg_weights) != len(self.objectives):
            raise DimensionError(
                f"{len(self.sg_weights)} softgoal weights for {len(self.objectives)} objectives"
            )
        if len(self.op_weights) != len(self.operations):
            raise DimensionError(
                f"{len(self.op_weights)} weight rows for {len(self.operations)} operations"
            )
        for op, row in zip(self.operations, self.op_weights):
            if len(row) != len(self.objectives):
                raise DimensionError(f"row for {op!r} has {len(row)} weights, expected {len(self.objectives)}")
        for w in (*self.sg_weights, *(w for row in self.op_weights for w in row)):
            if not (-1.0 <= w <= 1.0):
                raise RangeError(f"weight {w} outside [-1, 1]")

    def weight_matrix(self) -> np.ndarray:
        return np.asarray(self.op_weights, dtype=float).reshape(len(self.operations), len(self.objectives))


@dataclass(frozen=True)
class SigScores:
    op_scores: tuple[float, ...]
    objective_scores: tuple[float, ...]
    softgoal_score: float

    def rounded(self, ndigits: int = 2) -> dict:
        return {
            "op_scores": [round(s, ndigits) for s in self.op_scores],
            "objective_scores": [round(s, ndigits) for s in self.objective_scores],
            "softgoal_score": round(self.softgoal_score, ndigits),
        }


@dataclass(frozen=True)
class DecompositionResult:
    pruned_ops: tuple[tuple[str, float], ...]
    scores: SigScores
    conflicts: ConflictSet
    satisfied: bool
    threshold: float
    with_conflict: bool = True
    operations: tuple[str, ...] = field(default=())

    @property
    def op_labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.pruned_ops)

    def energy_saving_ops(self) -> tuple[EnergySavingOp, ...]:
        return tuple(EnergySavingOp.from_label(label) for label in self.op_labels)

    def to_report(self) -> dict:
        return {
            "conflict_analysis": self.with_conflict,
            "conflicts": [{"a": a, "b": b, "reason": r} for a, b, r in self.conflicts.pairs],
            "operations": list(self.operations),
            "pruned_ops": [{"operation": label, "score": round(score, 2)} for label, score in self.pruned_ops],
            "satisfied": self.satisfied,
            "scores": self.scores.rounded(2),
            "threshold": self.threshold,
        }


def _float_tuple(values, what: str) -> tuple[float, ...]:
    try:
        out = tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"{what} must be a list of numbers") from exc
    if not all(math.isfinite(v) for v in out):
        raise RangeError(f"{what} contains a non-finite weight")
    return out


def load_sig_json(text: str) -> SigModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IntentSyntaxError(f"malformed SIG JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    required = ("softgoal", "objectives", "operations", "sg_weights", "op_weights")
    if not isinstance(data, dict) or any(k not in data for k in required):
        raise DimensionError(f"SIG model must be an object with members {required}")
    if not isinstance(data["op_weights"], list):
        raise DimensionError("op_weights must be a list of rows")
    return SigModel(
        softgoal=str(data["softgoal"]),
        objectives=tuple(str(o) for o in data["objectives"]),
        operations=tuple(str(o) for o in data["operations"]),
        sg_weights=_float_tuple(data["sg_weights"], "sg_weights"),
        op_weights=tuple(_float_tuple(row, "op_weights row") for row in data["op_weights"]),
    )


def sig_to_json(model: SigModel) -> str:
    data = {
        "softgoal": model.softgoal,
        "objectives": list(model.objectives),
        "operations": list(model.operations),
        "sg_weights": list(model.sg_weights),
        "op_weights": [list(row) for row in model.op_weights],
    }
    return json.dumps(data, indent=2) + "\n"


def score_operations(model: SigModel) -> tuple[float, ...]:
    return tuple(float(s) for s in model.weight_matrix() @ np.asarray(model.sg_weights, dtype=float))


def score_objectives(model: SigModel) -> tuple[float, ...]:
    return tuple(float(s) for s in model.weight_matrix().sum(axis=0))


def score_softgoal(objective_scores: Sequence[float]) -> float:
    if len(objective_scores) == 0:
        raise EmptyInput("softgoal score needs at least one objective score")
    return float(np.mean(np.asarray(objective_scores, dtype=float)))


def check_satisfaction(softgoal_score: float, threshold: float) -> bool:
    return softgoal_score >= threshold


def _rule_for(rules: Iterable[ConflictRule], a: ObjectiveKind, b: ObjectiveKind) -> ConflictRule | None:
    for rule in rules:
        if {rule.objective_a, rule.objective_b} == {a, b}:
            return rule
    return None


def prune_conflicting_ops(
    model: SigModel,
    conflicts: ConflictSet,
    rules: Iterable[ConflictRule],
    op_scores: Sequence[float] | None = None,
    harm_threshold: float | None = None,
) -> tuple[tuple[str, float], ...]:
    """Keep operations with a non-negative score.

    With ``harm_threshold`` set, an operation is also dropped when its weight
    toward the dominant objective of any conflicting pair is at or below the
    threshold. Conflicting pairs without a matching rule are not considered.
    """
    if op_scores is None:
        op_scores = score_operations(model)
    rules = tuple(rules)
    harmful_columns: set[int] = set()
    if harm_threshold is not None:
        for a, b in conflicts.objective_pairs():
            rule = _rule_for(rules, a, b)
            if rule is None:
                continue
            dominant = rule.dominant().value
            if dominant in model.objectives:
                harmful_columns.add(model.objectives.index(dominant))

    kept = []
    for op, score, row in zip(model.operations, op_scores, model.op_weights):
        if score < 0:
            continue
        if any(row[c] <= harm_threshold for c in harmful_columns):
            continue
        kept.append((op, float(score)))
    return tuple(kept)


def decompose(
    doc: IntentDocument,
    ontology: NetworkOntology,
    model: SigModel,
    threshold: float = DEFAULT_THRESHOLD,
    *,
    with_conflict: bool = True,
    harm_threshold: float | None = None,
) -> DecompositionResult:
    """Score the SIG, detect target conflicts, prune operations, check satisfaction.

    ``with_conflict=False`` is the baseline without conflict analysis: no
    conflicts are computed and every operation is kept.
    """
    if set(model.objectives) != set(ontology.objective_labels):
        raise InconsistentModel(
            f"SIG objectives {model.objectives} do not match ontology objectives {ontology.objective_labels}"
        )
    op_scores = score_operations(model)
    objective_scores = score_objectives(model)
    scores = SigScores(op_scores, objective_scores, score_softgoal(objective_scores))

    if with_conflict:
        conflicts = detect_target_conflicts(doc)
        pruned = prune_conflicting_ops(model, conflicts, ontology.conflict_rules, op_scores, harm_threshold)
    else:
        conflicts = ConflictSet()
        pruned = tuple(zip(model.operations, op_scores))

    return DecompositionResult(
        pruned_ops=pruned,
        scores=scores,
        conflicts=conflicts,
        satisfied=check_satisfaction(scores.softgoal_score, threshold),
        threshold=threshold,
        with_conflict=with_conflict,
        operations=model.operations,
    )
