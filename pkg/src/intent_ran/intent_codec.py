"""Energy-saving intent documents: YAML/JSON parsing, canonical JSON, bounds.

The accepted document is a closed subset of the 3GPP intent template::

    userLabel: Energy Saving
    IntentExpectation:
      expectationId: "1"
      expectationVerb: ENSURE
      expectationObjects:
        - objectInstance: DN of the RAN SubNetwork
          objectContexts:
            - contextAttribute: RAT
              contextCondition: IS_ALL_OF
              contextValueRange: [NR]
      expectationTargets:
        - targetName: PowerConsumer(KWh)
          targetCondition: IS_LESS_THAN
          targetValueRange: 0.6

Unknown keys anywhere in the tree are rejected.
"""

from __future__ import annotations

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConditionMismatch, IntentSyntaxError, MissingTarget, SchemaError

__all__ = [
    "ContextCondition",
    "ExpectationObject",
    "ExpectationTarget",
    "ExpectationVerb",
    "IntentDocument",
    "IntentExpectation",
    "ObjectContext",
    "ObjectiveBounds",
    "TargetCondition",
    "ENERGY_TARGET",
    "THROUGHPUT_TARGET",
    "LATENCY_TARGET",
    "extract_bounds",
    "intent_to_json",
    "load_intent",
    "parse_intent_json",
    "parse_intent_yaml",
]

ENERGY_TARGET = "PowerConsumer(KWh)"
THROUGHPUT_TARGET = "aveDLRANUEThpt(Gbps)"
LATENCY_TARGET = "DLFirstPacketLatency(ms)"


class ExpectationVerb(str, Enum):
    ENSURE = "ENSURE"


class ContextCondition(str, Enum):
    IS_ALL_OF = "IS_ALL_OF"


class TargetCondition(str, Enum):
    IS_LESS_THAN = "IS_LESS_THAN"
    IS_GREATER_THAN = "IS_GREATER_THAN"


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True, strict=True)


class ObjectContext(_Model):
    context_attribute: str = Field(alias="contextAttribute", min_length=1)
    context_condition: ContextCondition = Field(alias="contextCondition")
    context_value_range: tuple[str, ...] = Field(alias="contextValueRange", min_length=1)

    @field_validator("context_condition", mode="before")
    @classmethod
    def _enum_from_str(cls, v: Any) -> Any:
        return ContextCondition(v) if isinstance(v, str) else v

    @field_validator("context_value_range", mode="before")
    @classmethod
    def _tuple(cls, v: Any) -> Any:
        return tuple(v) if isinstance(v, list) else v


class ExpectationObject(_Model):
    object_instance: str = Field(alias="objectInstance", min_length=1)
    contexts: tuple[ObjectContext, ...] = Field(alias="objectContexts", default=())

    @field_validator("contexts", mode="before")
    @classmethod
    def _tuple(cls, v: Any) -> Any:
        return tuple(v) if isinstance(v, list) else v


class ExpectationTarget(_Model):
    target_name: str = Field(alias="targetName", min_length=1)
    target_condition: TargetCondition = Field(alias="targetCondition")
    target_value: float = Field(alias="targetValueRange")

    @field_validator("target_condition", mode="before")
    @classmethod
    def _enum_from_str(cls, v: Any) -> Any:
        return TargetCondition(v) if isinstance(v, str) else v

    @field_validator("target_value")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("targetValueRange must be finite")
        return float(v)


class IntentExpectation(_Model):
    expectation_id: str = Field(alias="expectationId", min_length=1)
    expectation_verb: ExpectationVerb = Field(alias="expectationVerb")
    objects: tuple[ExpectationObject, ...] = Field(alias="expectationObjects", default=())
    targets: tuple[ExpectationTarget, ...] = Field(alias="expectationTargets", min_length=1)

    @field_validator("expectation_id", mode="before")
    @classmethod
    def _id_to_str(cls, v: Any) -> Any:
        # YAML reads an unquoted `1` as an int
        if isinstance(v, int) and not isinstance(v, bool):
            return str(v)
        return v

    @field_validator("expectation_verb", mode="before")
    @classmethod
    def _enum_from_str(cls, v: Any) -> Any:
        return ExpectationVerb(v) if isinstance(v, str) else v

    @field_validator("objects", "targets", mode="before")
    @classmethod
    def _tuple(cls, v: Any) -> Any:
        return tuple(v) if isinstance(v, list) else v

    @model_validator(mode="after")
    def _unique_targets(self) -> IntentExpectation:
        names = [t.target_name for t in self.targets]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate targetName in {names}")
        return self


class IntentDocument(_Model):
    user_label: str = Field(alias="userLabel", min_length=1)
    expectation: IntentExpectation = Field(alias="IntentExpectation")

    def target(self, name: str) -> ExpectationTarget:
        for t in self.expectation.targets:
            if t.target_name == name:
                return t
        raise MissingTarget(name)


class ObjectiveBounds(BaseModel):
    """Numeric bounds lifted from the intent targets, in intent units."""

    model_config = ConfigDict(frozen=True)

    energy_max_kwh: float = Field(gt=0)
    throughput_min_gbps: float = Field(gt=0)
    latency_max_ms: float = Field(gt=0)


def _validate(data: Any) -> IntentDocument:
    if not isinstance(data, dict):
        raise SchemaError(f"intent document must be a mapping, got {type(data).__name__}")
    try:
        return IntentDocument.model_validate(data)
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc


def parse_intent_yaml(text: str) -> IntentDocument:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise IntentSyntaxError(f"malformed YAML{where}: {exc}") from exc
    return _validate(data)


def parse_intent_json(text: str) -> IntentDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IntentSyntaxError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return _validate(data)


def load_intent(path) -> IntentDocument:
    """Read an intent file; ``.json`` is parsed as JSON, anything else as YAML."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return parse_intent_json(text)
    return parse_intent_yaml(text)


def _minimal_numbers(obj: Any) -> Any:
    if isinstance(obj, float) and obj.is_integer():
        return int(obj)
    if isinstance(obj, dict):
        return {k: _minimal_numbers(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_minimal_numbers(v) for v in obj]
    return obj


def intent_to_json(doc: IntentDocument) -> str:
    """Canonical JSON: sorted keys, 2-space indent, integral floats as ints, trailing LF."""
    data = _minimal_numbers(doc.model_dump(mode="json", by_alias=True))
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# name -> (required condition, bounds field)
_BOUND_TARGETS = {
    ENERGY_TARGET: (TargetCondition.IS_LESS_THAN, "energy_max_kwh"),
    THROUGHPUT_TARGET: (TargetCondition.IS_GREATER_THAN, "throughput_min_gbps"),
    LATENCY_TARGET: (TargetCondition.IS_LESS_THAN, "latency_max_ms"),
}


def extract_bounds(doc: IntentDocument) -> ObjectiveBounds:
    """Map the three energy/throughput/latency targets to objective bounds.

    ``IS_LESS_THAN`` targets become upper bounds and ``IS_GREATER_THAN``
    targets become lower bounds; any other pairing raises ConditionMismatch.
    """
    values = {}
    for name, (condition, field) in _BOUND_TARGETS.items():
        target = doc.target(name)
        if target.target_condition is not condition:
            raise ConditionMismatch(
                f"{name} must use {condition.value}, got {target.target_condition.value}"
            )
        values[field] = target.target_value
    try:
        return ObjectiveBounds(**values)
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc
