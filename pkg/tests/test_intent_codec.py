import json
import math

import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from intent_ran.errors import ConditionMismatch, IntentSyntaxError, MissingTarget, SchemaError
from intent_ran.intent_codec import (
    ExpectationTarget,
    IntentDocument,
    TargetCondition,
    extract_bounds,
    intent_to_json,
    load_intent,
    parse_intent_json,
    parse_intent_yaml,
)

from .conftest import GOLDEN

MINIMAL = """
userLabel: probe
IntentExpectation:
  expectationId: "7"
  expectationVerb: ENSURE
  expectationObjects: []
  expectationTargets:
    - targetName: DLFirstPacketLatency(ms)
      targetCondition: IS_LESS_THAN
      targetValueRange: 2.5
"""


def _three_targets(energy="IS_LESS_THAN", thpt="IS_GREATER_THAN", lat="IS_LESS_THAN"):
    return {
        "userLabel": "x",
        "IntentExpectation": {
            "expectationId": "1",
            "expectationVerb": "ENSURE",
            "expectationObjects": [],
            "expectationTargets": [
                {"targetName": "PowerConsumer(KWh)", "targetCondition": energy, "targetValueRange": 0.6},
                {"targetName": "aveDLRANUEThpt(Gbps)", "targetCondition": thpt, "targetValueRange": 0.5},
                {"targetName": "DLFirstPacketLatency(ms)", "targetCondition": lat, "targetValueRange": 1},
            ],
        },
    }


def test_example_document_fields(doc):
    assert doc.user_label == "Energy Saving"
    exp = doc.expectation
    assert exp.expectation_id == "1"
    assert exp.expectation_verb.value == "ENSURE"
    assert [t.target_name for t in exp.targets] == [
        "PowerConsumer(KWh)",
        "aveDLRANUEThpt(Gbps)",
        "DLFirstPacketLatency(ms)",
    ]
    [obj] = exp.objects
    assert obj.object_instance == "DN of the RAN SubNetwork"
    assert [(c.context_attribute, c.context_value_range) for c in obj.contexts] == [
        ("CoverageAreaPolygon", ("Downtown",)),
        ("RAT", ("NR",)),
    ]


def test_minimal_document_field_by_field():
    d = parse_intent_yaml(MINIMAL)
    assert d.user_label == "probe"
    assert d.expectation.expectation_id == "7"
    assert d.expectation.objects == ()
    [t] = d.expectation.targets
    assert t == ExpectationTarget(
        target_name="DLFirstPacketLatency(ms)", target_condition=TargetCondition.IS_LESS_THAN, target_value=2.5
    )


def test_empty_targets_rejected():
    data = _three_targets()
    data["IntentExpectation"]["expectationTargets"] = []
    with pytest.raises(SchemaError):
        parse_intent_json(json.dumps(data))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(extra=1),
        lambda d: d["IntentExpectation"].update(expectationVerb="DELIVER"),
        lambda d: d["IntentExpectation"]["expectationTargets"][0].update(targetCondition="IS_EQUAL_TO"),
        lambda d: d["IntentExpectation"]["expectationTargets"][0].update(targetValueRange=float("inf")),
        lambda d: d["IntentExpectation"]["expectationTargets"][1].update(targetName="PowerConsumer(KWh)"),
        lambda d: d.update(userLabel=""),
        lambda d: d.pop("IntentExpectation"),
    ],
    ids=["unknown-key", "bad-verb", "bad-condition", "non-finite", "duplicate-name", "empty-label", "missing"],
)
def test_schema_violations(mutate):
    data = _three_targets()
    mutate(data)
    with pytest.raises(SchemaError):
        parse_intent_yaml(yaml.safe_dump(data))


def test_malformed_yaml_reports_location():
    with pytest.raises(IntentSyntaxError, match=r"line \d+, column \d+"):
        parse_intent_yaml("userLabel: [unclosed\n")


def test_empty_json_object_rejected():
    with pytest.raises(SchemaError):
        parse_intent_json("{}")


def test_malformed_json():
    with pytest.raises(IntentSyntaxError):
        parse_intent_json('{"userLabel": ')


def test_canonical_json_matches_golden(doc):
    assert intent_to_json(doc) == (GOLDEN / "energy_saving_intent.json").read_text(encoding="utf-8")


def test_json_round_trip_is_identity(doc):
    text = intent_to_json(doc)
    again = parse_intent_json(text)
    assert again == doc
    assert intent_to_json(again) == text


def test_golden_json_parses_to_yaml_document(doc):
    assert parse_intent_json((GOLDEN / "energy_saving_intent.json").read_text()) == doc


def test_key_order_does_not_change_bytes(intent_text):
    data = yaml.safe_load(intent_text)

    def reverse(obj):
        if isinstance(obj, dict):
            return {k: reverse(obj[k]) for k in reversed(list(obj))}
        if isinstance(obj, list):
            return [reverse(v) for v in obj]
        return obj

    shuffled = yaml.safe_dump(reverse(data), sort_keys=False)
    assert shuffled != intent_text
    assert intent_to_json(parse_intent_yaml(shuffled)) == intent_to_json(parse_intent_yaml(intent_text))


def test_load_intent_sniffs_extension(tmp_path, doc):
    p = tmp_path / "intent.json"
    p.write_text(intent_to_json(doc))
    assert load_intent(p) == doc


def test_extract_bounds_example(doc):
    b = extract_bounds(doc)
    assert (b.energy_max_kwh, b.throughput_min_gbps, b.latency_max_ms) == (0.6, 0.5, 1.0)


def test_bounds_survive_round_trip(doc):
    assert extract_bounds(parse_intent_json(intent_to_json(doc))) == extract_bounds(doc)


def test_missing_latency_target():
    data = _three_targets()
    data["IntentExpectation"]["expectationTargets"].pop()
    with pytest.raises(MissingTarget):
        extract_bounds(parse_intent_json(json.dumps(data)))


def test_condition_mismatch():
    with pytest.raises(ConditionMismatch):
        extract_bounds(parse_intent_json(json.dumps(_three_targets(thpt="IS_LESS_THAN"))))


def test_non_positive_bound_rejected():
    data = _three_targets()
    data["IntentExpectation"]["expectationTargets"][2]["targetValueRange"] = 0
    with pytest.raises(SchemaError):
        extract_bounds(parse_intent_json(json.dumps(data)))


names = st.text(alphabet="abcdefghXYZ()_", min_size=1, max_size=12)
finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e9, max_value=1e9)


@st.composite
def documents(draw):
    tnames = draw(st.lists(names, min_size=1, max_size=5, unique=True))
    targets = [
        {
            "targetName": n,
            "targetCondition": draw(st.sampled_from(["IS_LESS_THAN", "IS_GREATER_THAN"])),
            "targetValueRange": draw(finite),
        }
        for n in tnames
    ]
    objects = [
        {
            "objectInstance": draw(names),
            "objectContexts": [
                {
                    "contextAttribute": draw(names),
                    "contextCondition": "IS_ALL_OF",
                    "contextValueRange": draw(st.lists(names, min_size=1, max_size=3)),
                }
                for _ in range(draw(st.integers(0, 2)))
            ],
        }
        for _ in range(draw(st.integers(0, 2)))
    ]
    return IntentDocument.model_validate(
        {
            "userLabel": draw(names),
            "IntentExpectation": {
                "expectationId": draw(names),
                "expectationVerb": "ENSURE",
                "expectationObjects": objects,
                "expectationTargets": targets,
            },
        }
    )


@given(documents())
def test_round_trip_property(d):
    text = intent_to_json(d)
    assert parse_intent_json(text) == d
    assert intent_to_json(parse_intent_json(text)) == text


@given(st.permutations([0, 1, 2]))
def test_bounds_invariant_under_target_order(perm):
    data = _three_targets()
    tl = data["IntentExpectation"]["expectationTargets"]
    data["IntentExpectation"]["expectationTargets"] = [tl[i] for i in perm]
    b = extract_bounds(parse_intent_json(json.dumps(data)))
    assert math.isclose(b.energy_max_kwh, 0.6) and b.throughput_min_gbps == 0.5 and b.latency_max_ms == 1
