import pytest
from hypothesis import given
from hypothesis import strategies as st

from intent_ran.errors import ConfigError, MissingTarget
from intent_ran.intent_codec import IntentDocument, extract_bounds
from intent_ran.ontology import (
    DEFAULT_CONFLICT_RULES,
    ConflictRule,
    ConflictSet,
    Direction,
    EnergySavingOp,
    Objective,
    ObjectiveKind,
    OpKind,
    build_knowledge_base,
    conflict_rules_from_config,
    detect_target_conflicts,
)

E, R, T = ObjectiveKind


def _doc(targets):
    return IntentDocument.model_validate(
        {
            "userLabel": "t",
            "IntentExpectation": {
                "expectationId": "1",
                "expectationVerb": "ENSURE",
                "expectationObjects": [],
                "expectationTargets": [
                    {"targetName": n, "targetCondition": c, "targetValueRange": 1.0} for n, c in targets
                ],
            },
        }
    )


def test_knowledge_base_from_example(doc):
    kb = build_knowledge_base(doc, num_bs=3)
    assert [o.kind for o in kb.objectives] == [E, R, T]
    assert [o.direction for o in kb.objectives] == [Direction.MINIMIZE, Direction.MAXIMIZE, Direction.MINIMIZE]
    assert {op.kind for op in kb.energy_saving_ops} == set(OpKind)
    assert len(kb.energy_saving_ops) == 5
    assert kb.conflict_rules == DEFAULT_CONFLICT_RULES
    assert kb.bs_agents == ("BSAgent-0", "BSAgent-1", "BSAgent-2")
    assert len(kb.domain_properties) == 2 and len(kb.ran_requirements) == 3


def test_objective_bounds_equal_extracted_bounds(doc):
    kb = build_knowledge_base(doc)
    b = extract_bounds(doc)
    assert [o.bound for o in kb.objectives] == [b.energy_max_kwh, b.throughput_min_gbps, b.latency_max_ms]


def test_empty_rules_allowed(doc):
    assert build_knowledge_base(doc, rules=()).conflict_rules == ()


def test_knowledge_base_propagates_missing_target():
    d = _doc([("PowerConsumer(KWh)", "IS_LESS_THAN")])
    with pytest.raises(MissingTarget):
        build_knowledge_base(d)


def test_knowledge_base_deterministic(doc):
    assert build_knowledge_base(doc) == build_knowledge_base(doc)


def test_example_has_two_conflicts(doc):
    cs = detect_target_conflicts(doc)
    assert len(cs) == 2
    assert cs.unordered() == {
        frozenset({"PowerConsumer(KWh)", "aveDLRANUEThpt(Gbps)"}),
        frozenset({"aveDLRANUEThpt(Gbps)", "DLFirstPacketLatency(ms)"}),
    }
    assert cs.objective_pairs() == [(E, R), (R, T)]


def test_same_conditions_no_conflicts():
    d = _doc([("a", "IS_LESS_THAN"), ("b", "IS_LESS_THAN"), ("c", "IS_LESS_THAN")])
    assert len(detect_target_conflicts(d)) == 0


@st.composite
def target_lists(draw):
    names = draw(st.lists(st.text("abcdef", min_size=1, max_size=4), min_size=1, max_size=7, unique=True))
    return [(n, draw(st.sampled_from(["IS_LESS_THAN", "IS_GREATER_THAN"]))) for n in names]


@given(target_lists(), st.randoms())
def test_conflicts_match_brute_force_and_ignore_order(targets, rnd):
    expected = set()
    for i in range(len(targets)):
        for j in range(len(targets)):
            if i != j and targets[i][1] != targets[j][1]:
                expected.add(frozenset({targets[i][0], targets[j][0]}))
    got = detect_target_conflicts(_doc(targets)).unordered()
    assert got == expected
    assert len(got) <= len(targets) * (len(targets) - 1) // 2
    shuffled = list(targets)
    rnd.shuffle(shuffled)
    assert detect_target_conflicts(_doc(shuffled)).unordered() == got


def test_op_parameter_validation():
    with pytest.raises(ConfigError):
        EnergySavingOp(OpKind.POWER_DELTA, 2.0)
    with pytest.raises(ConfigError):
        EnergySavingOp(OpKind.ANTENNA_ANGLE_SET, 10.0)
    assert EnergySavingOp.from_label("AntennaAngle=15deg") == EnergySavingOp(OpKind.ANTENNA_ANGLE_SET, 15.0)
    with pytest.raises(ConfigError):
        EnergySavingOp.from_label("Teleport")


def test_objective_direction_enforced():
    with pytest.raises(ConfigError):
        Objective(R, Direction.MINIMIZE, 1.0, "Gbps")


def test_conflict_rule_invariants():
    with pytest.raises(ConfigError):
        ConflictRule(E, E)
    with pytest.raises(ConfigError):
        ConflictRule(E, R, priority_order=(E, R))
    with pytest.raises(ConfigError):
        ConflictRule(E, R, level=0)
    assert ConflictRule(R, T).dominant() is T  # latency outranks throughput by default
    assert ConflictRule(E, R).dominant() is E


def test_conflict_set_invariants():
    with pytest.raises(ValueError):
        ConflictSet((("a", "a", "x"),))
    with pytest.raises(ValueError):
        ConflictSet((("a", "b", "x"), ("b", "a", "y")))


def test_rules_from_config():
    assert conflict_rules_from_config(None) == DEFAULT_CONFLICT_RULES
    rules = conflict_rules_from_config(
        [{"objective_a": "TotalEnergyConsumption", "objective_b": "FirstPacketLatency", "level": 2}]
    )
    assert rules == (ConflictRule(E, T, level=2),)
    with pytest.raises(ConfigError):
        conflict_rules_from_config([{"objective_a": "Nope", "objective_b": "FirstPacketLatency"}])
