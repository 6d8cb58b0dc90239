import itertools

import pytest

from tidlab.diagrams import (
    UNORDERED_CONNECTED,
    ContractionDiagram,
    EnumOptions,
    classify_by_output,
    convention_survey,
    count_primary_operations,
    enumerate_diagrams,
    linear_family,
)
from tidlab.tensors import TensorShape, grading

MAT = TensorShape(1, 1)
HIGH = TensorShape(2, 1)
LOW = TensorShape(1, 2)


def with_output(options: EnumOptions, shape: TensorShape) -> EnumOptions:
    from dataclasses import replace

    return replace(options, required_output_shape=shape)


def test_binary_compositions_count_seven():
    diagrams = enumerate_diagrams([MAT, MAT])
    assert len(diagrams) == 7
    assert classify_by_output(diagrams) == {
        TensorShape(0, 0): 2,
        TensorShape(1, 1): 4,
        TensorShape(2, 2): 1,
    }


def test_single_operand_two_diagrams():
    diagrams = enumerate_diagrams([MAT])
    assert len(diagrams) == 2  # identity map and trace


def test_classify_empty():
    assert classify_by_output([]) == {}


def test_ternary_convention_survey():
    # the oracle fixing the counting convention: grid over
    # (slot quotient, operand quotient, connectivity), self-contraction excluded
    survey = convention_survey([HIGH, HIGH, LOW], required_output_shape=HIGH)
    assert survey == {
        (False, False, False): 88,
        (False, False, True): 84,
        (False, True, False): 44,
        (False, True, True): 42,
        (True, False, False): 16,
        (True, False, True): 14,
        (True, True, False): 8,
        (True, True, True): 7,
    }
    # exactly one option set reproduces the reference count
    assert [k for k, v in survey.items() if v == 7] == [(True, True, True)]


def test_ternary_family_counts_fourteen():
    high_out = enumerate_diagrams(
        [HIGH, HIGH, LOW], with_output(UNORDERED_CONNECTED, HIGH)
    )
    low_out = enumerate_diagrams(
        [LOW, LOW, HIGH], with_output(UNORDERED_CONNECTED, LOW)
    )
    assert len(high_out) == 7
    assert len(low_out) == 7
    assert classify_by_output(high_out + low_out) == {LOW: 7, HIGH: 7}


def test_ternary_count_stable_under_operand_relabeling():
    orders = [
        (HIGH, HIGH, LOW),
        (HIGH, LOW, HIGH),
        (LOW, HIGH, HIGH),
    ]
    counts = {
        len(enumerate_diagrams(o, with_output(UNORDERED_CONNECTED, HIGH)))
        for o in orders
    }
    assert counts == {7}


def test_linear_chains_tagged_exactly_two_per_word_family():
    options = EnumOptions(
        forbid_self_contraction=True,
        quotient_by_slot_symmetry=True,
        required_output_shape=HIGH,
    )
    diagrams = enumerate_diagrams([HIGH, LOW, HIGH], options)
    assert len(diagrams) == 16
    linear = [d for d in diagrams if d.is_linear_chain()]
    assert len(linear) == 2
    for d in linear:
        assert d.is_connected()
        assert len(d.pairs) == 3


def test_every_enumerated_diagram_is_structurally_valid():
    for shapes in ([MAT, MAT], [HIGH, HIGH, LOW]):
        for d in enumerate_diagrams(shapes, EnumOptions(forbid_self_contraction=True)):
            # revalidation raises on any structural defect
            ContractionDiagram(d.operand_shapes, d.pairs)
            used = [ref for pair in d.pairs for ref in pair]
            assert len(used) == len(set(used))
            for up, low in d.pairs:
                assert up.kind == "upper" and low.kind == "lower"


def test_enumeration_deterministic():
    a = enumerate_diagrams([HIGH, HIGH, LOW], UNORDERED_CONNECTED)
    b = enumerate_diagrams([HIGH, HIGH, LOW], UNORDERED_CONNECTED)
    assert a == b
    assert [d.sort_key() for d in a] == sorted(d.sort_key() for d in a)


def test_non_closure_gradings_never_odd():
    # exhaustive: no binary diagram over the pair space outputs grading +-1
    gradings = set()
    outputs = set()
    for pair in itertools.product([LOW, HIGH], repeat=2):
        for forbid in (False, True):
            for d in enumerate_diagrams(pair, EnumOptions(forbid_self_contraction=forbid)):
                gradings.add(grading(d.output_shape))
                outputs.add(d.output_shape)
    assert gradings == {-2, 0, 2}
    assert LOW not in outputs and HIGH not in outputs


def test_ternary_closure_grading():
    # three contractions over two (2,1) and one (1,2) always land on (2,1)
    options = EnumOptions(forbid_self_contraction=True)
    for d in enumerate_diagrams([HIGH, HIGH, LOW], options):
        if len(d.pairs) == 3:
            assert d.output_shape == HIGH
            assert grading(d.output_shape) == 1


def test_count_primary_operations():
    assert count_primary_operations(5, 3) == 10
    assert count_primary_operations(7, 4) == 35
    assert count_primary_operations(4, 4) == 1
    with pytest.raises(ValueError):
        count_primary_operations(3, 4)
    with pytest.raises(ValueError):
        count_primary_operations(-1, 0)


def test_linear_family_rows():
    assert linear_family(1) == ([TensorShape(1, 1)], 2)
    assert linear_family(2) == ([TensorShape(2, 1), TensorShape(1, 2)], 3)
    assert linear_family(3) == (
        [TensorShape(3, 1), TensorShape(1, 2), TensorShape(2, 3)],
        4,
    )
    with pytest.raises(ValueError):
        linear_family(0)


def test_diagram_json_roundtrip():
    diagrams = enumerate_diagrams([MAT, MAT])
    for d in diagrams:
        assert ContractionDiagram.from_json(d.to_json()) == d


def test_diagram_output_shape_examples():
    d = enumerate_diagrams([MAT, MAT])
    assert sum(1 for x in d if len(x.pairs) == 0) == 1
    assert sum(1 for x in d if len(x.pairs) == 1) == 4
    assert sum(1 for x in d if len(x.pairs) == 2) == 2


def test_empty_shape_list_rejected():
    with pytest.raises(ValueError):
        enumerate_diagrams([])
