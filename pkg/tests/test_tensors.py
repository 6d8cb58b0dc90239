import itertools

import numpy as np
import pytest

from tidlab.diagrams import LOWER, UPPER, ContractionDiagram, EnumOptions, SlotRef, enumerate_diagrams
from tidlab.tensors import (
    DenseTensor,
    TensorShape,
    apply_diagram,
    contract,
    grading,
    kronecker_delta,
    random_tensor,
    tensor_product,
)

MAT = TensorShape(1, 1)

A22 = DenseTensor.from_matrix([[1, 2], [3, 4]])
B22 = DenseTensor.from_matrix([[0, 1], [1, 0]])

MATMUL = ContractionDiagram(
    (MAT, MAT), frozenset({(SlotRef(1, UPPER, 0), SlotRef(0, LOWER, 0))})
)
EMPTY2 = ContractionDiagram((MAT, MAT), frozenset())
FULL_CROSS = ContractionDiagram(
    (MAT, MAT),
    frozenset(
        {
            (SlotRef(1, UPPER, 0), SlotRef(0, LOWER, 0)),
            (SlotRef(0, UPPER, 0), SlotRef(1, LOWER, 0)),
        }
    ),
)


def test_grading_signs():
    assert grading(TensorShape(1, 0)) == 1
    assert grading(TensorShape(0, 1)) == -1
    assert grading(TensorShape(1, 1)) == 0
    assert grading(TensorShape(2, 5)) == -3


def test_shape_validation():
    with pytest.raises(ValueError):
        TensorShape(-1, 0)


def test_tensor_product_shapes():
    out = tensor_product(A22, B22)
    assert out.shape == TensorShape(2, 2)
    assert out.dim == 2


def test_tensor_product_with_unit_scalar():
    one = DenseTensor.from_entries(TensorShape(0, 0), 2, [1.0])
    out = tensor_product(A22, one)
    assert out.shape == A22.shape
    assert np.array_equal(out.data, A22.data)


def test_tensor_product_of_identities_is_double_delta():
    d = kronecker_delta(2)
    out = tensor_product(d, d)
    # slot order (i, j, k, l) = (a upper, b upper, a lower, b lower)
    for i, j, k, l in itertools.product(range(2), repeat=4):
        assert out.data[i, j, k, l] == (1 if (i == k and j == l) else 0)


def test_tensor_product_associative_in_canonical_layout():
    a = random_tensor(TensorShape(1, 1), 2, 5)
    b = random_tensor(TensorShape(2, 0), 2, 6)
    c = random_tensor(TensorShape(0, 1), 2, 7)
    left = tensor_product(tensor_product(a, b), c)
    right = tensor_product(a, tensor_product(b, c))
    assert np.allclose(left.data, right.data)


def test_contract_identity_gives_dimension():
    assert contract(kronecker_delta(3), 0, 0).scalar() == 3


def test_contract_matrix_gives_trace():
    assert contract(A22, 0, 0).scalar() == 5


def test_contract_slot_out_of_range():
    with pytest.raises(ValueError):
        contract(A22, 1, 0)
    with pytest.raises(ValueError):
        contract(A22, 0, 1)


def test_apply_diagram_matmul_hand_value():
    out = apply_diagram(MATMUL, [A22, B22])
    assert np.array_equal(out.data, np.array([[2, 1], [4, 3]], dtype=complex))


def test_apply_diagram_matmul_matches_numpy():
    for n in range(2, 6):
        a = random_tensor(MAT, n, 100 + n)
        b = random_tensor(MAT, n, 200 + n)
        out = apply_diagram(MATMUL, [a, b])
        assert np.allclose(out.data, a.data @ b.data)


def test_apply_diagram_empty_matching_is_tensor_product():
    out = apply_diagram(EMPTY2, [A22, B22])
    assert np.array_equal(out.data, tensor_product(A22, B22).data)


def test_apply_diagram_full_cross_is_trace_of_product():
    out = apply_diagram(FULL_CROSS, [A22, B22])
    assert out.shape == TensorShape(0, 0)
    assert out.scalar() == pytest.approx(5.0)  # Tr(AB) for the two fixed matrices


def test_apply_diagram_shape_and_dim_errors():
    with pytest.raises(ValueError):
        apply_diagram(MATMUL, [A22, random_tensor(TensorShape(2, 1), 2, 0)])
    with pytest.raises(ValueError):
        apply_diagram(MATMUL, [A22, random_tensor(MAT, 3, 0)])


def test_grading_additive_over_all_small_diagrams():
    shapes = (TensorShape(2, 1), TensorShape(1, 2))
    total = sum(grading(s) for s in shapes)
    for d in enumerate_diagrams(shapes, EnumOptions()):
        ops = [random_tensor(s, 2, 11 + i) for i, s in enumerate(shapes)]
        out = apply_diagram(d, ops)
        assert grading(out.shape) == total


def test_apply_diagram_linear_in_each_operand():
    rng = np.random.default_rng(3)
    lam = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    mu = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    a, a2, b = (random_tensor(MAT, 3, s) for s in (1, 2, 3))
    left = apply_diagram(MATMUL, [lam * a + mu * a2, b])
    right = lam * apply_diagram(MATMUL, [a, b]) + mu * apply_diagram(MATMUL, [a2, b])
    assert left.allclose(right, rtol=1e-12)
    left = apply_diagram(MATMUL, [b, lam * a + mu * a2])
    right = lam * apply_diagram(MATMUL, [b, a]) + mu * apply_diagram(MATMUL, [b, a2])
    assert left.allclose(right, rtol=1e-12)


def test_random_tensor_deterministic():
    t1 = random_tensor(TensorShape(1, 1), 3, 42)
    t2 = random_tensor(TensorShape(1, 1), 3, 42)
    assert t1 == t2


def test_random_tensor_entry_count():
    t = random_tensor(TensorShape(1, 1), 3, 0)
    assert t.data.size == 9


def test_random_tensor_seeds_distinct():
    seen = {random_tensor(MAT, 2, seed).data.tobytes() for seed in range(100)}
    assert len(seen) == 100


def test_random_tensor_entries_in_range():
    t = random_tensor(TensorShape(2, 1), 4, 9)
    assert np.all(np.abs(t.data.real) <= 1.0)
    assert np.all(np.abs(t.data.imag) <= 1.0)


def test_json_roundtrip():
    t = random_tensor(TensorShape(2, 1), 2, 17)
    back = DenseTensor.from_json(t.to_json())
    assert back == t


def test_json_entry_order_is_lexicographic():
    t = DenseTensor.from_entries(MAT, 2, [1, 2, 3, 4])
    assert t.to_json()["entries"] == [[1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [4.0, 0.0]]
    assert t.data[0, 1] == 2  # row-major: entry (0,1) is the second flat entry


def test_tensor_immutable():
    t = random_tensor(MAT, 2, 1)
    with pytest.raises((ValueError, AttributeError)):
        t.data[0, 0] = 99.0
    with pytest.raises(AttributeError):
        t.dim = 5


def test_from_entries_length_check():
    with pytest.raises(ValueError):
        DenseTensor.from_entries(MAT, 2, [1, 2, 3])
