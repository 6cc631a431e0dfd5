import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cosymconf.errors import BoundsError, InversionError, NumericError, ShapeError, VarianceError
from cosymconf.tensor import (LOWER, UPPER, ComponentTensor, MetricPair, add, contract,
                              lower_index, product, raise_index, relative_residual, scalar,
                              scale, symmetry_defect, tensor)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def spd(n, rng):
    A = rng.normal(size=(n, n))
    return A @ A.T + n * np.eye(n)


def test_components_reshaped_and_frozen():
    t = ComponentTensor(2, "ul", [1, 2, 3, 4])
    assert t.components.shape == (2, 2)
    assert t.signature == (UPPER, LOWER)
    with pytest.raises(ValueError):
        t.components[0, 0] = 5.0


def test_wrong_size_and_nonfinite():
    with pytest.raises(ShapeError):
        ComponentTensor(3, "ll", np.zeros(8))
    with pytest.raises(NumericError):
        ComponentTensor(2, "u", [1.0, np.nan])


def test_scalar_item():
    assert scalar(2.5, 4).item() == 2.5
    with pytest.raises(ShapeError):
        tensor(np.eye(2), "ll").item()


def test_contract_delta_gives_dimension():
    d = tensor(np.eye(5), (UPPER, LOWER))
    assert contract(d, 0, 1).item() == 5.0


def test_contract_needs_mixed_variance():
    t = tensor(np.eye(3), "ll")
    with pytest.raises(VarianceError):
        contract(t, 0, 1)
    with pytest.raises(BoundsError):
        contract(tensor(np.eye(3), "ul"), 0, 2)


def test_raise_wrong_variance(rng):
    m = MetricPair.from_array(spd(3, rng))
    v = tensor(np.ones(3), "u")
    with pytest.raises(VarianceError):
        raise_index(v, 0, m)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (3, 3), elements=finite), st.integers(0, 2**31))
def test_raise_lower_roundtrip(data, seed):
    g = spd(3, np.random.default_rng(seed))
    m = MetricPair.from_array(g)
    t = tensor(data, "ll")
    back = lower_index(raise_index(t, 1, m), 1, m)
    assert relative_residual(back.components, data) < 1e-12
    assert raise_index(t, 0, m).signature == (UPPER, LOWER)


def test_raise_matches_einsum(rng):
    g = spd(4, rng)
    m = MetricPair.from_array(g)
    T = rng.normal(size=(4, 4, 4))
    got = raise_index(tensor(T, "lll"), 1, m).components
    want = np.einsum("ajc,jb->abc", T, np.linalg.inv(g))
    assert np.allclose(got, want, atol=1e-13)


def test_metric_pair_rejects_bad_metrics():
    with pytest.raises(InversionError):
        MetricPair.from_array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(InversionError):
        MetricPair.from_array([[1.0, 0.0], [0.0, -1.0]])


def test_product_add_scale():
    a = tensor([1.0, 2.0], "u")
    b = tensor([3.0, 4.0], "l")
    p = product(a, b)
    assert p.signature == (UPPER, LOWER)
    assert np.array_equal(p.components, [[3, 4], [6, 8]])
    assert np.array_equal(add(a, scale(a, -1)).components, [0, 0])
    with pytest.raises(ShapeError):
        add(a, b)


def test_symmetry_defect():
    s = tensor([[1.0, 2.0], [2.0, 3.0]], "ll")
    k = tensor([[0.0, 2.0], [-2.0, 0.0]], "ll")
    assert symmetry_defect(s, 0, 1) == 0.0
    assert symmetry_defect(k, 0, 1, "minus") == 0.0
    assert symmetry_defect(k, 0, 1) == 4.0
    with pytest.raises(VarianceError):
        symmetry_defect(tensor(np.eye(2), "ul"), 0, 1)


def test_relative_residual_floor():
    assert relative_residual([1e-16], [0.0]) == pytest.approx(1e-16)
    assert relative_residual([2.0], [1.0]) == pytest.approx(0.5)
