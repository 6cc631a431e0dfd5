"""Jets against central finite differences and hand-derived closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosymconf import jet as J
from cosymconf.errors import DomainError, NumericError

x, y, z = J.coords(3)

EXPRESSIONS = {
    "poly": x * x * y - 3.0 * z + 0.5 * y ** 3,
    "ratio": (x + 2.0) / (1.0 + y * y + z * z),
    "trig": J.sin(x * y) + J.cos(z) * x,
    "gauss": J.exp(-(x * x + y * y)),
    "sqrt": (4.0 + x * x + y * z * 0.1) ** 0.5,
    "nested": J.exp(J.sin(x) * 0.3) / (2.0 + J.cos(y + z)),
    "neg_power": (2.0 + x * x) ** -2,
}

coord = st.floats(-1.0, 1.0, allow_nan=False)


def _value(e, p):
    return J.evaluate_jets([e], p)[0][0]


def _fd_grad(f, p, h=1e-5):
    g = np.empty(p.size)
    for k in range(p.size):
        e = np.zeros(p.size)
        e[k] = h
        g[k] = (f(p + e) - f(p - e)) / (2 * h)
    return g


@pytest.mark.parametrize("name", sorted(EXPRESSIONS))
@settings(max_examples=15, deadline=None)
@given(a=coord, b=coord, c=coord)
def test_gradient_and_hessian_match_finite_differences(name, a, b, c):
    e = EXPRESSIONS[name]
    p = np.array([a, b, c])
    v, g, H = (arr[0] for arr in J.evaluate_jets([e], p))
    assert np.allclose(g, _fd_grad(lambda q: _value(e, q), p), rtol=1e-6, atol=1e-7)
    fd_H = np.array([_fd_grad(lambda q: J.evaluate_jets([e], q)[1][0][k], p) for k in range(3)])
    assert np.allclose(H, fd_H, rtol=1e-6, atol=1e-6)
    assert np.allclose(H, H.T, atol=1e-12)


def test_closed_form_gaussian():
    p = np.array([0.3, -0.4, 0.0])
    v, g, H = (arr[0] for arr in J.evaluate_jets([EXPRESSIONS["gauss"]], p))
    r2 = 0.25
    assert v == pytest.approx(math.exp(-r2))
    assert np.allclose(g[:2], -2 * p[:2] * v)
    assert H[0, 1] == pytest.approx(4 * 0.3 * -0.4 * v)


def test_shared_subexpression_evaluated_consistently():
    s = x * y
    e = s + s * s
    v, g, _ = J.evaluate_jets([e], np.array([2.0, 3.0, 0.0]))
    assert v[0] == 6.0 + 36.0
    assert np.allclose(g[0], [3 + 2 * 6 * 3, 2 + 2 * 6 * 2, 0])


def test_constants_and_operator_overloads():
    e = 2.0 - x
    assert _value(e, np.array([0.5, 0, 0])) == 1.5
    assert _value(1.0 / (x + 1.0), np.array([1.0, 0, 0])) == 0.5
    assert _value(x ** 0, np.array([7.0, 0, 0])) == 1.0


def test_domain_errors():
    with pytest.raises(DomainError):
        J.evaluate_jets([1.0 / x], np.zeros(3))
    with pytest.raises(DomainError):
        J.evaluate_jets([x ** 0.5], np.array([-1.0, 0, 0]))


def test_overflow_is_numeric_error():
    with pytest.raises(NumericError):
        J.evaluate_jets([J.exp(x * 1000.0)], np.array([1.0, 0, 0]))


def test_tensor_jet_product_rule():
    rng = np.random.default_rng(3)
    A = J.TensorJet(rng.normal(size=(3, 3)), rng.normal(size=(3, 3, 2)))
    v = J.TensorJet(rng.normal(size=3), rng.normal(size=(3, 2)))
    out = J.tj_einsum("ab,b->a", A, v)
    want = np.einsum("abk,b->ak", A.der, v.val) + np.einsum("ab,bk->ak", A.val, v.der)
    assert np.allclose(out.der, want)


def test_tensor_jet_inverse_against_finite_difference():
    rng = np.random.default_rng(4)
    M0 = rng.normal(size=(3, 3)) + 3 * np.eye(3)
    dM = rng.normal(size=(3, 3, 1))
    inv = J.tj_inverse(J.TensorJet(M0, dM))
    h = 1e-6
    fd = (np.linalg.inv(M0 + h * dM[..., 0]) - np.linalg.inv(M0 - h * dM[..., 0])) / (2 * h)
    assert np.allclose(inv.der[..., 0], fd, atol=1e-7)
