"""Expressions over chart coordinates and second-order Taylor evaluation.

Fields are built from a closed primitive set (constants, coordinates, +, *,
constant powers, exp, sin, cos, division). Evaluating an expression at a
point propagates ``(value, gradient, hessian)`` through every node, so first
and second partials are exact up to rounding.

:class:`TensorJet` carries a tensor value with its first partials and obeys
the product rule under :func:`tj_einsum`. The geometry modules use it to get
exact partials of derived quantities (connection coefficients, q_i, ...)
from the jets of the underlying fields.
"""

import math

import numpy as np

from .errors import DomainError, NumericError

_DIV_FLOOR = 1e-300


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Add(self, Neg(as_expr(other)))

    def __rsub__(self, other):
        return Add(as_expr(other), Neg(self))

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        if isinstance(exponent, Expr):
            raise TypeError("only constant exponents are supported")
        return Pow(self, float(exponent))


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = float(value)

    def __repr__(self):
        return f"Const({self.value!r})"


class Coord(Expr):
    __slots__ = ("index",)

    def __init__(self, index):
        self.index = int(index)

    def __repr__(self):
        return f"x{self.index}"


class Add(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b


class Mul(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b


class Div(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b


class Neg(Expr):
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a


class Pow(Expr):
    __slots__ = ("a", "exponent")

    def __init__(self, a, exponent):
        self.a, self.exponent = a, float(exponent)


class Exp(Expr):
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a


class Sin(Expr):
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a


class Cos(Expr):
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a


def as_expr(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, np.integer, np.floating)):
        return Const(x)
    raise TypeError(f"cannot use {type(x).__name__} in a field expression")


def exp(x):
    return Exp(as_expr(x))


def sin(x):
    return Sin(as_expr(x))


def cos(x):
    return Cos(as_expr(x))


def coords(n):
    return [Coord(i) for i in range(n)]


def is_zero_const(e):
    return isinstance(e, Const) and e.value == 0.0


# --- second-order jets --------------------------------------------------

def _unary(a, f0, f1, f2):
    v, g, H = a
    return f0, f1 * g, f1 * H + f2 * np.outer(g, g)


def _jet(node, x, memo):
    key = id(node)
    hit = memo.get(key)
    if hit is not None:
        return hit
    n = x.shape[0]
    if isinstance(node, Const):
        out = (node.value, np.zeros(n), np.zeros((n, n)))
    elif isinstance(node, Coord):
        g = np.zeros(n)
        g[node.index] = 1.0
        out = (float(x[node.index]), g, np.zeros((n, n)))
    elif isinstance(node, Add):
        av, ag, aH = _jet(node.a, x, memo)
        bv, bg, bH = _jet(node.b, x, memo)
        out = (av + bv, ag + bg, aH + bH)
    elif isinstance(node, Neg):
        av, ag, aH = _jet(node.a, x, memo)
        out = (-av, -ag, -aH)
    elif isinstance(node, Mul):
        out = _jet_mul(_jet(node.a, x, memo), _jet(node.b, x, memo))
    elif isinstance(node, Div):
        b = _jet(node.b, x, memo)
        bv = b[0]
        if not abs(bv) > _DIV_FLOOR:
            raise DomainError("division by a vanishing denominator")
        recip = _unary(b, 1.0 / bv, -1.0 / bv ** 2, 2.0 / bv ** 3)
        out = _jet_mul(_jet(node.a, x, memo), recip)
    elif isinstance(node, Pow):
        a = _jet(node.a, x, memo)
        out = _jet_pow(a, node.exponent)
    elif isinstance(node, Exp):
        a = _jet(node.a, x, memo)
        e = math.exp(a[0])
        out = _unary(a, e, e, e)
    elif isinstance(node, Sin):
        a = _jet(node.a, x, memo)
        s, c = math.sin(a[0]), math.cos(a[0])
        out = _unary(a, s, c, -s)
    elif isinstance(node, Cos):
        a = _jet(node.a, x, memo)
        s, c = math.sin(a[0]), math.cos(a[0])
        out = _unary(a, c, -s, -c)
    else:
        raise TypeError(f"unknown expression node {type(node).__name__}")
    memo[key] = out
    return out


def _jet_mul(a, b):
    av, ag, aH = a
    bv, bg, bH = b
    cross = np.outer(ag, bg)
    return av * bv, av * bg + bv * ag, av * bH + bv * aH + (cross + cross.T)


def _jet_pow(a, c):
    v = a[0]
    if c == 0.0:
        n = a[1].shape[0]
        return 1.0, np.zeros(n), np.zeros((n, n))
    if c == 1.0:
        return a
    integer = c == int(c)
    if not integer and not v > 0.0:
        raise DomainError("non-integer power of a non-positive base")
    if c < 0 and not abs(v) > _DIV_FLOOR:
        raise DomainError("negative power of a vanishing base")
    f0 = v ** c
    f1 = c * v ** (c - 1.0)
    f2 = c * (c - 1.0) * v ** (c - 2.0)
    return _unary(a, f0, f1, f2)


def evaluate_jets(exprs, x):
    """Value, gradient and hessian of each expression in ``exprs`` at ``x``.

    Returns arrays of shape ``(N,)``, ``(N, n)``, ``(N, n, n)``. Shared
    subexpressions are evaluated once.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    memo = {}
    N = len(exprs)
    vals = np.empty(N)
    grads = np.empty((N, n))
    hess = np.empty((N, n, n))
    try:
        for k, e in enumerate(exprs):
            v, g, H = _jet(e, x, memo)
            vals[k], grads[k], hess[k] = v, g, H
    except (OverflowError, ZeroDivisionError) as exc:
        raise NumericError(str(exc)) from exc
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(grads)) and np.all(np.isfinite(hess))):
        raise NumericError("non-finite value in field evaluation")
    return vals, grads, hess


# --- first-order tensor jets --------------------------------------------

class TensorJet:
    """Tensor value ``val`` and its partials ``der`` (derivative axis last)."""

    __slots__ = ("val", "der")

    def __init__(self, val, der):
        self.val = np.asarray(val, dtype=np.float64)
        self.der = np.asarray(der, dtype=np.float64)

    @classmethod
    def constant(cls, val, n):
        val = np.asarray(val, dtype=np.float64)
        return cls(val, np.zeros(val.shape + (n,)))

    @property
    def n(self):
        return self.der.shape[-1]

    def __add__(self, other):
        return TensorJet(self.val + other.val, self.der + other.der)

    def __sub__(self, other):
        return TensorJet(self.val - other.val, self.der - other.der)

    def __neg__(self):
        return TensorJet(-self.val, -self.der)

    def __mul__(self, c):
        return TensorJet(self.val * c, self.der * c)

    __rmul__ = __mul__

    def transpose(self, axes):
        axes = tuple(axes)
        return TensorJet(np.transpose(self.val, axes),
                         np.transpose(self.der, axes + (len(axes),)))


def tj_einsum(spec, *jets):
    """``np.einsum`` over TensorJets with the product rule applied."""
    lhs, out = spec.split("->")
    terms = lhs.split(",")
    used = set(spec)
    d = next(c for c in "zyxwvutsrqponmlkjihgfedcba" if c not in used)
    vals = [j.val for j in jets]
    val = np.einsum(spec, *vals)
    der = None
    for k, j in enumerate(jets):
        if not np.any(j.der):
            continue
        sub = ",".join(t + d if idx == k else t for idx, t in enumerate(terms))
        ops = [jj.der if idx == k else jj.val for idx, jj in enumerate(jets)]
        piece = np.einsum(f"{sub}->{out}{d}", *ops)
        der = piece if der is None else der + piece
    if der is None:
        der = np.zeros(val.shape + (jets[0].n,))
    return TensorJet(val, der)


def tj_inverse(m):
    """Matrix inverse with d(M^-1) = -M^-1 dM M^-1."""
    inv = np.linalg.inv(m.val)
    der = -np.einsum("ab,bcd,ce->aed", inv, m.der, inv)
    return TensorJet(inv, der)


def tj_exp(s):
    e = math.exp(float(s.val))
    return TensorJet(e, e * s.der)
