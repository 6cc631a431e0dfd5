"""Component tensors at a single chart point.

A :class:`ComponentTensor` is a dense ``dim**rank`` array together with the
variance of each slot (``"u"`` upper, ``"l"`` lower). The geometry modules
work on bare arrays internally and wrap results at their public boundary.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, InversionError, NumericError, ShapeError, VarianceError

UPPER = "u"
LOWER = "l"

ABS_FLOOR = 1e-14


def _norm_signature(signature):
    sig = tuple(signature)
    for s in sig:
        if s not in (UPPER, LOWER):
            raise VarianceError(f"slot variance must be 'u' or 'l', got {s!r}")
    return sig


@dataclass(frozen=True, eq=False)
class ComponentTensor:
    dim: int
    signature: tuple
    components: np.ndarray

    def __post_init__(self):
        sig = _norm_signature(self.signature)
        if self.dim < 1:
            raise ShapeError("dim must be positive")
        arr = np.array(self.components, dtype=np.float64)
        expected = (self.dim,) * len(sig)
        if arr.size != self.dim ** len(sig):
            raise ShapeError(f"expected {self.dim ** len(sig)} components, got {arr.size}")
        arr = arr.reshape(expected)
        if not np.all(np.isfinite(arr)):
            raise NumericError("non-finite tensor component")
        arr.setflags(write=False)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "components", arr)

    @property
    def rank(self):
        return len(self.signature)

    @property
    def flat(self):
        """Row-major component list."""
        return self.components.ravel()

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)

    def item(self):
        if self.rank != 0:
            raise ShapeError("item() needs a rank-0 tensor")
        return float(self.components)

    def max_abs(self):
        return float(np.max(np.abs(self.components))) if self.components.size else 0.0

    def __repr__(self):
        return f"ComponentTensor(dim={self.dim}, signature={''.join(self.signature) or '-'})"


def tensor(components, signature=()):
    """Build a ComponentTensor, inferring ``dim`` from the array shape."""
    arr = np.asarray(components, dtype=np.float64)
    dim = arr.shape[0] if arr.ndim else 1
    return ComponentTensor(dim, tuple(signature), arr)


def scalar(value, dim):
    return ComponentTensor(dim, (), np.asarray(float(value)))


@dataclass(frozen=True, eq=False)
class MetricPair:
    g: ComponentTensor
    g_inv: ComponentTensor

    @classmethod
    def from_array(cls, g):
        g = np.asarray(g, dtype=np.float64)
        n = g.shape[0]
        scale = max(float(np.max(np.abs(g))), ABS_FLOOR)
        if np.max(np.abs(g - g.T)) > 1e-12 * scale:
            raise InversionError("metric is not symmetric")
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise InversionError("metric is not positive definite") from None
        g_inv = np.linalg.inv(g)
        if np.max(np.abs(g @ g_inv - np.eye(n))) > 1e-10:
            raise InversionError("metric inversion lost accuracy")
        return cls(ComponentTensor(n, (LOWER, LOWER), g),
                   ComponentTensor(n, (UPPER, UPPER), g_inv))


def _check_slot(t, slot):
    if not 0 <= slot < t.rank:
        raise BoundsError(f"slot {slot} out of range for rank {t.rank}")


def contract(t, slot_a, slot_b):
    """Trace over one upper and one lower slot."""
    _check_slot(t, slot_a)
    _check_slot(t, slot_b)
    if slot_a == slot_b:
        raise VarianceError("cannot contract a slot with itself")
    if t.signature[slot_a] == t.signature[slot_b]:
        raise VarianceError("contraction needs one upper and one lower slot")
    comps = np.trace(t.components, axis1=slot_a, axis2=slot_b)
    sig = tuple(s for k, s in enumerate(t.signature) if k not in (slot_a, slot_b))
    return ComponentTensor(t.dim, sig, comps)


def _convert(t, slot, mat, want_from, want_to):
    _check_slot(t, slot)
    if t.signature[slot] != want_from:
        raise VarianceError(f"slot {slot} is {t.signature[slot]!r}, expected {want_from!r}")
    moved = np.tensordot(t.components, mat, axes=([slot], [0]))
    comps = np.moveaxis(moved, -1, slot)
    sig = list(t.signature)
    sig[slot] = want_to
    return ComponentTensor(t.dim, tuple(sig), comps)


def raise_index(t, slot, metric):
    return _convert(t, slot, metric.g_inv.components, LOWER, UPPER)


def lower_index(t, slot, metric):
    return _convert(t, slot, metric.g.components, UPPER, LOWER)


def product(a, b):
    if a.dim != b.dim:
        raise ShapeError("outer product of tensors with different dim")
    return ComponentTensor(a.dim, a.signature + b.signature,
                           np.multiply.outer(a.components, b.components))


def add(a, b):
    if a.dim != b.dim or a.signature != b.signature:
        raise ShapeError("add needs identical dim and signature")
    return ComponentTensor(a.dim, a.signature, a.components + b.components)


def scale(a, c):
    return ComponentTensor(a.dim, a.signature, a.components * float(c))


def symmetry_defect(t, slot_a, slot_b, parity="plus"):
    """max |T -/+ T with slots a, b swapped|; zero iff (skew-)symmetric."""
    _check_slot(t, slot_a)
    _check_slot(t, slot_b)
    if t.signature[slot_a] != t.signature[slot_b]:
        raise VarianceError("symmetry defect needs slots of equal variance")
    if parity not in ("plus", "minus"):
        raise ValueError("parity must be 'plus' or 'minus'")
    swapped = np.swapaxes(t.components, slot_a, slot_b)
    diff = t.components - swapped if parity == "plus" else t.components + swapped
    return float(np.max(np.abs(diff))) if diff.size else 0.0


def max_abs(x):
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def relative_residual(a, b):
    """max |a - b| scaled by the larger operand magnitude.

    Falls back to the absolute deviation when both operands are below
    ``ABS_FLOOR``.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    diff = max_abs(a - b)
    ref = max(max_abs(a), max_abs(b))
    return diff if ref < ABS_FLOOR else diff / ref
