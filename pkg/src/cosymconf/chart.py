"""Fields on a coordinate chart and deterministic point sampling."""

from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SamplingExhaustedError, ShapeError
from .jet import Const, as_expr, evaluate_jets
from .tensor import LOWER, ComponentTensor

GENERATOR = "numpy.random.PCG64"
MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class ChartPoint:
    coords: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in np.ravel(self.coords))
        if not all(np.isfinite(c)):
            raise DomainError("chart point has non-finite coordinates")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self):
        return len(self.coords)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


def as_point_array(x):
    if isinstance(x, ChartPoint):
        return np.asarray(x.coords, dtype=np.float64)
    arr = np.asarray(x, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise DomainError("chart point has non-finite coordinates")
    return arr


class ChartField:
    """Tensor-valued field whose components are :mod:`cosymconf.jet` expressions.

    ``excluded`` is an optional predicate on coordinate arrays marking the
    chart's singular set; evaluating there raises :class:`DomainError`.
    """

    _CACHE_SIZE = 8

    def __init__(self, components, signature=(), dim=None, excluded=None, name=""):
        arr = np.empty(np.shape(components), dtype=object)
        flat_in = np.asarray(components, dtype=object).ravel()
        flat = arr.ravel()
        for k, c in enumerate(flat_in):
            flat[k] = as_expr(c)
        self.signature = tuple(signature)
        if arr.ndim != len(self.signature):
            raise ShapeError(f"components have rank {arr.ndim}, signature has {len(self.signature)}")
        if dim is None:
            if arr.ndim == 0:
                raise ShapeError("scalar fields need an explicit dim")
            dim = arr.shape[0]
        if any(s != dim for s in arr.shape):
            raise ShapeError("every slot must have length dim")
        self.dim = int(dim)
        self.excluded = excluded
        self.name = name
        self._exprs = flat
        self._shape = arr.shape
        self._live = [k for k, e in enumerate(flat) if not isinstance(e, Const)]
        self._consts = np.array([e.value if isinstance(e, Const) else 0.0 for e in flat])
        self._cache = OrderedDict()

    @property
    def components(self):
        return self._exprs.reshape(self._shape)

    @property
    def rank(self):
        return len(self.signature)

    def in_domain(self, x):
        x = as_point_array(x)
        return x.shape[0] == self.dim and not (self.excluded is not None and self.excluded(x))

    def jets(self, x):
        """Components, first partials and second partials at ``x``.

        Derivative slots are appended after the component slots.
        """
        x = as_point_array(x)
        if x.shape[0] != self.dim:
            raise ShapeError(f"point has dimension {x.shape[0]}, field expects {self.dim}")
        key = x.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.excluded is not None and self.excluded(x):
            raise DomainError(f"point {tuple(x)} lies in the excluded set of {self.name or 'field'}")
        n = self.dim
        N = len(self._exprs)
        val = self._consts.copy()
        d = np.zeros((N, n))
        dd = np.zeros((N, n, n))
        if self._live:
            v, g, H = evaluate_jets([self._exprs[k] for k in self._live], x)
            val[self._live] = v
            d[self._live] = g
            dd[self._live] = H
        out = (val.reshape(self._shape), d.reshape(self._shape + (n,)),
               dd.reshape(self._shape + (n, n)))
        for a in out:
            a.setflags(write=False)
        self._cache[key] = out
        if len(self._cache) > self._CACHE_SIZE:
            self._cache.popitem(last=False)
        return out

    def __repr__(self):
        return f"ChartField({self.name or '?'}, dim={self.dim}, signature={''.join(self.signature) or '-'})"


def scalar_field(expr, dim, excluded=None, name=""):
    return ChartField(np.array(as_expr(expr), dtype=object), (), dim=dim, excluded=excluded, name=name)


def constant_field(values, signature, excluded=None, name=""):
    values = np.asarray(values, dtype=np.float64)
    comps = np.empty(values.shape, dtype=object)
    for idx in np.ndindex(values.shape):
        comps[idx] = Const(values[idx])
    return ChartField(comps, signature, excluded=excluded, name=name)


def evaluate(f, x):
    val, _, _ = f.jets(x)
    return ComponentTensor(f.dim, f.signature, val)


def partial(f, x):
    """First partials; the derivative slot is appended last."""
    _, d, _ = f.jets(x)
    return ComponentTensor(f.dim, f.signature + (LOWER,), d)


def partial2(f, x):
    _, _, dd = f.jets(x)
    return ComponentTensor(f.dim, f.signature + (LOWER, LOWER), dd)


@dataclass(frozen=True)
class SampleSpec:
    box: tuple
    count: int
    seed: int = 0
    excluded: object = field(default=None, compare=False)

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        if not box:
            raise ValueError("sample box needs at least one coordinate")
        for lo, hi in box:
            if not hi > lo:
                raise ValueError(f"empty interval [{lo}, {hi}] in sample box")
        object.__setattr__(self, "box", box)


def sample(spec):
    """Uniform points in ``spec.box`` outside ``spec.excluded``.

    Uses ``numpy.random.PCG64`` seeded with ``spec.seed``; identical specs give
    identical point lists.
    """
    if spec.count < 1:
        raise ValueError("sample count must be at least 1")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    lo = np.array([b[0] for b in spec.box])
    hi = np.array([b[1] for b in spec.box])
    points = []
    rejections = 0
    while len(points) < spec.count:
        x = lo + (hi - lo) * rng.random(lo.shape[0])
        if spec.excluded is not None and spec.excluded(x):
            rejections += 1
            if rejections >= MAX_REJECTIONS:
                raise SamplingExhaustedError(
                    f"{MAX_REJECTIONS} rejections while sampling {spec.count} points")
            continue
        points.append(ChartPoint(x))
    return points
