"""Built-in manifolds, structures and scalar functions p.

Entry ids:

* ``flat-cosym-m<m>``: R^{2m+1} with the standard cosymplectic structure.
* ``s2x...s2xr-<radii>``: (S^2(r_1) x ... x S^2(r_m)) x R in stereographic
  charts, one digit per radius (``s2xs2xs2xr-123``).
* ``conf-flat-<n>-<gauss|linear|quadratic|zero>``: e^{2p} delta on R^n.
* ``round-s2-r<r>``: the round 2-sphere in the polar-angle chart.
* ``twisted-r3``: an almost contact metric structure on R^3 that is not normal.
* ``rescaled-flat-m1``: flat-cosym-m1 conformally rescaled by a Gaussian;
  almost contact metric but not cosymplectic.

Coordinates of the cosymplectic entries are ordered (x^1..x^m, y^1..y^m, z) so
that phi(d/dx^a) = d/dy^a, phi(d/dy^a) = -d/dx^a, phi(d/dz) = 0 in every
entry, and the last coordinate is the Reeb coordinate.
"""

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import jet as J
from .chart import ChartField, SampleSpec, constant_field, sample, scalar_field
from .contact import AlmostContactMetricStructure
from .errors import DimensionError, LookupFailure
from .tensor import LOWER, UPPER

STEREO_LIMIT = 1e6

ADMISSIBLE_P = ("zero", "linear-horizontal", "quadratic-horizontal", "gaussian-horizontal")
P_IDS = ADMISSIBLE_P + ("reeb-linear",)

COSYMPLECTIC_IDS = ("flat-cosym-m1", "flat-cosym-m3", "s2xr-1", "s2xs2xs2xr-111", "s2xs2xs2xr-123")
CATALOG_IDS = (
    "flat-cosym-m1", "flat-cosym-m2", "flat-cosym-m3", "flat-cosym-m4",
    "s2xr-1", "s2xs2xs2xr-111", "s2xs2xs2xr-123",
    "conf-flat-4-gauss", "conf-flat-7-gauss", "conf-flat-7-linear", "conf-flat-7-zero",
    "round-s2-r1", "round-s2-r2",
    "twisted-r3", "rescaled-flat-m1",
)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    id: str
    dim: int
    metric: ChartField
    box: tuple
    description: str
    phi: ChartField = None
    xi: ChartField = None
    eta: ChartField = None
    m: int = 0
    excluded: object = None
    cosymplectic: bool = False
    flat: bool = False
    normal: bool = False
    conformally_flat: bool = False
    reeb_index: int = None
    scalar_curvature: float = None
    conformal_base: ChartField = None
    conformal_p: ChartField = None
    conformal_p_id: str = ""

    @property
    def metric_only(self):
        return self.phi is None

    @property
    def structure(self):
        if self.metric_only:
            raise LookupFailure(f"{self.id} is metric-only and carries no almost contact structure")
        return AlmostContactMetricStructure(self.phi, self.xi, self.eta, self.metric, self.m, self.id)

    def sample(self, count, seed):
        return sample(SampleSpec(self.box, count, seed, self.excluded))

    def flags(self):
        out = []
        if self.metric_only:
            out.append("metric-only")
        if self.cosymplectic:
            out.append("cosymplectic")
        if self.normal and not self.cosymplectic:
            out.append("normal")
        if self.flat:
            out.append("flat")
        if self.conformally_flat:
            out.append("conformally-flat")
        return out


def standard_phi(m):
    """phi[h, i] = phi_i^h of the block rotation on R^{2m+1}."""
    n = 2 * m + 1
    phi = np.zeros((n, n))
    for a in range(m):
        phi[a + m, a] = 1.0
        phi[a, a + m] = -1.0
    return phi


def _reeb(n):
    e = np.zeros(n)
    e[-1] = 1.0
    return e


def _check_m(m):
    if m < 1:
        raise DimensionError("m must be at least 1")


def flat_cosymplectic(m):
    _check_m(m)
    n = 2 * m + 1
    return CatalogEntry(
        id=f"flat-cosym-m{m}", dim=n, m=m,
        metric=constant_field(np.eye(n), (LOWER, LOWER), name="delta"),
        phi=constant_field(standard_phi(m), (UPPER, LOWER), name="phi"),
        xi=constant_field(_reeb(n), (UPPER,), name="xi"),
        eta=constant_field(_reeb(n), (LOWER,), name="eta"),
        box=((-1.0, 1.0),) * n, description=f"R^{n} with the standard cosymplectic structure",
        cosymplectic=True, flat=True, normal=True, conformally_flat=True,
        reeb_index=n - 1, scalar_curvature=0.0,
    )


def _stereo_excluded(m):
    def excluded(x):
        for a in range(m):
            if x[a] * x[a] + x[a + m] * x[a + m] > STEREO_LIMIT ** 2:
                return True
        return False

    return excluded


def kaehler_product_cosymplectic(radii):
    """(S^2(r_1) x ... x S^2(r_m)) x R with the product Kaehler structure plus dz."""
    radii = tuple(float(r) for r in radii)
    m = len(radii)
    _check_m(m)
    if any(not r > 0 for r in radii):
        raise ValueError("sphere radii must be positive")
    n = 2 * m + 1
    x = J.coords(n)
    excluded = _stereo_excluded(m)
    g = np.empty((n, n), dtype=object)
    g[:] = J.Const(0.0)
    for a, r in enumerate(radii):
        factor = 4.0 * r ** 4 / (r * r + x[a] * x[a] + x[a + m] * x[a + m]) ** 2
        g[a, a] = factor
        g[a + m, a + m] = factor
    g[n - 1, n - 1] = J.Const(1.0)
    digits = "".join(f"{r:g}" for r in radii)
    ident = "s2x" * m + "r-" + digits
    box = tuple((-1.5 * r, 1.5 * r) for r in radii) * 2 + ((-1.0, 1.0),)
    return CatalogEntry(
        id=ident, dim=n, m=m,
        metric=ChartField(g, (LOWER, LOWER), excluded=excluded, name=ident),
        phi=constant_field(standard_phi(m), (UPPER, LOWER), name="phi"),
        xi=constant_field(_reeb(n), (UPPER,), name="xi"),
        eta=constant_field(_reeb(n), (LOWER,), name="eta"),
        box=box, excluded=excluded,
        description=f"product of {m} stereographic 2-spheres (radii {radii}) with R",
        cosymplectic=True, normal=True, reeb_index=n - 1,
        scalar_curvature=sum(2.0 / r ** 2 for r in radii),
    )


def _horizontal_indices(dim, reeb_index):
    return [i for i in range(dim) if i != reeb_index]


def p_expression(p_id, dim, reeb_index=None):
    x = J.coords(dim)
    hor = _horizontal_indices(dim, reeb_index)
    if p_id == "zero":
        return J.Const(0.0)
    if p_id == "linear-horizontal":
        return x[hor[0]] * 1.0
    if p_id == "quadratic-horizontal":
        expr = J.Const(0.0)
        for k, a in enumerate(hor):
            expr = expr + 0.5 / (k + 1) * x[a] * x[a]
        if len(hor) > 1:
            expr = expr + 0.25 * x[hor[0]] * x[hor[1]]
        return expr
    if p_id == "gaussian-horizontal":
        s = J.Const(0.0)
        for a in hor:
            s = s + x[a] * x[a]
        return J.exp(-s)
    if p_id == "reeb-linear":
        if reeb_index is None:
            raise LookupFailure("reeb-linear needs an entry with a Reeb coordinate")
        return x[reeb_index] * 1.0
    raise LookupFailure(f"unknown p id {p_id!r}; known: {', '.join(P_IDS)}")


def p_catalog(entry, p_id):
    """Scalar field p on ``entry``; all admissible ids ignore the Reeb coordinate."""
    expr = p_expression(p_id, entry.dim, entry.reeb_index)
    return scalar_field(expr, entry.dim, excluded=entry.excluded, name=p_id)


_CONF_P = {"gauss": "gaussian-horizontal", "linear": "linear-horizontal",
           "quadratic": "quadratic-horizontal", "zero": "zero"}


def conformally_flat_metric(n, p_id):
    """g = e^{2p} delta on R^n (metric only)."""
    if n < 4:
        raise DimensionError("conformally flat catalog entries need n >= 4")
    short = {v: k for k, v in _CONF_P.items()}.get(p_id, p_id)
    if short not in _CONF_P:
        raise LookupFailure(f"unknown conformal p id {p_id!r}")
    pid = _CONF_P[short]
    p = scalar_field(p_expression(pid, n), n, name=pid)
    e2p = J.exp(2.0 * p.components[()])
    g = np.empty((n, n), dtype=object)
    g[:] = J.Const(0.0)
    for i in range(n):
        g[i, i] = e2p
    return CatalogEntry(
        id=f"conf-flat-{n}-{short}", dim=n,
        metric=ChartField(g, (LOWER, LOWER), name=f"e^(2p) delta, p={pid}"),
        box=((-1.0, 1.0),) * n, description=f"e^(2p) delta on R^{n} with p = {pid}",
        conformally_flat=True, flat=(short == "zero"),
        scalar_curvature=0.0 if short == "zero" else None,
        conformal_base=constant_field(np.eye(n), (LOWER, LOWER), name="delta"),
        conformal_p=p, conformal_p_id=pid,
    )


def round_sphere(r):
    """Round S^2(r) in the chart (theta, phi); poles excluded."""
    r = float(r)
    if not r > 0:
        raise ValueError("radius must be positive")
    th, _ = J.coords(2)
    g = np.empty((2, 2), dtype=object)
    g[0, 0] = J.Const(r * r)
    g[0, 1] = g[1, 0] = J.Const(0.0)
    g[1, 1] = r * r * J.sin(th) ** 2

    def excluded(x):
        return abs(np.sin(x[0])) < 1e-6

    return CatalogEntry(
        id=f"round-s2-r{r:g}", dim=2,
        metric=ChartField(g, (LOWER, LOWER), excluded=excluded, name="round sphere"),
        box=((0.1, np.pi - 0.1), (0.0, 2 * np.pi)), excluded=excluded,
        description=f"round 2-sphere of radius {r:g}, polar-angle chart",
        scalar_curvature=2.0 / (r * r),
    )


def twisted_r3():
    """The flat m=1 structure conjugated by a rotation R(x^1) in the (y, z) plane.

    g stays the identity, so the almost contact metric identities hold exactly,
    but rotating xi into the contact plane as x^1 varies breaks normality.
    """
    x = J.coords(3)
    c, s = J.cos(x[0]), J.sin(x[0])
    zero, one = J.Const(0.0), J.Const(1.0)
    R = np.array([[one, zero, zero], [zero, c, -s], [zero, s, c]], dtype=object)
    phi0 = standard_phi(1)
    phi = np.empty((3, 3), dtype=object)
    for h in range(3):
        for i in range(3):
            acc = J.Const(0.0)
            for a in range(3):
                for b in range(3):
                    if phi0[a, b] != 0.0:
                        acc = acc + phi0[a, b] * R[h, a] * R[i, b]
            phi[h, i] = acc
    xi = np.array([R[h, 2] for h in range(3)], dtype=object)
    return CatalogEntry(
        id="twisted-r3", dim=3, m=1,
        metric=constant_field(np.eye(3), (LOWER, LOWER), name="delta"),
        phi=ChartField(phi, (UPPER, LOWER), name="twisted phi"),
        xi=ChartField(xi, (UPPER,), name="twisted xi"),
        eta=ChartField(xi.copy(), (LOWER,), name="twisted eta"),
        box=((-1.0, 1.0),) * 3, description="flat R^3, structure twisted by a rotation; not normal",
        flat=True, reeb_index=None, scalar_curvature=0.0,
    )


def conformal_rescale(entry, p_id, new_id=None):
    """g -> e^{2p} g, xi -> e^{-p} xi, eta -> e^{p} eta; phi unchanged."""
    base = entry.structure
    p = p_expression(p_id, entry.dim, entry.reeb_index)
    ep, emp = J.exp(p), J.exp(-1.0 * p)
    n = entry.dim
    g = np.empty((n, n), dtype=object)
    xi = np.empty(n, dtype=object)
    eta = np.empty(n, dtype=object)
    e2p = J.exp(2.0 * p)
    for i in range(n):
        xi[i] = emp * base.xi.components[i]
        eta[i] = ep * base.eta.components[i]
        for j in range(n):
            g[i, j] = e2p * base.g.components[i, j]
    return CatalogEntry(
        id=new_id or f"{entry.id}-rescaled-{p_id}", dim=n, m=entry.m,
        metric=ChartField(g, (LOWER, LOWER), excluded=entry.excluded, name="rescaled g"),
        phi=entry.phi,
        xi=ChartField(xi, (UPPER,), excluded=entry.excluded, name="rescaled xi"),
        eta=ChartField(eta, (LOWER,), excluded=entry.excluded, name="rescaled eta"),
        box=entry.box, excluded=entry.excluded,
        description=f"{entry.id} conformally rescaled by p = {p_id}",
        reeb_index=entry.reeb_index,
    )


_PATTERNS = (
    (re.compile(r"^flat-cosym-m(\d+)$"), lambda mt: flat_cosymplectic(int(mt.group(1)))),
    (re.compile(r"^((?:s2x)+)r-(\d+)$"), None),
    (re.compile(r"^conf-flat-(\d+)-(gauss|linear|quadratic|zero)$"),
     lambda mt: conformally_flat_metric(int(mt.group(1)), mt.group(2))),
    (re.compile(r"^round-s2-r(\d+(?:\.\d+)?)$"), lambda mt: round_sphere(float(mt.group(1)))),
    (re.compile(r"^twisted-r3$"), lambda mt: twisted_r3()),
    (re.compile(r"^rescaled-flat-m1$"),
     lambda mt: conformal_rescale(flat_cosymplectic(1), "gaussian-horizontal", "rescaled-flat-m1")),
)


@lru_cache(maxsize=None)
def get_entry(entry_id):
    """Look up a catalog entry by id; entries are built once and shared."""
    for pat, build in _PATTERNS:
        mt = pat.match(entry_id)
        if mt is None:
            continue
        if build is None:
            m = mt.group(1).count("s2x")
            digits = mt.group(2)
            if len(digits) != m or "0" in digits:
                raise LookupFailure(f"{entry_id!r}: need one nonzero radius digit per sphere factor")
            return kaehler_product_cosymplectic([int(d) for d in digits])
        return build(mt)
    raise LookupFailure(f"unknown manifold id {entry_id!r}")


@lru_cache(maxsize=None)
def get_p(entry_id, p_id):
    return p_catalog(get_entry(entry_id), p_id)


def list_catalog():
    lines = []
    for ident in CATALOG_IDS:
        e = get_entry(ident)
        lines.append(f"{e.id:22} dim {e.dim:2}  {','.join(e.flags()) or '-':40} {e.description}")
    lines.append("")
    lines.append("p functions: " + ", ".join(P_IDS))
    return "\n".join(lines) + "\n"
