"""Run configuration, the static suite registry and tensor dumps."""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bochner, contact, cosym, riemann
from ._accel import backend_name
from .catalog import get_entry, get_p
from .chart import GENERATOR, as_point_array
from .errors import (AdmissibilityError, DimensionError, DomainError,
                     LookupFailure, NumericError, UsageError)
from .report import IdentityRecord, IdentityReport, Residuals, build_records
from .tensor import ComponentTensor, LOWER, UPPER

SUITES = (
    "structure", "normality", "cosym", "conformal-baseline", "cosym-compat",
    "cosym-identities", "curvature-crosscheck", "bochner-identities", "theorem-oracle",
)
P_SUITES = ("conformal-baseline", "cosym-compat", "cosym-identities", "curvature-crosscheck")
DEFAULT_P = "gaussian-horizontal"

CONFORMAL_METRICITY_TOL = 1e-10
WEYL_TOL = 1e-8
WEYL_TRACE_TOL = 1e-9
DISPLAY_TOL = 1e-8
SCALAR_TOL = 1e-9
LC_REDUCTION_TOL = 1e-12


@dataclass
class RunConfig:
    suite: str
    manifold: str = ""
    p: str = ""
    points: int = 50
    seed: int = 0
    tol: dict = field(default_factory=dict)
    out: str = ""
    m: int = 3
    trials: int = 100

    def validate(self):
        if self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}; known: {', '.join(SUITES)}")
        if self.suite == "theorem-oracle":
            if self.m < 3:
                raise UsageError("theorem-oracle needs m >= 3")
            if self.trials < 1:
                raise UsageError("trials must be at least 1")
            return self
        if not self.manifold:
            raise UsageError(f"suite {self.suite} needs a manifold id")
        if self.points < 1:
            raise UsageError("points must be at least 1")
        try:
            entry = get_entry(self.manifold)
            if self.suite in P_SUITES:
                get_p(self.manifold, self.p_id)
        except LookupFailure as exc:
            raise UsageError(str(exc)) from None
        if self.suite not in ("conformal-baseline",) and entry.metric_only:
            raise UsageError(f"suite {self.suite} needs an almost contact structure; "
                             f"{self.manifold} is metric-only")
        for name, val in self.tol.items():
            if not (isinstance(val, (int, float)) and math.isfinite(val) and val >= 0):
                raise UsageError(f"tolerance for {name!r} must be a non-negative number")
        return self

    @property
    def p_id(self):
        return self.p or DEFAULT_P


def run_suite(config):
    """Execute one suite; numeric problems become failing records, never exceptions."""
    config.validate()
    start = time.perf_counter()
    if config.suite == "theorem-oracle":
        rep = bochner.theorem_oracle(config.m, config.trials, config.seed, config.tol)
    else:
        entry = get_entry(config.manifold)
        try:
            pts = entry.sample(config.points, config.seed)
            rep = _RUNNERS[config.suite](entry, config, pts)
        except (NumericError, DomainError, AdmissibilityError, DimensionError) as exc:
            rep = IdentityReport(config.suite, [IdentityRecord(
                "evaluation", "suite evaluation completed", math.inf, 0.0,
                note=f"{type(exc).__name__}: {exc}")])
        rep.manifold = entry.id
        if config.suite in P_SUITES:
            rep.p = rep.notes.get("conformal_p", config.p_id)
        rep.points = config.points
        rep.seed = config.seed
    rep.generator = GENERATOR
    rep.notes["backend"] = backend_name()
    rep.wall_time = time.perf_counter() - start
    return rep


def _structure(entry, cfg, pts):
    return contact.validate_structure(entry.structure, pts, cfg.tol)


def _normality(entry, cfg, pts):
    return contact.normality_report(entry.structure, pts, cfg.tol)


def _cosym(entry, cfg, pts):
    return contact.cosymplectic_residuals(entry.structure, pts, cfg.tol)


def _compat(entry, cfg, pts):
    return cosym.compatibility_residuals(entry.structure, get_p(entry.id, cfg.p_id), pts, cfg.tol)


def _identities(entry, cfg, pts):
    return cosym.identity_suite(entry.structure, get_p(entry.id, cfg.p_id), pts, cfg.tol)


def _bochner(entry, cfg, pts):
    return bochner.bochner_identity_suite(entry.structure, pts, cfg.tol)


def _crosscheck(entry, cfg, pts):
    s = entry.structure
    p = get_p(entry.id, cfg.p_id)
    rep = cosym.curvature_crosscheck(s, p, pts, tol_overrides=cfg.tol)
    if cfg.p_id == "zero":
        # with p = 0 the connection is Levi-Civita and both routes must agree with it
        res = Residuals()
        for x in pts:
            lc = cosym.local_conformal(s, p, x)
            K = riemann.curvature_bundle_arrays(lc.ls.lm, lc.ls.gamma)[1]
            res.add("direct_equals_levi_civita", cosym.direct_curvature_cov(lc) - K)
            res.add("analytic_equals_levi_civita", cosym.analytic_curvature_cov(lc) - K)
        table = {
            "direct_equals_levi_civita": ("p = 0: direct R = Levi-Civita K", LC_REDUCTION_TOL),
            "analytic_equals_levi_civita": ("p = 0: closed-form R = Levi-Civita K", LC_REDUCTION_TOL),
        }
        rep.records.extend(build_records(res, table, cfg.tol))
    return rep


CONFORMAL_TABLE = {
    "conformal_metricity": ("D_k(e^{2p} g_ji) = 0 for the conformal connection",
                            CONFORMAL_METRICITY_TOL),
    "conformal_display": ("curvature of the conformal connection = K - (delta p - delta p "
                          "+ p g - p g) assembly", DISPLAY_TOL),
    "weyl_trace_free": ("C_tji^t = 0", WEYL_TRACE_TOL),
    "weyl_vanishes": ("C_kji^h = 0 on a conformally flat metric", WEYL_TOL),
    "scalar_curvature": ("K = catalogued closed-form value", SCALAR_TOL),
}


def _conformal(entry, cfg, pts):
    """Conformal connection of (base, p) plus Weyl and scalar checks on the entry metric."""
    if entry.conformal_base is not None:
        base, p, pid = entry.conformal_base, entry.conformal_p, entry.conformal_p_id
    else:
        base, p, pid = entry.metric, get_p(entry.id, cfg.p_id), cfg.p_id
    conn = riemann.conformal_connection_field(base, p)
    res = Residuals()
    n = entry.dim
    for x in pts:
        res.add("conformal_metricity", riemann.conformal_metricity_residual(base, p, x))
        direct = riemann.curvature_array(conn.jet(x))
        res.add_pair("conformal_display", direct, riemann.conformal_curvature_display(base, p, x))
        lm = riemann.local_metric(entry.metric, x)
        R, _, ric, K = riemann.curvature_bundle_arrays(lm)
        if n >= 3:
            C = riemann.weyl_array(R, ric, K, lm.g, lm.ginv)
            res.add("weyl_trace_free", np.einsum("ttji->ji", C))
            if entry.conformally_flat and n >= 4:
                res.add("weyl_vanishes", C)
        if entry.scalar_curvature is not None:
            res.add_pair("scalar_curvature", np.array(K), np.array(entry.scalar_curvature))
    rep = IdentityReport("conformal-baseline", build_records(res, CONFORMAL_TABLE, cfg.tol))
    rep.notes["conformal_p"] = pid
    rep.notes["display_sign"] = "-" if riemann.CONFORMAL_DISPLAY_SIGN < 0 else "+"
    return rep


_RUNNERS = {
    "structure": _structure,
    "normality": _normality,
    "cosym": _cosym,
    "conformal-baseline": _conformal,
    "cosym-compat": _compat,
    "cosym-identities": _identities,
    "curvature-crosscheck": _crosscheck,
    "bochner-identities": _bochner,
}


# --- tensor dump --------------------------------------------------------

TENSORS = ("gamma-lc", "gamma-cc", "riemann", "ricci", "scalar", "weyl", "bochner",
           "p_ji", "q_ji", "alpha", "beta")

_LAYOUT_LETTERS = {
    "gamma-lc": "hji", "gamma-cc": "hji", "riemann": "hkji", "weyl": "hkji",
    "bochner": "hkji", "ricci": "ji", "p_ji": "ji", "q_ji": "ji", "alpha": "ji", "beta": "ji",
}


def parse_point(text, dim):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}; expected x1,...,xn") from None
    if len(vals) != dim:
        raise UsageError(f"point has {len(vals)} coordinates, manifold has dimension {dim}")
    return as_point_array(vals)


def compute_tensor(manifold, p_id, name, x):
    if name not in TENSORS:
        raise UsageError(f"unknown tensor {name!r}; known: {', '.join(TENSORS)}")
    try:
        entry = get_entry(manifold)
        p = get_p(manifold, p_id or DEFAULT_P)
    except LookupFailure as exc:
        raise UsageError(str(exc)) from None
    needs_structure = name in ("gamma-cc", "bochner", "q_ji", "alpha", "beta")
    if needs_structure and entry.metric_only:
        raise UsageError(f"{name} needs an almost contact structure; {manifold} is metric-only")
    x = as_point_array(x)
    g = entry.metric
    if name == "gamma-lc":
        return riemann.christoffel(g, x)
    if name == "gamma-cc":
        return cosym.cosym_conformal_gamma(entry.structure, p, x)
    if name in ("riemann", "ricci", "scalar"):
        b = riemann.curvature_bundle(g, x)
        return {"riemann": b.riemann, "ricci": b.ricci, "scalar": b.scalar}[name]
    if name == "weyl":
        if entry.dim < 3:
            raise UsageError("the Weyl tensor needs dimension >= 3")
        return riemann.weyl(g, x)
    if name == "bochner":
        return bochner.bochner_tensor(bochner.inputs_at(entry.structure, x))
    if name == "p_ji" and entry.metric_only:
        return riemann.conformal_p_ji(g, p, x)
    cd = cosym.second_level_tensors(entry.structure, p, x)
    arr = {"p_ji": cd.p_ji, "q_ji": cd.q_ji, "alpha": cd.alpha, "beta": cd.beta}[name]
    return ComponentTensor(entry.dim, (LOWER, LOWER), arr)


def format_tensor(name, value, manifold, p_id, x):
    lines = [f"tensor: {name}", f"manifold: {manifold}"]
    if p_id:
        lines.append(f"p: {p_id}")
    lines.append("point: " + ", ".join(repr(float(v)) for v in x))
    if not isinstance(value, ComponentTensor):
        lines.append(f"value: {float(value)!r}")
        return "\n".join(lines) + "\n"
    letters = _LAYOUT_LETTERS[name]
    sig = " ".join("upper" if s == UPPER else "lower" for s in value.signature)
    lines.append(f"layout: [{', '.join(letters)}] ({sig})")
    comps = value.components
    for idx in np.ndindex(comps.shape):
        label = ",".join(f"{a}={i}" for a, i in zip(letters, idx))
        lines.append(f"[{label}] {float(comps[idx])!r}")
    return "\n".join(lines) + "\n"


def tensor_dump(manifold, p_id, name, point):
    """Text listing of one tensor at a point; ``point`` is a sequence or 'x1,...,xn'."""
    try:
        entry = get_entry(manifold)
    except LookupFailure as exc:
        raise UsageError(str(exc)) from None
    x = parse_point(point, entry.dim) if isinstance(point, str) else as_point_array(point)
    if len(x) != entry.dim:
        raise UsageError(f"point has {len(x)} coordinates, manifold has dimension {entry.dim}")
    uses_p = name in ("gamma-cc", "p_ji", "q_ji", "alpha", "beta")
    pid = (p_id or DEFAULT_P) if uses_p else ""
    value = compute_tensor(manifold, pid, name, x)
    return format_tensor(name, value, manifold, pid, x)

