"""Almost contact metric structures: validation, normality, cosymplectic tests.

Layout: ``phi[h, i]`` is phi_i^h, ``xi[h]``, ``eta[i]``, ``g[j, i]``; partials
append a trailing derivative axis.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, StructureError
from .jet import TensorJet, tj_einsum
from .report import IdentityReport, Residuals, build_records
from .riemann import covariant_derivative_array, levi_civita_jet, local_metric
from .tensor import LOWER, UPPER, ComponentTensor

STRUCTURE_TOL = 1e-10
COSYM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AlmostContactMetricStructure:
    phi: object
    xi: object
    eta: object
    g: object
    m: int
    name: str = ""

    def __post_init__(self):
        n = self.g.dim
        if n % 2 == 0:
            raise StructureError(f"almost contact structures need odd dimension, got {n}")
        if n != 2 * self.m + 1:
            raise StructureError(f"chart dimension {n} does not equal 2m+1 for m={self.m}")
        for f, sig, label in ((self.phi, (UPPER, LOWER), "phi"), (self.xi, (UPPER,), "xi"),
                              (self.eta, (LOWER,), "eta"), (self.g, (LOWER, LOWER), "g")):
            if f.dim != n:
                raise StructureError(f"{label} has dim {f.dim}, metric has {n}")
            if tuple(f.signature) != sig:
                raise ShapeError(f"{label} must have signature {sig}, got {f.signature}")

    @property
    def n(self):
        return 2 * self.m + 1


def _tj(field, x):
    v, d, _ = field.jets(x)
    return TensorJet(v, d)


@dataclass(frozen=True, eq=False)
class LocalStructure:
    """Everything the structure identities need at one point."""

    lm: object
    gamma: TensorJet
    phi: TensorJet
    xi: TensorJet
    eta: TensorJet
    phil: TensorJet
    eta_up: TensorJet
    m: int

    @property
    def n(self):
        return self.lm.n

    @property
    def horizontal(self):
        """g_ji - eta_j eta_i."""
        return self.lm.g - np.outer(self.eta.val, self.eta.val)

    @property
    def projector(self):
        """delta_j^h - eta_j eta^h as [h, j]."""
        return np.eye(self.n) - np.outer(self.eta_up.val, self.eta.val)

    def phi_up(self):
        """phi^{ab} = g^{aj} g^{bi} phi_ji."""
        ginv = self.lm.ginv
        return ginv @ self.phil.val @ ginv.T


def local_structure(s, x):
    lm = local_metric(s.g, x)
    phi = _tj(s.phi, x)
    eta = _tj(s.eta, x)
    return LocalStructure(
        lm=lm,
        gamma=levi_civita_jet(lm),
        phi=phi,
        xi=_tj(s.xi, x),
        eta=eta,
        phil=tj_einsum("tj,ti->ji", phi, lm.g_jet()),
        eta_up=tj_einsum("ht,t->h", lm.ginv_jet(), eta),
        m=s.m,
    )


VALIDATION_TABLE = {
    "phi_squared": ("phi_j^i phi_i^h = -delta_j^h + eta_j xi^h", STRUCTURE_TOL),
    "phi_xi": ("phi_i^h xi^i = 0", STRUCTURE_TOL),
    "eta_phi": ("eta_i phi_j^i = 0", STRUCTURE_TOL),
    "eta_xi": ("eta_i xi^i = 1", STRUCTURE_TOL),
    "metric_phi": ("g_ts phi_j^t phi_i^s = g_ji - eta_j eta_i", STRUCTURE_TOL),
    "eta_dual": ("eta_i = g_ih xi^h", STRUCTURE_TOL),
    "xi_unit": ("g_kh xi^k xi^h = 1", STRUCTURE_TOL),
    "phi_skew": ("phi_ji = phi_j^t g_ti is skew", STRUCTURE_TOL),
    "phi_trace": ("phi_t^t = 0", STRUCTURE_TOL),
    "phi2_trace": ("phi_t^s phi_s^t = -2m", STRUCTURE_TOL),
    "eta_raised_xi": ("g^{ht} eta_t = xi^h", STRUCTURE_TOL),
}


def structure_residuals(ls, res):
    phi, xi, eta, g = ls.phi.val, ls.xi.val, ls.eta.val, ls.lm.g
    n = ls.n
    res.add("phi_squared", phi @ phi + np.eye(n) - np.outer(xi, eta))
    res.add("phi_xi", phi @ xi)
    res.add("eta_phi", eta @ phi)
    res.add("eta_xi", eta @ xi - 1.0)
    res.add("metric_phi", phi.T @ g @ phi - (g - np.outer(eta, eta)))
    res.add("eta_dual", eta - g @ xi)
    res.add("xi_unit", xi @ g @ xi - 1.0)
    res.add("phi_skew", ls.phil.val + ls.phil.val.T)
    res.add("phi_trace", np.trace(phi))
    res.add("phi2_trace", np.trace(phi @ phi) + 2 * ls.m)
    res.add("eta_raised_xi", ls.eta_up.val - xi)


def validate_structure(s, points, tol_overrides=None):
    """Structure identities (phi^2, phi xi, eta phi, eta xi, metric) over ``points``."""
    res = Residuals()
    for x in points:
        structure_residuals(local_structure(s, x), res)
    return IdentityReport("structure", build_records(res, VALIDATION_TABLE, tol_overrides),
                          points=len(points))


def nijenhuis_array(ls):
    phi, dphi = ls.phi.val, ls.phi.der
    # dphi[h, i, k] = d_k phi_i^h
    t1 = np.einsum("tj,hit->hji", phi, dphi)
    t2 = np.einsum("ti,hjt->hji", phi, dphi)
    t3 = np.einsum("tij,ht->hji", dphi, phi) - np.einsum("tji,ht->hji", dphi, phi)
    return t1 - t2 - t3


def nijenhuis(s, x):
    """N_ji^h = phi_j^t d_t phi_i^h - phi_i^t d_t phi_j^h - (d_j phi_i^t - d_i phi_j^t) phi_t^h."""
    ls = local_structure(s, x)
    return ComponentTensor(ls.n, (UPPER, LOWER, LOWER), nijenhuis_array(ls))


def d_eta_array(ls):
    """d_j eta_i - d_i eta_j as [j, i]."""
    de = ls.eta.der  # de[i, j] = d_j eta_i
    return de.T - de


def normality_array(ls):
    return nijenhuis_array(ls) + np.einsum("ji,h->hji", d_eta_array(ls), ls.xi.val)


def normality_residual(s, x):
    return float(np.max(np.abs(normality_array(local_structure(s, x)))))


def normality_report(s, points, tol_overrides=None):
    res = Residuals()
    for x in points:
        ls = local_structure(s, x)
        res.add("normality", normality_array(ls))
    table = {"normality": ("N_ji^h + (d_j eta_i - d_i eta_j) xi^h = 0", COSYM_TOL)}
    return IdentityReport("normality", build_records(res, table, tol_overrides), points=len(points))


COSYM_TABLE = {
    "nabla_phi": ("nabla_j phi_i^h = 0", COSYM_TOL),
    "nabla_xi": ("nabla_i xi^h = 0", COSYM_TOL),
    "d_eta": ("d_j eta_i - d_i eta_j = 0", COSYM_TOL),
    "d_Phi": ("d_k phi_ji + d_j phi_ik + d_i phi_kj = 0", COSYM_TOL),
}


def cosymplectic_arrays(ls):
    gam = ls.gamma.val
    nphi = covariant_derivative_array(ls.phi.val, ls.phi.der, (UPPER, LOWER), gam)
    nxi = covariant_derivative_array(ls.xi.val, ls.xi.der, (UPPER,), gam)
    D = ls.phil.der  # D[j, i, k] = d_k phi_ji
    dPhi = (np.einsum("jik->kji", D) + np.einsum("ikj->kji", D) + np.einsum("kji->kji", D))
    return {"nabla_phi": nphi, "nabla_xi": nxi, "d_eta": d_eta_array(ls), "d_Phi": dPhi}


def cosymplectic_residuals(s, points, tol_overrides=None):
    res = Residuals()
    for x in points:
        for name, arr in cosymplectic_arrays(local_structure(s, x)).items():
            res.add(name, arr)
    return IdentityReport("cosym", build_records(res, COSYM_TABLE, tol_overrides), points=len(points))
