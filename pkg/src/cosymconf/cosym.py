"""The cosymplectic conformal connection of a scalar p and its identities.

Given a cosymplectic structure (phi, xi, eta, g) and a scalar p with
xi(p) = 0, the connection is

    Gamma_ji^h = {h ji} + (delta_j^h - eta_j eta^h) p_i + (delta_i^h - eta_i eta^h) p_j
                 - (g_ji - eta_j eta_i) p^h + phi_j^h q_i + phi_i^h q_j - phi_ji q^h

with p_i = d_i p and q_i = -p_t phi_i^t. Its curvature is computed two ways:
directly from the coefficients (d Gamma + Gamma Gamma) and by the closed-form
assembly in :func:`analytic_curvature_cov`; :func:`curvature_crosscheck`
compares them.

Raised 2-tensors such as p_k^h are stored ``[k, h]`` (second slot raised).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .contact import local_structure
from .errors import AdmissibilityError
from .jet import TensorJet, tj_einsum
from .report import IdentityReport, Residuals, build_records
from .riemann import ConnectionField, covariant_derivative_array, curvature_array, torsion
from .tensor import LOWER, UPPER, ComponentTensor, max_abs

ADMISSIBLE_TOL = 1e-10
COMPAT_TOL = 1e-9
TORSION_TOL = 1e-12
IDENTITY_TOL = 1e-8
CROSSCHECK_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class LocalConformal:
    """Structure data plus the first-level p quantities at one point."""

    ls: object
    p: float
    pl: TensorJet
    pu: TensorJet
    ql: TensorJet
    qu: TensorJet

    @property
    def lam(self):
        """lambda = p_i p^i."""
        return float(self.pl.val @ self.pu.val)


def _p_jets(p_field, x):
    pv, dp, ddp = p_field.jets(x)
    return float(pv), TensorJet(dp, ddp)


def local_conformal(s, p_field, x, ls=None, q=None):
    """First-level data; ``q`` overrides q_i = -p_t phi_i^t (identity tests only)."""
    if ls is None:
        ls = local_structure(s, x)
    pv, pl = _p_jets(p_field, x)
    ginv = ls.lm.ginv_jet()
    pu = tj_einsum("ht,t->h", ginv, pl)
    ql = -tj_einsum("t,ti->i", pl, ls.phi) if q is None else q
    qu = tj_einsum("ht,t->h", ginv, ql)
    return LocalConformal(ls, pv, pl, pu, ql, qu)


def admissibility_residual(lc):
    return abs(float(lc.ls.xi.val @ lc.pl.val))


def admissible_p(s, p_field, points, tol=ADMISSIBLE_TOL):
    res = Residuals()
    for x in points:
        ls = local_structure(s, x)
        res.add("admissible_p", ls.xi.val @ p_field.jets(x)[1])
    table = {"admissible_p": ("xi^t d_t p = 0", tol)}
    return IdentityReport("admissible-p", build_records(res, table), points=len(points))


def _projectors(ls):
    n = ls.n
    delta = TensorJet.constant(np.eye(n), n)
    pmix = delta - tj_einsum("h,j->hj", ls.eta_up, ls.eta)
    plow = ls.lm.g_jet() - tj_einsum("j,i->ji", ls.eta, ls.eta)
    return pmix, plow


def cosym_gamma_jet(lc):
    ls = lc.ls
    pmix, plow = _projectors(ls)
    gam = ls.gamma
    gam = gam + tj_einsum("hj,i->hji", pmix, lc.pl) + tj_einsum("hi,j->hji", pmix, lc.pl)
    gam = gam - tj_einsum("ji,h->hji", plow, lc.pu)
    gam = gam + tj_einsum("hj,i->hji", ls.phi, lc.ql) + tj_einsum("hi,j->hji", ls.phi, lc.ql)
    return gam - tj_einsum("ji,h->hji", ls.phil, lc.qu)


def _require_admissible(lc, check):
    if check:
        r = admissibility_residual(lc)
        if r > ADMISSIBLE_TOL:
            raise AdmissibilityError(f"xi(p) = {r:.3e} exceeds {ADMISSIBLE_TOL:g}")


def cosym_conformal_gamma(s, p_field, x, check=True):
    lc = local_conformal(s, p_field, x)
    _require_admissible(lc, check)
    return ComponentTensor(s.n, (UPPER, LOWER, LOWER), cosym_gamma_jet(lc).val)


def cosym_conformal_connection(s, p_field, check=True):
    def coeffs(x):
        lc = local_conformal(s, p_field, x)
        _require_admissible(lc, check)
        return cosym_gamma_jet(lc)

    return ConnectionField(s.n, coeffs, torsion_symmetric=False, name="cosymplectic-conformal")


def phi_derivative_formula(lc):
    """Closed form of D_j phi_i^h for arbitrary q, as [h, i, j].

    (delta_j^h - eta_j eta^h)(p_t phi_i^t + q_i) + (g_ji - eta_j eta_i)(phi_t^h p^t - q^h)
    + phi_j^h (q_t phi_i^t - p_i) + phi_ji (p^h + phi_t^h q^t)
    """
    ls = lc.ls
    phi, phil = ls.phi.val, ls.phil.val
    p, pu, q, qu = lc.pl.val, lc.pu.val, lc.ql.val, lc.qu.val
    pmix = ls.projector
    plow = ls.horizontal
    return (np.einsum("hj,i->hij", pmix, p @ phi + q)
            + np.einsum("ji,h->hij", plow, phi @ pu - qu)
            + np.einsum("hj,i->hij", phi, q @ phi - p)
            + np.einsum("ji,h->hij", phil, pu + phi @ qu))


COMPAT_TABLE = {
    "admissible_p": ("xi^t d_t p = 0", ADMISSIBLE_TOL),
    "torsion": ("Gamma_ji^h - Gamma_ij^h = -2 phi_ji q^h", TORSION_TOL),
    "metric_law": ("e^{-2p} [D_k(e^{2p} g_ji) - 2 e^{2p} p_k eta_j eta_i] = 0", COMPAT_TOL),
    "D_phi": ("D_j phi_i^h = 0", COMPAT_TOL),
    "D_eta_up": ("D_j eta^h = 0", COMPAT_TOL),
    "D_xi": ("D_j xi^h = 0", COMPAT_TOL),
    "horizontal_metric_law": ("e^{-2p} D_k(e^{2p}(g_ji - eta_j eta_i)) = 0", COMPAT_TOL),
}


def compatibility_arrays(lc):
    ls = lc.ls
    gam = cosym_gamma_jet(lc).val
    e2p = np.exp(2.0 * lc.p)
    dp = lc.pl.val
    eta = ls.eta.val
    out = {"torsion": torsion(gam) + 2.0 * np.einsum("ji,h->hji", ls.phil.val, lc.qu.val)}

    g, dg = ls.lm.g, ls.lm.dg
    val = e2p * g
    der = e2p * (dg + 2.0 * np.einsum("ji,k->jik", g, dp))
    target = 2.0 * e2p * np.einsum("j,i,k->jik", eta, eta, dp)
    # both e^{2p}-weighted laws are reported per unit e^{2p}
    out["metric_law"] = (covariant_derivative_array(val, der, (LOWER, LOWER), gam) - target) / e2p

    out["D_phi"] = covariant_derivative_array(ls.phi.val, ls.phi.der, (UPPER, LOWER), gam)
    out["D_eta_up"] = covariant_derivative_array(ls.eta_up.val, ls.eta_up.der, (UPPER,), gam)
    out["D_xi"] = covariant_derivative_array(ls.xi.val, ls.xi.der, (UPPER,), gam)

    h = TensorJet(ls.horizontal, dg - np.einsum("jk,i->jik", ls.eta.der, eta)
                  - np.einsum("j,ik->jik", eta, ls.eta.der))
    val = e2p * h.val
    der = e2p * (h.der + 2.0 * np.einsum("ji,k->jik", h.val, dp))
    out["horizontal_metric_law"] = covariant_derivative_array(val, der, (LOWER, LOWER), gam) / e2p
    return out


def compatibility_residuals(s, p_field, points, tol_overrides=None):
    """Defining laws of the connection; never raises on inadmissible p."""
    res = Residuals()
    for x in points:
        lc = local_conformal(s, p_field, x)
        res.add("admissible_p", admissibility_residual(lc))
        for name, arr in compatibility_arrays(lc).items():
            res.add(name, arr)
    return IdentityReport("cosym-compat", build_records(res, COMPAT_TABLE, tol_overrides),
                          points=len(points))


@dataclass(frozen=True, eq=False)
class ConformalData:
    """First- and second-level tensors of p at a point (all Levi-Civita based)."""

    p_l: np.ndarray
    p_u: np.ndarray
    q_l: np.ndarray
    q_u: np.ndarray
    lam: float
    nabla_p: np.ndarray
    nabla_q: np.ndarray
    div_p: float
    p_ji: np.ndarray
    q_ji: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    p_up: np.ndarray
    q_up: np.ndarray
    beta_up: np.ndarray


def conformal_data(lc):
    ls = lc.ls
    gam = ls.gamma.val
    ginv = ls.lm.ginv
    p, q = lc.pl.val, lc.ql.val
    lam = lc.lam
    # lower-slot partials are stored [i, j] = d_j X_i
    nabla_p = lc.pl.der.T - np.einsum("tji,t->ji", gam, p)
    nabla_q = lc.ql.der.T - np.einsum("tji,t->ji", gam, q)
    p_ji = nabla_p - np.outer(p, p) + np.outer(q, q) + 0.5 * lam * ls.horizontal
    q_ji = nabla_q - np.outer(p, q) - np.outer(q, p) + 0.5 * lam * ls.phil.val
    alpha = -(nabla_q - nabla_q.T)
    beta = 2.0 * (np.outer(p, q) - np.outer(q, p))
    return ConformalData(
        p_l=p, p_u=lc.pu.val, q_l=q, q_u=lc.qu.val, lam=lam,
        nabla_p=nabla_p, nabla_q=nabla_q, div_p=float(np.einsum("ji,ji->", ginv, nabla_p)),
        p_ji=p_ji, q_ji=q_ji, alpha=alpha, beta=beta,
        p_up=p_ji @ ginv, q_up=q_ji @ ginv, beta_up=beta @ ginv,
    )


def second_level_tensors(s, p_field, x):
    return conformal_data(local_conformal(s, p_field, x))


IDENTITY_TABLE = {
    "eta_p": ("eta^t p_t = 0", IDENTITY_TOL),
    "q_eta": ("q_t eta^t = 0", IDENTITY_TOL),
    "p_from_q": ("p_i = q_t phi_i^t", IDENTITY_TOL),
    "q_up_from_p": ("q^h = phi_t^h p^t", IDENTITY_TOL),
    "p_up_from_q": ("p^h = -phi_t^h q^t", IDENTITY_TOL),
    "p_dot_q": ("p_i q^i = 0", IDENTITY_TOL),
    "p_norm_q_norm": ("p_i p^i = q_i q^i", IDENTITY_TOL),
    "eta_p_ji": ("eta^j p_ji = 0", IDENTITY_TOL),
    "eta_q_ji": ("eta^j q_ji = 0", IDENTITY_TOL),
    "alpha_eta": ("alpha_ji eta^i = 0", IDENTITY_TOL),
    "beta_eta": ("beta_ji eta^i = 0", IDENTITY_TOL),
    "alpha_skew": ("alpha_ji = -alpha_ij", IDENTITY_TOL),
    "beta_skew": ("beta_ji = -beta_ij", IDENTITY_TOL),
    "p_ji_symmetric": ("p_ji = p_ij", IDENTITY_TOL),
    "q_ji_from_p_ji": ("q_ji = -p_jt phi_i^t", IDENTITY_TOL),
    "p_ji_from_q_ji": ("p_ji = q_jt phi_i^t", IDENTITY_TOL),
    "alpha_from_q_ji": ("alpha_ji = -(q_ji - q_ij - lambda phi_ji)", IDENTITY_TOL),
    "alpha_trace": ("phi^{ij} alpha_ij = -2 nabla_t p^t", IDENTITY_TOL),
    "beta_trace": ("phi^{ij} beta_ij = 4 lambda", IDENTITY_TOL),
    "p_ji_trace": ("p_k^k = nabla_k p^k + m lambda", IDENTITY_TOL),
}


def identity_arrays(lc):
    ls = lc.ls
    cd = conformal_data(lc)
    phi, phil = ls.phi.val, ls.phil.val
    eta_u = ls.eta_up.val
    phi_up = ls.phi_up()
    p, pu, q, qu = cd.p_l, cd.p_u, cd.q_l, cd.q_u
    return {
        "eta_p": eta_u @ p,
        "q_eta": q @ eta_u,
        "p_from_q": p - q @ phi,
        "q_up_from_p": qu - phi @ pu,
        "p_up_from_q": pu + phi @ qu,
        "p_dot_q": p @ qu,
        "p_norm_q_norm": p @ pu - q @ qu,
        "eta_p_ji": eta_u @ cd.p_ji,
        "eta_q_ji": eta_u @ cd.q_ji,
        "alpha_eta": cd.alpha @ eta_u,
        "beta_eta": cd.beta @ eta_u,
        "alpha_skew": cd.alpha + cd.alpha.T,
        "beta_skew": cd.beta + cd.beta.T,
        "p_ji_symmetric": cd.p_ji - cd.p_ji.T,
        "q_ji_from_p_ji": cd.q_ji + cd.p_ji @ phi,
        "p_ji_from_q_ji": cd.p_ji - cd.q_ji @ phi,
        "alpha_from_q_ji": cd.alpha + (cd.q_ji - cd.q_ji.T - cd.lam * phil),
        "alpha_trace": np.einsum("ij,ij->", phi_up, cd.alpha) + 2.0 * cd.div_p,
        "beta_trace": np.einsum("ij,ij->", phi_up, cd.beta) - 4.0 * cd.lam,
        "p_ji_trace": np.trace(cd.p_up) - cd.div_p - ls.m * cd.lam,
    }


def identity_suite(s, p_field, points, tol_overrides=None):
    res = Residuals()
    for x in points:
        for name, arr in identity_arrays(local_conformal(s, p_field, x)).items():
            res.add(name, arr)
    return IdentityReport("cosym-identities", build_records(res, IDENTITY_TABLE, tol_overrides),
                          points=len(points))


# Sign of the (nabla_k q_j - nabla_j q_k) phi_i^h term in the analytic
# curvature, fixed by the crosscheck against the direct computation.
NABLA_Q_TERM_SIGN = 1.0


def analytic_curvature_cov(lc, cd=None, K_cov=None):
    """R_kjih assembled in closed form from K, p_ji, q_ji and the first-level data."""
    ls = lc.ls
    if cd is None:
        cd = conformal_data(lc)
    if K_cov is None:
        K_cov = kernels.lower_curvature(curvature_array(ls.gamma), ls.lm.g)
    c = NABLA_Q_TERM_SIGN * (cd.nabla_q - cd.nabla_q.T)
    d = 2.0 * (np.outer(cd.q_l, cd.p_l) - np.outer(cd.p_l, cd.q_l))
    return K_cov + kernels.structured_curvature(ls.horizontal, ls.phil.val, -cd.p_ji, -cd.q_ji, c, d)


def curvature_analytic(s, p_field, x):
    """Closed-form curvature as a mixed tensor [h, k, j, i]."""
    lc = local_conformal(s, p_field, x)
    cov = analytic_curvature_cov(lc)
    mixed = np.einsum("kjit,th->hkji", cov, lc.ls.lm.ginv)
    return ComponentTensor(s.n, (UPPER, LOWER, LOWER, LOWER), mixed)


def direct_curvature_cov(lc):
    R = curvature_array(cosym_gamma_jet(lc))
    return kernels.lower_curvature(R, lc.ls.lm.g)


def curvature_crosscheck(s, p_field, points, tol=CROSSCHECK_TOL, tol_overrides=None):
    res = Residuals()
    for x in points:
        lc = local_conformal(s, p_field, x)
        res.add_pair("curvature_crosscheck", direct_curvature_cov(lc), analytic_curvature_cov(lc))
    table = {"curvature_crosscheck": ("direct R of the connection = closed-form R", tol)}
    rep = IdentityReport("curvature-crosscheck", build_records(res, table, tol_overrides),
                         points=len(points))
    rep.notes["nabla_q_term_sign"] = "+" if NABLA_Q_TERM_SIGN > 0 else "-"
    return rep


def torsion_defect(lc):
    gam = cosym_gamma_jet(lc).val
    return max_abs(torsion(gam) + 2.0 * np.einsum("ji,h->hji", lc.ls.phil.val, lc.qu.val))
