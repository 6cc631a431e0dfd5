"""Levi-Civita connection, curvature, covariant derivatives and the Weyl tensor.

Array layout (upper slot first, lower slots in written order, derivative
slots appended last):

* ``gamma[h, j, i]`` is Gamma_ji^h; ``nabla_j v^h = d_j v^h + Gamma_jt^h v^t``
* ``R[h, k, j, i]`` is R_kji^h and
  ``R_kji^h = d_k Gamma_ji^h - d_j Gamma_ki^h + Gamma_kt^h Gamma_ji^t - Gamma_jt^h Gamma_ki^t``
* Ricci is ``K_ji = K_tji^t``; the covariant form lowers h into the last slot:
  ``K_kjih = K_kji^t g_th``.

With this convention the unit sphere has K_kjih = g_kh g_ji - g_jh g_ki and
positive scalar curvature.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionError
from .jet import TensorJet, tj_einsum, tj_inverse
from .tensor import LOWER, UPPER, ComponentTensor, MetricPair, max_abs

_SLOT_LETTERS = "abcdefgh"

# Sign multiplying the p_ji terms of the conformal curvature formula. Under the
# curvature convention above the identity holds with "-", not "+" (checked by
# the conformal-baseline suite).
CONFORMAL_DISPLAY_SIGN = -1.0


@dataclass(frozen=True, eq=False)
class LocalMetric:
    """Metric data at a point: g, its first and second partials, inverse."""

    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray
    ginv: np.ndarray
    dginv: np.ndarray

    @property
    def n(self):
        return self.g.shape[0]

    def g_jet(self):
        return TensorJet(self.g, self.dg)

    def ginv_jet(self):
        return TensorJet(self.ginv, self.dginv)

    def pair(self):
        return MetricPair(ComponentTensor(self.n, (LOWER, LOWER), self.g),
                          ComponentTensor(self.n, (UPPER, UPPER), self.ginv))


def local_metric(g_field, x):
    g, dg, ddg = g_field.jets(x)
    pair = MetricPair.from_array(g)
    ginv = np.array(pair.g_inv.components)
    dginv = tj_inverse(TensorJet(g, dg)).der
    return LocalMetric(g, dg, ddg, ginv, dginv)


def levi_civita_jet(lm):
    """Christoffel symbols of the second kind with their first partials."""
    dg, ddg = lm.dg, lm.ddg
    # S_tji = d_j g_ti + d_i g_tj - d_t g_ji ; dg[a, b, c] = d_c g_ab
    S = np.transpose(dg, (0, 2, 1)) + dg - np.transpose(dg, (2, 0, 1))
    dS = np.transpose(ddg, (0, 2, 1, 3)) + ddg - np.transpose(ddg, (2, 0, 1, 3))
    return tj_einsum("ht,tji->hji", lm.ginv_jet(), TensorJet(S, dS)) * 0.5


def christoffel(g_field, x):
    lm = local_metric(g_field, x)
    return ComponentTensor(lm.n, (UPPER, LOWER, LOWER), levi_civita_jet(lm).val)


@dataclass(frozen=True, eq=False)
class ConnectionField:
    """Connection coefficients as a function of the chart point.

    ``coefficients(x)`` returns a :class:`TensorJet` holding ``gamma[h, j, i]``
    and ``dgamma[h, j, i, k]``.
    """

    dim: int
    coefficients: object
    torsion_symmetric: bool = True
    name: str = ""

    def jet(self, x):
        return self.coefficients(x)

    def gamma(self, x):
        return ComponentTensor(self.dim, (UPPER, LOWER, LOWER), self.coefficients(x).val)


def levi_civita(g_field):
    return ConnectionField(g_field.dim, lambda x: levi_civita_jet(local_metric(g_field, x)),
                           True, "levi-civita")


def torsion(gamma):
    """T_ji^h = Gamma_ji^h - Gamma_ij^h."""
    gamma = np.asarray(gamma)
    return gamma - np.transpose(gamma, (0, 2, 1))


def curvature_array(gamma_jet):
    return kernels.riemann_from_connection(gamma_jet.val, gamma_jet.der)


def curvature_of_connection(c, x):
    return ComponentTensor(c.dim, (UPPER, LOWER, LOWER, LOWER), curvature_array(c.jet(x)))


def ricci_array(R):
    return np.einsum("ttji->ji", R)


def ricci(R):
    """K_ji = K_tji^t from a mixed curvature tensor (h, k, j, i)."""
    arr = np.asarray(R)
    return ComponentTensor(arr.shape[0], (LOWER, LOWER), ricci_array(arr))


def scalar_curvature(ric, metric):
    ginv = metric.g_inv.components if isinstance(metric, MetricPair) else np.asarray(metric)
    return float(np.einsum("ji,ji->", ginv, np.asarray(ric)))


@dataclass(frozen=True, eq=False)
class CurvatureBundle:
    riemann: ComponentTensor
    riemann_cov: ComponentTensor
    ricci: ComponentTensor
    scalar: float


def curvature_bundle_arrays(lm, gamma_jet=None):
    if gamma_jet is None:
        gamma_jet = levi_civita_jet(lm)
    R = curvature_array(gamma_jet)
    Rcov = kernels.lower_curvature(R, lm.g)
    ric = ricci_array(R)
    return R, Rcov, ric, float(np.einsum("ji,ji->", lm.ginv, ric))


def curvature_bundle(g_field, x):
    lm = local_metric(g_field, x)
    R, Rcov, ric, K = curvature_bundle_arrays(lm)
    n = lm.n
    return CurvatureBundle(ComponentTensor(n, (UPPER, LOWER, LOWER, LOWER), R),
                           ComponentTensor(n, (LOWER,) * 4, Rcov),
                           ComponentTensor(n, (LOWER, LOWER), ric), K)


def riemann_symmetry_defects(Kcov):
    """Defects of the algebraic Riemann symmetries of an all-lower K[k, j, i, h]."""
    K = np.asarray(Kcov)
    return {
        "skew_first_pair": max_abs(K + np.transpose(K, (1, 0, 2, 3))),
        "skew_last_pair": max_abs(K + np.transpose(K, (0, 1, 3, 2))),
        "first_bianchi": max_abs(K + np.transpose(K, (1, 2, 0, 3)) + np.transpose(K, (2, 0, 1, 3))),
        "pair_symmetry": max_abs(K - np.transpose(K, (2, 3, 0, 1))),
    }


def covariant_derivative_array(val, der, signature, gamma):
    """nabla_j T for a tensor with the given slot variances; j appended last."""
    val = np.asarray(val)
    r = val.ndim
    slots = _SLOT_LETTERS[:r]
    out = np.array(der, dtype=np.float64, copy=True)
    for s, var in enumerate(signature):
        a = slots[s]
        replaced = slots[:s] + "z" + slots[s + 1:]
        if var == UPPER:
            out += np.einsum(f"{a}yz,{replaced}->{slots}y", gamma, val)
        else:
            out -= np.einsum(f"zy{a},{replaced}->{slots}y", gamma, val)
    return out


def covariant_derivative(t, c, x):
    val, der, _ = t.jets(x)
    gamma = c.jet(x).val
    arr = covariant_derivative_array(val, der, t.signature, gamma)
    return ComponentTensor(t.dim, t.signature + (LOWER,), arr)


# --- conformal baseline -------------------------------------------------

def gradient_jet(p_field, x):
    """p_i = d_i p as a TensorJet (value: gradient, partials: hessian)."""
    _, dp, ddp = p_field.jets(x)
    return TensorJet(dp, ddp)


def conformal_connection_jet(lm, pl):
    n = lm.n
    delta = TensorJet.constant(np.eye(n), n)
    pu = tj_einsum("ht,t->h", lm.ginv_jet(), pl)
    gam = levi_civita_jet(lm)
    gam = gam + tj_einsum("hj,i->hji", delta, pl) + tj_einsum("hi,j->hji", delta, pl)
    return gam - tj_einsum("ji,h->hji", lm.g_jet(), pu)


def conformal_connection_field(g_field, p_field):
    def coeffs(x):
        return conformal_connection_jet(local_metric(g_field, x), gradient_jet(p_field, x))

    return ConnectionField(g_field.dim, coeffs, True, "conformal")


def conformal_connection(g_field, p_field, x):
    """Gamma_ji^h = {h ji} + delta_j^h p_i + delta_i^h p_j - g_ji p^h."""
    gam = conformal_connection_jet(local_metric(g_field, x), gradient_jet(p_field, x))
    return ComponentTensor(g_field.dim, (UPPER, LOWER, LOWER), gam.val)


def conformal_metricity_residual(g_field, p_field, x):
    """max |D_k(e^{2p} g_ji)| for the conformal connection."""
    lm = local_metric(g_field, x)
    pv, dp, _ = p_field.jets(x)
    gam = conformal_connection_jet(lm, TensorJet(dp, p_field.jets(x)[2]))
    e2p = np.exp(2.0 * float(pv))
    val = e2p * lm.g
    der = e2p * (lm.dg + 2.0 * np.einsum("ji,k->jik", lm.g, dp))
    D = covariant_derivative_array(val, der, (LOWER, LOWER), gam.val)
    return max_abs(D)


def conformal_p_ji_array(lm, gamma_lc, dp, ddp):
    nabla_p = ddp - np.einsum("tji,t->ji", gamma_lc, dp)
    pu = lm.ginv @ dp
    return nabla_p - np.outer(dp, dp) + 0.5 * float(dp @ pu) * lm.g


def conformal_p_ji(g_field, p_field, x):
    """p_ji = nabla_j p_i - p_j p_i + 1/2 p_t p^t g_ji."""
    lm = local_metric(g_field, x)
    _, dp, ddp = p_field.jets(x)
    arr = conformal_p_ji_array(lm, levi_civita_jet(lm).val, dp, ddp)
    return ComponentTensor(lm.n, (LOWER, LOWER), arr)


def conformal_curvature_display(g_field, p_field, x, sign=CONFORMAL_DISPLAY_SIGN):
    """K_kji^h + s (delta_k^h p_ji - delta_j^h p_ki + p_k^h g_ji - p_j^h g_ki)."""
    lm = local_metric(g_field, x)
    _, dp, ddp = p_field.jets(x)
    gam = levi_civita_jet(lm)
    K = curvature_array(gam)
    pji = conformal_p_ji_array(lm, gam.val, dp, ddp)
    return K + sign * _kulkarni_mixed(np.eye(lm.n), pji, lm.g, lm.ginv)


def _kulkarni_mixed(delta, a, g, ginv):
    """delta_k^h a_ji - delta_j^h a_ki + a_k^h g_ji - a_j^h g_ki as [h, k, j, i]."""
    a_up = np.einsum("kt,th->hk", a, ginv)
    t = np.einsum("hk,ji->hkji", delta, a) + np.einsum("hk,ji->hkji", a_up, g)
    return t - np.transpose(t, (0, 2, 1, 3))


def weyl_array(R, ric, K, g, ginv):
    n = g.shape[0]
    if n < 3:
        raise DimensionError("Weyl tensor needs n >= 3")
    C = -ric / (n - 2) + K / (2.0 * (n - 1) * (n - 2)) * g
    return R + _kulkarni_mixed(np.eye(n), C, g, ginv)


def weyl(g_field, x):
    """Weyl conformal curvature C_kji^h as [h, k, j, i].

    Uses C_ji = -K_ji/(n-2) + K g_ji / (2(n-1)(n-2)), which makes C totally
    trace-free. Conformal flatness statements need n >= 4.
    """
    lm = local_metric(g_field, x)
    R, _, ric, K = curvature_bundle_arrays(lm)
    return ComponentTensor(lm.n, (UPPER, LOWER, LOWER, LOWER), weyl_array(R, ric, K, lm.g, lm.ginv))


def require_conformal_flatness_dim(n):
    if n < 4:
        raise DimensionError(f"conformal flatness via the Weyl tensor needs n >= 4, got {n}")

