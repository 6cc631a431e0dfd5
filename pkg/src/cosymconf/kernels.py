"""Dense curvature kernels.

Every kernel exists twice: an explicit-loop version compiled with numba and
an einsum version. The module-level names dispatch on
``COSYMCONF_DISABLE_NUMBA`` (see ``_accel``). Both versions are exposed as
``<name>_numba`` / ``<name>_numpy`` so they can be compared directly.

Index layout: connection coefficients are stored ``gamma[h, j, i]`` for
Gamma_ji^h, their partials as ``dgamma[h, j, i, k]`` = d_k Gamma_ji^h, and
mixed curvature as ``R[h, k, j, i]`` for R_kji^h.
"""

import numpy as np

from ._accel import USE_NUMBA, njit


@njit
def _riemann_loops(gamma, dgamma):
    n = gamma.shape[0]
    out = np.zeros((n, n, n, n))
    for h in range(n):
        for k in range(n):
            for j in range(n):
                for i in range(n):
                    acc = dgamma[h, j, i, k] - dgamma[h, k, i, j]
                    for t in range(n):
                        acc += gamma[h, k, t] * gamma[t, j, i] - gamma[h, j, t] * gamma[t, k, i]
                    out[h, k, j, i] = acc
    return out


def riemann_from_connection_numpy(gamma, dgamma):
    out = np.transpose(dgamma, (0, 3, 1, 2)) - np.transpose(dgamma, (0, 1, 3, 2))
    quad = np.einsum("hkt,tji->hkji", gamma, gamma)
    return out + quad - np.transpose(quad, (0, 2, 1, 3))


def riemann_from_connection_numba(gamma, dgamma):
    return _riemann_loops(np.ascontiguousarray(gamma, dtype=np.float64),
                          np.ascontiguousarray(dgamma, dtype=np.float64))


@njit
def _structured_loops(P, F, a, b, c, d):
    n = P.shape[0]
    out = np.empty((n, n, n, n))
    for k in range(n):
        for j in range(n):
            for i in range(n):
                for h in range(n):
                    out[k, j, i, h] = (
                        P[k, h] * a[j, i] - P[j, h] * a[k, i]
                        + a[k, h] * P[j, i] - a[j, h] * P[k, i]
                        + F[k, h] * b[j, i] - F[j, h] * b[k, i]
                        + b[k, h] * F[j, i] - b[j, h] * F[k, i]
                        + c[k, j] * F[i, h] + F[k, j] * d[i, h]
                    )
    return out


def structured_curvature_numpy(P, F, a, b, c, d):
    def wedge(x, y):
        t = np.einsum("kh,ji->kjih", x, y)
        return t - np.transpose(t, (1, 0, 2, 3))

    return (wedge(P, a) + wedge(a, P) + wedge(F, b) + wedge(b, F)
            + np.einsum("kj,ih->kjih", c, F) + np.einsum("kj,ih->kjih", F, d))


def structured_curvature_numba(P, F, a, b, c, d):
    args = [np.ascontiguousarray(x, dtype=np.float64) for x in (P, F, a, b, c, d)]
    return _structured_loops(*args)


structured_curvature_numpy.__doc__ = """All-lower 4-tensor X[k, j, i, h] built from 2-tensors::

    P_kh a_ji - P_jh a_ki + a_kh P_ji - a_jh P_ki
  + F_kh b_ji - F_jh b_ki + b_kh F_ji - b_jh F_ki
  + c_kj F_ih + F_kj d_ih

The Bochner display, the zero-curvature covariant form and the analytic
curvature of the cosymplectic conformal connection are all of this shape.
"""


@njit
def _lower_loops(R, g):
    n = g.shape[0]
    out = np.zeros((n, n, n, n))
    for k in range(n):
        for j in range(n):
            for i in range(n):
                for h in range(n):
                    acc = 0.0
                    for t in range(n):
                        acc += R[t, k, j, i] * g[t, h]
                    out[k, j, i, h] = acc
    return out


def lower_curvature_numpy(R, g):
    """R[t, k, j, i] g[t, h] -> X[k, j, i, h]."""
    return np.einsum("tkji,th->kjih", R, g)


def lower_curvature_numba(R, g):
    return _lower_loops(np.ascontiguousarray(R, dtype=np.float64),
                        np.ascontiguousarray(g, dtype=np.float64))


if USE_NUMBA:
    riemann_from_connection = riemann_from_connection_numba
    structured_curvature = structured_curvature_numba
    lower_curvature = lower_curvature_numba
else:
    riemann_from_connection = riemann_from_connection_numpy
    structured_curvature = structured_curvature_numpy
    lower_curvature = lower_curvature_numpy
