import math

import numpy as np
import pytest

from cosymconf import jet as J
from cosymconf import riemann as R
from cosymconf.catalog import get_entry, get_p
from cosymconf.chart import ChartField, constant_field
from cosymconf.errors import DimensionError
from cosymconf.tensor import LOWER


def sphere_closed_form(r, theta):
    g = np.diag([r * r, r * r * math.sin(theta) ** 2])
    K = (np.einsum("kh,ji->kjih", g, g) - np.einsum("jh,ki->kjih", g, g)) / (r * r)
    return g, K


def test_sphere_christoffels():
    e = get_entry("round-s2-r1")
    th = math.pi / 3
    G = R.christoffel(e.metric, [th, 0.7]).components
    assert G[0, 1, 1] == pytest.approx(-math.sin(th) * math.cos(th), abs=1e-14)
    assert G[1, 0, 1] == pytest.approx(1 / math.tan(th), abs=1e-14)
    assert G[1, 1, 0] == G[1, 0, 1]
    assert G[0, 0, 0] == 0.0


@pytest.mark.parametrize("r", [1.0, 2.0])
def test_sphere_curvature_closed_form(r):
    e = get_entry(f"round-s2-r{r:g}")
    th = 1.1
    b = R.curvature_bundle(e.metric, [th, 0.2])
    g, K = sphere_closed_form(r, th)
    assert np.allclose(b.riemann_cov.components, K, atol=1e-12)
    assert np.allclose(b.ricci.components, g / (r * r), atol=1e-12)
    assert b.scalar == pytest.approx(2 / r ** 2, rel=1e-12)


def test_product_scalar_and_flat():
    e = get_entry("s2xs2xs2xr-111")
    x = e.sample(1, 5)[0]
    assert R.curvature_bundle(e.metric, x).scalar == pytest.approx(6.0, rel=1e-12)
    e123 = get_entry("s2xs2xs2xr-123")
    assert R.curvature_bundle(e123.metric, x).scalar == pytest.approx(2 * (1 + 1 / 4 + 1 / 9),
                                                                     rel=1e-12)
    flat = get_entry("flat-cosym-m3")
    assert R.curvature_bundle(flat.metric, np.zeros(7)).riemann.max_abs() == 0.0


@pytest.mark.parametrize("mid", ["s2xs2xs2xr-123", "conf-flat-7-gauss", "round-s2-r2"])
def test_riemann_symmetries_of_levi_civita(mid):
    e = get_entry(mid)
    for x in e.sample(5, 1):
        K = R.curvature_bundle(e.metric, x).riemann_cov.components
        scale = max(np.abs(K).max(), 1.0)
        assert max(R.riemann_symmetry_defects(K).values()) < 1e-12 * scale


def test_levi_civita_is_metric_and_torsion_free():
    e = get_entry("s2xs2xs2xr-123")
    x = e.sample(1, 3)[0]
    c = R.levi_civita(e.metric)
    D = R.covariant_derivative(e.metric, c, x)
    assert D.signature == (LOWER, LOWER, LOWER)
    assert D.max_abs() < 1e-12
    assert np.abs(R.torsion(c.gamma(x).components)).max() < 1e-15


def test_covariant_derivative_of_constant_scalar():
    e = get_entry("round-s2-r1")
    c = ChartField(np.array(J.Const(3.0), dtype=object), (), dim=2)
    D = R.covariant_derivative(c, R.levi_civita(e.metric), [1.0, 1.0])
    assert D.max_abs() == 0.0


def test_conformal_connection_parallelizes_rescaled_metric():
    e = get_entry("conf-flat-7-gauss")
    base, p = e.conformal_base, e.conformal_p
    for x in e.sample(5, 2):
        assert R.conformal_metricity_residual(base, p, x) < 1e-12
        # the conformal connection of (delta, p) is Levi-Civita of e^{2p} delta
        lc = R.christoffel(e.metric, x).components
        assert np.allclose(R.conformal_connection(base, p, x).components, lc, atol=1e-14)


def test_conformal_display_sign():
    # the assembly holds with the minus sign; the plus sign visibly fails
    e = get_entry("conf-flat-7-gauss")
    base, p = e.conformal_base, e.conformal_p
    x = e.sample(1, 0)[0]
    direct = R.curvature_of_connection(R.conformal_connection_field(base, p), x).components
    minus = R.conformal_curvature_display(base, p, x, sign=-1.0)
    plus = R.conformal_curvature_display(base, p, x, sign=1.0)
    scale = np.abs(direct).max()
    assert np.abs(direct - minus).max() < 1e-12 * scale
    assert np.abs(direct - plus).max() > 1e-2 * scale


def test_conformal_display_on_curved_base():
    e = get_entry("s2xs2xs2xr-111")
    p = get_p(e.id, "gaussian-horizontal")
    x = e.sample(1, 9)[0]
    direct = R.curvature_of_connection(R.conformal_connection_field(e.metric, p), x).components
    disp = R.conformal_curvature_display(e.metric, p, x)
    assert np.abs(direct - disp).max() < 1e-10 * np.abs(direct).max()


def test_weyl():
    e = get_entry("conf-flat-7-gauss")
    for x in e.sample(3, 4):
        C = R.weyl(e.metric, x).components
        assert np.abs(C).max() < 1e-12
    prod = get_entry("s2xs2xs2xr-111")
    C = R.weyl(prod.metric, prod.sample(1, 0)[0]).components
    assert np.abs(C).max() > 0.1
    assert np.abs(np.einsum("ttji->ji", C)).max() < 1e-12
    with pytest.raises(DimensionError):
        R.weyl(get_entry("round-s2-r1").metric, [1.0, 1.0])
    with pytest.raises(DimensionError):
        R.require_conformal_flatness_dim(3)


def test_p_ji_of_linear_p_on_flat_space():
    # nabla p = 0, so p_ji = -p_j p_i + 1/2 |dp|^2 delta
    g = constant_field(np.eye(4), ("l", "l"))
    x = J.coords(4)
    p = ChartField(np.array(x[0] * 2.0, dtype=object), (), dim=4)
    pji = R.conformal_p_ji(g, p, np.zeros(4)).components
    want = -np.outer([2, 0, 0, 0], [2, 0, 0, 0]) + 2.0 * np.eye(4)
    assert np.allclose(pji, want)
