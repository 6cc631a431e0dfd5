import numpy as np
import pytest

from cosymconf import contact
from cosymconf.catalog import COSYMPLECTIC_IDS, get_entry
from cosymconf.chart import constant_field
from cosymconf.errors import LookupFailure, StructureError


@pytest.mark.parametrize("mid", COSYMPLECTIC_IDS)
def test_catalog_structures_are_cosymplectic(mid):
    e = get_entry(mid)
    pts = e.sample(8, 3)
    s = e.structure
    assert contact.validate_structure(s, pts).passed
    assert contact.normality_report(s, pts).passed
    assert contact.cosymplectic_residuals(s, pts).passed


def test_twisted_structure_is_valid_but_not_normal():
    e = get_entry("twisted-r3")
    pts = e.sample(10, 0)
    assert contact.validate_structure(e.structure, pts).passed
    rep = contact.normality_report(e.structure, pts)
    assert rep["normality"].residual > 1e-3
    assert not contact.cosymplectic_residuals(e.structure, pts)["nabla_phi"].passed


def test_rescaled_structure_is_not_cosymplectic():
    e = get_entry("rescaled-flat-m1")
    pts = e.sample(10, 0)
    assert contact.validate_structure(e.structure, pts).passed
    rep = contact.cosymplectic_residuals(e.structure, pts)
    assert not rep.passed
    assert rep["d_eta"].residual > 1e-3


def test_nijenhuis_vanishes_on_flat_model():
    e = get_entry("flat-cosym-m2")
    assert contact.nijenhuis(e.structure, np.zeros(5)).max_abs() == 0.0


def test_bad_dimensions():
    g2 = constant_field(np.eye(2), ("l", "l"))
    phi2 = constant_field(np.zeros((2, 2)), ("u", "l"))
    v2 = constant_field(np.zeros(2), ("u",))
    w2 = constant_field(np.zeros(2), ("l",))
    with pytest.raises(StructureError):
        contact.AlmostContactMetricStructure(phi2, v2, w2, g2, 1)
    e = get_entry("flat-cosym-m1")
    with pytest.raises(StructureError):
        contact.AlmostContactMetricStructure(e.phi, e.xi, e.eta, e.metric, 2)


def test_metric_only_entry_has_no_structure():
    with pytest.raises(LookupFailure):
        get_entry("conf-flat-7-gauss").structure


def test_broken_phi_is_reported():
    e = get_entry("flat-cosym-m1")
    bad = constant_field(np.diag([1.0, 1.0, 0.0]), ("u", "l"))
    s = contact.AlmostContactMetricStructure(bad, e.xi, e.eta, e.metric, 1)
    rep = contact.validate_structure(s, e.sample(2, 0))
    assert rep["phi_squared"].residual == pytest.approx(2.0)
    assert not rep.passed
