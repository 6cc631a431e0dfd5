import numpy as np
import pytest
from conftest import algebraic_curvature
from hypothesis import given, settings
from hypothesis import strategies as st

from cosymconf import bochner as B
from cosymconf import kernels
from cosymconf.catalog import get_entry, standard_phi
from cosymconf.errors import DimensionError, InvalidInputError


def flat_model(m):
    n = 2 * m + 1
    eta = np.zeros(n)
    eta[-1] = 1.0
    return standard_phi(m), eta, eta.copy(), np.eye(n)


def inputs_for(K, m):
    phi, xi, eta, g = flat_model(m)
    return B.inputs_from_curvature(K, phi, xi, eta, g, m)


def test_flat_model_gives_zero():
    inp = inputs_for(np.zeros((7,) * 4), 3)
    parts = B.bochner_parts(inp)
    assert not parts.L_ji.any() and not parts.M_ji.any() and not parts.B_cov.any()
    assert B.bochner_tensor(inp).max_abs() == 0.0


def test_product_manifold_identities():
    e = get_entry("s2xs2xs2xr-111")
    rep = B.bochner_identity_suite(e.structure, e.sample(10, 0))
    assert rep.passed
    assert rep["phi_trace"].interpreted
    inp = B.inputs_at(e.structure, e.sample(1, 0)[0])
    assert B.bochner_tensor(inp).max_abs() > 0.1


def test_mixed_and_covariant_forms_agree():
    e = get_entry("s2xs2xs2xr-123")
    inp = B.inputs_at(e.structure, e.sample(1, 2)[0])
    mixed = B.bochner_tensor(inp).components
    cov = B.bochner_tensor_cov(inp).components
    assert np.allclose(np.einsum("hkji,ht->kjit", mixed, inp.g), cov, atol=1e-13)


def test_rejects_curvature_without_riemann_symmetries(rng):
    K = rng.normal(size=(7,) * 4)
    with pytest.raises(InvalidInputError):
        B.bochner_tensor(inputs_for(K, 3))


def test_rejects_inconsistent_scalar(rng):
    inp = inputs_for(algebraic_curvature(7, rng), 3)
    bad = B.BochnerInputs(inp.K_cov, inp.ricci, inp.scalar + 1.0, inp.phi, inp.xi, inp.eta,
                          inp.g, inp.ginv, inp.m)
    with pytest.raises(InvalidInputError):
        B.bochner_tensor(bad)


def phi_invariant(rng, m=3):
    n = 2 * m + 1
    phi = standard_phi(m)
    P = np.eye(n)
    P[-1, -1] = 0.0
    S = rng.normal(size=(n, n))
    S = P @ (S + S.T) @ P
    return S - phi @ S @ phi


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_curvature_conditional_identities(seed):
    rng = np.random.default_rng(seed)
    rep = B.bochner_identities_from_inputs([inputs_for(algebraic_curvature(7, rng), 3)])
    for name in B.UNCONDITIONAL:
        assert rep[name].passed, name
    # generic curvature: Ricci neither horizontal nor phi-commuting
    for name in ("skew_kj", "pair_symmetry", "M_skew", "eta_trace", "L_eta"):
        assert not rep[name].passed, name


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_phi_compatible_curvature_satisfies_listed_identities(seed):
    rng = np.random.default_rng(seed)
    z = np.zeros((7, 7))
    K = sum(kernels.structured_curvature_numpy(phi_invariant(rng), z, phi_invariant(rng), z, z, z)
            for _ in range(2))
    rep = B.bochner_identities_from_inputs([inputs_for(K, 3)])
    gating = [r for r in rep.records if not r.interpreted]
    assert all(r.passed for r in gating), rep.summary_lines()
    assert set(B.CONDITIONS) | set(B.UNCONDITIONAL) == set(rep.names())


def test_horizontal_random_curvature_satisfies_eta_identities(rng):
    K = algebraic_curvature(7, rng)
    K[-1] = K[:, -1] = K[:, :, -1] = K[:, :, :, -1] = 0.0
    rep = B.bochner_identities_from_inputs([inputs_for(K, 3)])
    for name in ("eta_trace", "L_eta", "M_eta"):
        assert rep[name].passed


def test_linear_in_curvature(rng):
    K1, K2 = algebraic_curvature(7, rng), algebraic_curvature(7, rng)
    b = [B.bochner_parts(inputs_for(K, 3)).B_cov for K in (K1, K2, K1 + K2)]
    assert np.allclose(b[0] + b[1], b[2], atol=1e-12)


def test_synthesis_invariants_and_errors():
    d = B.synthesize_zero_curvature(3, 1)
    inv = B.synthetic_invariants(d)
    assert max(np.abs(v).max() for v in inv.values()) < 1e-12
    assert np.abs(inv["p_phi_commute"]).max() <= 1e-14
    assert np.abs(inv["q_skew"]).max() <= 1e-14
    assert np.trace(d.p_ji) < 0 and d.lam > 0 and d.L > 0
    with pytest.raises(DimensionError):
        B.synthesize_zero_curvature(2, 0)


def test_synthesis_is_seeded():
    a, b = B.synthesize_zero_curvature(4, 9), B.synthesize_zero_curvature(4, 9)
    assert np.array_equal(a.p_ji, b.p_ji)
    assert not np.array_equal(a.p_ji, B.synthesize_zero_curvature(4, 10).p_ji)


def test_isotropic_case():
    m = 3
    P = np.eye(7)
    P[-1, -1] = 0.0
    d = B.zero_curvature_from_p(m, -0.8 * P)
    K = B.zero_curvature_K(d)
    assert max(B.riemann_symmetry_defects(K).values()) < 1e-14
    parts = B.bochner_parts(inputs_for(K, m))
    assert np.abs(parts.B_cov).max() < 1e-12 * np.abs(K).max()


@pytest.mark.parametrize("m", [3, 4, 5])
def test_theorem_oracle(m):
    rep = B.theorem_oracle(m, 20, 7)
    assert rep.passed, rep.summary_lines()
    assert rep["bochner_vanishes"].residual < 1e-10


def test_oracle_failure_is_reported_not_raised():
    rep = B.theorem_oracle(3, 4, 11, tol_overrides={"bochner_vanishes": 0.0})
    assert not rep.passed
    rec = rep["bochner_vanishes"]
    assert "seed" in rec.note
    assert rep.notes["failing_seeds"]["bochner_vanishes"] in range(11, 15)
