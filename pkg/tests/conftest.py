import numpy as np
import pytest

from cosymconf import kernels

# filled by test_acceptance; printed after the run so the lines survive capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def algebraic_curvature(n, rng, terms=2):
    """Random all-lower tensor with the Riemann symmetries (sum of Kulkarni-Nomizu products)."""
    K = np.zeros((n, n, n, n))
    z = np.zeros((n, n))
    for _ in range(terms):
        A = rng.normal(size=(n, n))
        B = rng.normal(size=(n, n))
        K += kernels.structured_curvature_numpy(A + A.T, z, B + B.T, z, z, z)
    return K


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240611))
