"""Numerical verification of cosymplectic conformal connections.

Chart-level tensor calculus with exact second-order jets, almost contact and
cosymplectic structure checks, the cosymplectic conformal connection of an
admissible scalar, the cosymplectic Bochner tensor, and a zero-curvature
oracle. ``python -m cosymconf --help`` lists the command-line verbs.
"""

from ._accel import backend_name
from .bochner import (BochnerInputs, SyntheticZeroCurvatureData, bochner_identity_suite,
                      bochner_tensor, synthesize_zero_curvature, theorem_oracle)
from .catalog import get_entry, get_p, list_catalog
from .chart import ChartField, ChartPoint, SampleSpec, sample
from .contact import (AlmostContactMetricStructure, cosymplectic_residuals, nijenhuis,
                      normality_residual, validate_structure)
from .cosym import (admissible_p, compatibility_residuals, cosym_conformal_connection,
                    cosym_conformal_gamma, curvature_analytic, curvature_crosscheck,
                    identity_suite, second_level_tensors)
from .report import IdentityRecord, IdentityReport
from .riemann import (christoffel, conformal_connection, covariant_derivative, curvature_bundle,
                      curvature_of_connection, levi_civita, ricci, scalar_curvature, weyl)
from .suites import RunConfig, run_suite, tensor_dump
from .tensor import ComponentTensor, MetricPair, contract, lower_index, raise_index

__version__ = "0.1.0"
