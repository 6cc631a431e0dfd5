"""Exception hierarchy.

Validation problems (identity residuals above tolerance) are reported, not
raised. Only structural impossibilities end up here.
"""


class CosymError(Exception):
    """Base class for all package errors."""


class VarianceError(CosymError):
    """Slot variances do not allow the requested operation."""


class BoundsError(CosymError, IndexError):
    pass


class ShapeError(CosymError, ValueError):
    pass


class NumericError(CosymError, ArithmeticError):
    """A non-finite value appeared during evaluation."""


class DomainError(CosymError, ValueError):
    """Evaluation point lies in a declared excluded set or a primitive's singular set."""


class InversionError(CosymError, ArithmeticError):
    """Metric is singular or not positive definite."""


class SamplingExhaustedError(CosymError, RuntimeError):
    pass


class StructureError(CosymError, ValueError):
    """Almost contact data with inconsistent dimensions."""


class AdmissibilityError(CosymError, ValueError):
    """Scalar p depends on the Reeb direction."""


class DimensionError(CosymError, ValueError):
    pass


class InvalidInputError(CosymError, ValueError):
    """Curvature input violates the Riemann symmetries."""


class LookupFailure(CosymError, KeyError):
    """Unknown catalog, p-function, suite or tensor id."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UsageError(CosymError, ValueError):
    """Bad command-line or run-configuration input (exit status 2)."""
