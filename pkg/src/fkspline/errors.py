"""Exception types shared across the package.

Input-validation errors subclass ValueError so callers that only know the
stdlib can still catch them; numerical and data failures get their own
branches because the command line maps them to distinct exit codes.
"""


class FkSplineError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FkSplineError, ValueError):
    """Inconsistent or out-of-range configuration."""


# ---------------------------------------------------------------------------
# basis / evaluation


class OrderTooSmallError(ConfigError):
    """Spline order below 1."""


class NonIncreasingKnotsError(ConfigError):
    """Interior knots not strictly increasing (or touching the boundary)."""


class KnotOutOfDomainError(ConfigError):
    """Interior knot outside the open domain interval."""


class PointOutOfDomainError(ConfigError):
    """Evaluation point outside the closed domain interval."""


# Some call sites validate the sample grid rather than a single point; the
# condition is the same, keep one class under both names.
DomainError = PointOutOfDomainError


class DerivativeOrderTooHighError(ConfigError):
    """Requested derivative order >= spline order."""


class CoefficientLengthMismatchError(ConfigError):
    """Coefficient vector length differs from the basis dimension."""


class SpecMismatchError(ConfigError):
    """Objects built from different basis specifications were combined."""


class EmptyIntervalError(ConfigError):
    """Integration or tail interval with nonpositive length."""


class NonFiniteInputError(ConfigError):
    """NaN or infinity in numeric input."""


class LengthMismatchError(ConfigError):
    """Paired sequences of different lengths."""


class UnknownGroupError(ConfigError):
    """Scenario group id outside the catalogue."""


class TooFewCurvesError(ConfigError):
    """Fewer curves than requested clusters."""


# ---------------------------------------------------------------------------
# data / ingest


class DataError(FkSplineError):
    """Base class for problems with input data files."""


class ParseError(DataError):
    """Malformed CSV cell; carries 1-based row and column indices."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class DuplicateCellError(DataError):
    """Same (series, time) pair appears twice in a long-layout file."""


class EmptyTableError(DataError):
    """No usable series or no time points after parsing."""


class ZeroVarianceError(DataError):
    """Series with zero sample standard deviation cannot be standardized."""


# ---------------------------------------------------------------------------
# numerics


class NumericalError(FkSplineError):
    """Base class for numerical failures."""


class NotPositiveDefiniteError(NumericalError):
    """System matrix has a nonpositive Cholesky pivot."""


class DegenerateDenominatorError(NumericalError):
    """Effective degrees of freedom reached the sample size; GCV undefined."""


class AllCandidatesSingularError(NumericalError):
    """Every candidate knot in a search round failed to produce a fit."""


class AllCellsFailedError(NumericalError):
    """Every cell of a regularization grid failed to produce a score."""
