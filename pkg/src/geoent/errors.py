"""Exception types shared across the package."""


class GeoentError(Exception):
    """Base class for all geoent errors."""


class DomainError(GeoentError, ValueError):
    """Invalid argument values (out-of-range qubit counts, bad norms, ...)."""


class DimensionMismatch(DomainError):
    """Target state and product parameters disagree on the qubit count."""


class SymmetryError(DomainError):
    """Operation requires a permutation-invariant target state."""


class NumericalError(GeoentError, RuntimeError):
    """Numerical failure (non-finite values, eigensolver non-convergence)."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class MultistartError(GeoentError, RuntimeError):
    """No start of a multistart run converged."""
