"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best estimate and its error bound are kept on the exception so callers
    can report them.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf"), subdivisions=0):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.subdivisions = subdivisions


class ConvergenceError(ArithmeticError):
    """An iterative solver exhausted its budget; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConsistencyError(ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""
