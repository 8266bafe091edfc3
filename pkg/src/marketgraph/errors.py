"""Exception types raised across the package."""


class MarketGraphError(Exception):
    """Base class for all errors raised by marketgraph."""


class DimensionError(MarketGraphError):
    """Input shapes are inconsistent with the declared node/edge counts."""


class ParameterError(MarketGraphError):
    """A configuration value violates its contract (e.g. nu <= 2, k >= p)."""


class DataError(MarketGraphError):
    """Input data violates a precondition (nonpositive price, zero variance...)."""


class DegenerateInputError(DataError):
    """Numerically rank-zero input where a nontrivial factor is required."""


class NumericalError(MarketGraphError):
    """A numerical routine (eigendecomposition, ...) failed."""


class DivergenceError(NumericalError):
    """Solver produced non-finite iterates.

    Carries the outer iteration index at which divergence was detected.
    """

    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at outer iteration {iteration}")


class EvaluationError(MarketGraphError):
    """A monitored quantity could not be evaluated at the given state."""
