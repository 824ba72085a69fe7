"""Shared exception types for library and CLI callers.

Library code raises these; only main.py turns them into exit codes, so a bad
parameter or an unreadable dataset never kills a long-running comparison
halfway through a table.
"""


class SsdLabError(Exception):
    """Base class for every recoverable failure raised by this package."""


class DomainError(SsdLabError, ValueError):
    """Raised when an argument lies outside the domain of an operation
    (negative x, u outside (0,1), invalid parameters, unknown model name)."""


class DivergenceError(DomainError):
    """Raised when a transform does not exist at the requested argument,
    e.g. the moment generating function at t >= theta."""


class DatasetError(SsdLabError):
    """Raised when a dataset cannot be ingested or violates the positivity
    contract. Carries the 1-based line number of the offending entry when
    one is known."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class FitError(SsdLabError):
    """Raised when maximum-likelihood fitting produces no usable estimate."""


class ConvergenceError(FitError):
    """Raised when an iterative estimator runs out of iterations. The last
    iterate is kept so callers can report or restart from it."""

    def __init__(self, message, last_iterate=None, iterations=0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations


class QuadratureError(SsdLabError):
    """Raised when adaptive quadrature exceeds its subdivision cap or
    reports a divergent integral."""


class ConfigError(SsdLabError):
    """Raised for invalid command-line configuration (bad grid, unknown
    model, malformed --params)."""
