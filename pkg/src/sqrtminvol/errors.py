"""Exception types shared across the package.

The split matters for the command-line tools: input and configuration
problems exit with code 2, numerical breakdowns with code 3.
"""


class SqrtMinvolError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SqrtMinvolError, ValueError):
    """A data argument violates a precondition (shape, finiteness, sign)."""


class InvalidParameterError(SqrtMinvolError, ValueError):
    """A scalar parameter is out of its admissible range."""


class NotPositiveDefiniteError(SqrtMinvolError, ArithmeticError):
    """A matrix required to be positive definite is not.

    Raised when a Cholesky pivot is non-positive.  Callers must surface
    this; silently regularizing would hide that delta was set too small.
    """


class DegenerateDenominatorError(SqrtMinvolError, ArithmeticError):
    """A denominator in a scaling formula is numerically zero."""


class UndefinedMetricError(SqrtMinvolError, ValueError):
    """A metric is undefined for the given reference (e.g. zero norm)."""


class NumericalFaultError(SqrtMinvolError, ArithmeticError):
    """A solver produced a non-finite quantity.

    Carries whatever per-iteration trace existed when the fault was
    detected so the caller can flush it before exiting.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
