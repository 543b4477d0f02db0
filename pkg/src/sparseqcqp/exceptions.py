"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes: ``InputError`` -> 2,
``BudgetError`` -> 3, ``NumericalError`` (and subclasses) -> 4.
"""


class SparseQcqpError(Exception):
    """Base class for all package errors."""


class InputError(SparseQcqpError, ValueError):
    """Malformed or inconsistent caller input (shapes, flags, files)."""


class BudgetError(SparseQcqpError, RuntimeError):
    """An enumeration or resource limit would be exceeded."""


class NumericalError(SparseQcqpError, RuntimeError):
    """A numerical procedure failed at runtime."""


class SingularPivotError(NumericalError):
    """A pivot fell below the relative tolerance during elimination."""


class InfeasibleSupportError(NumericalError):
    """The constraint matrix restricted to a support is not positive definite."""


class DegenerateDesignError(NumericalError):
    """A design matrix carries no usable mass for the requested support."""


class ZeroPolynomialError(NumericalError):
    """A restricted polynomial vanished identically."""


class ExhaustedSupportError(NumericalError):
    """Every remaining candidate index was rejected during a greedy round."""

    def __init__(self, message, partial_support=()):
        super().__init__(message)
        self.partial_support = tuple(partial_support)
