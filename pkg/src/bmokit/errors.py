"""Exception types shared across the package."""


class BMOError(Exception):
    """Base class for all package errors."""


class DomainError(BMOError, ValueError):
    """An argument lies outside the domain of an operation."""


class SingularityError(DomainError):
    """A kernel was evaluated exactly at its pole."""


class NumericalAbort(BMOError, ArithmeticError):
    """A quadrature met a non-finite integrand value."""
