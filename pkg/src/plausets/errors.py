"""Exception types shared across the package.

The CLI maps DomainError (and plain ValueError) to exit code 2 and
ConvergenceError to exit code 3.
"""


class PlausetsError(Exception):
    """Base class for package errors."""


class DomainError(PlausetsError, ValueError):
    """Input outside the documented domain of an operation."""


class ConvergenceError(PlausetsError, RuntimeError):
    """An iterative solver failed to converge."""
