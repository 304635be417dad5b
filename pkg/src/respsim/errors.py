"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: InputError -> 2, ResourceError -> 3,
StatisticalFailure -> 4.
"""


class RespsimError(Exception):
    """Base class for package errors."""


class InputError(RespsimError):
    """Invalid or inconsistent input (bad file, broken symmetry, bad window)."""


class ResourceError(RespsimError):
    """A configured resource cap was exceeded (qubit count, polynomial degree)."""


class StatisticalFailure(RespsimError):
    """A stochastic protocol ended without a usable result."""
