"""Exception hierarchy shared by all modules.

Each class maps to one CLI exit code so callers can distinguish parse,
validation, numerical and resource failures programmatically.
"""


class SpinQfiError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class SpecError(SpinQfiError):
    """A state-spec or config document could not be parsed."""

    exit_code = 2


class ValidationError(SpinQfiError):
    """Inputs parse but violate a documented precondition or invariant."""

    exit_code = 3


class NumericalError(SpinQfiError):
    """A numerical contract failed (hermiticity, convergence, residues)."""

    exit_code = 4


class DimensionCapError(SpinQfiError):
    """Requested Hilbert-space dimension exceeds the configured cap."""

    exit_code = 5
