"""Exception hierarchy shared by every module.

Each class maps onto one CLI exit code, see ``quditverify.cli``.
"""


class QuditVerifyError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(QuditVerifyError, ValueError):
    """Input violates a documented precondition."""


class CapacityError(QuditVerifyError):
    """Total Hilbert-space dimension exceeds the configured cap."""


class DomainError(QuditVerifyError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class UnsupportedError(QuditVerifyError, NotImplementedError):
    """Requested feature or family has no implementation."""


class InternalError(QuditVerifyError, RuntimeError):
    """An internal invariant was breached."""
