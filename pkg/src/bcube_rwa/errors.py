"""Exception types shared by every module.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific one that applies.
"""


class BCubeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BCubeError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class CapacityError(BCubeError):
    """A size guardrail was exceeded; raise the cap explicitly to proceed."""


class VerificationError(BCubeError):
    """A claimed invariant failed when checked against explicit enumeration."""


class IntegrityError(VerificationError):
    """Input data (a path, a plan file) references elements that do not exist."""
