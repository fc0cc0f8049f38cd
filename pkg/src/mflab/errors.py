"""Shared exception types.

Every error raised by the library maps onto one of the CLI's machine-parsable
kinds (``usage``, ``capacity``, ``coverage``, ``domain``, ``singular``).
"""


class MFLabError(Exception):
    """Base class for all library errors."""

    kind = "error"


class EmptyRangeError(MFLabError):
    """Requested range is empty (e.g. sieve limit below 2)."""

    kind = "usage"


class CapacityError(MFLabError):
    """Request exceeds a configured ceiling (memory / representable range)."""

    kind = "capacity"


class CoverageError(MFLabError):
    """A table or trace does not cover the requested range."""

    kind = "coverage"


class DomainError(MFLabError):
    """Argument outside the mathematical domain of the operation."""

    kind = "domain"


class SingularFactorError(MFLabError):
    """Euler factor too close to zero for a principal logarithm."""

    kind = "singular"


class FunctionSpecError(MFLabError):
    """Unparsable or unknown function specification string."""

    kind = "usage"
