"""Exception types shared across the package."""


class RHVerifyError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RHVerifyError, ValueError):
    """An enclosure touches a point where the function is undefined."""


class PrecisionError(RHVerifyError):
    """The working precision is too low to produce a meaningful enclosure."""


class ValidationError(RHVerifyError, ValueError):
    """Malformed or inconsistent input data (descriptors, zeros files, parameters)."""


class DataError(RHVerifyError, LookupError):
    """Coefficient data needed for a computation is missing."""
