"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit with 2,
numerical failures with 3, resource limits with 4.
"""


class ValidationError(ValueError):
    """Bad input or a violated precondition."""


class InsufficientDataError(ValidationError):
    """Too few data points for the requested statistic."""


class ResourceLimitError(RuntimeError):
    """A configured size cap would be exceeded."""


class NumericalError(RuntimeError):
    """NaN/overflow or another numerical failure during evolution."""


class IntegratorInstabilityError(NumericalError):
    """Norm drift beyond the hard limit; the time step is too large."""
