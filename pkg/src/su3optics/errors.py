"""Exception types shared across the package."""


class Su3OpticsError(Exception):
    """Base class for all package errors."""


class DomainError(Su3OpticsError):
    """Invalid argument value (out-of-range angle, bad normalization, ...)."""


class DimensionMismatchError(DomainError):
    """Operator and state do not share a basis dimension."""


class TruncationError(Su3OpticsError):
    """Requested amplitude cannot be represented at the given cutoff.

    Carries the offending per-mode tail mass in `tail_mass` and the mode
    index in `mode`.
    """

    def __init__(self, message, tail_mass=None, mode=None):
        super().__init__(message)
        self.tail_mass = tail_mass
        self.mode = mode


class CapacityError(Su3OpticsError):
    """A computation would exceed the configured basis-size budget."""


class UndefinedStatisticError(Su3OpticsError):
    """A statistic has no value on this input (zero trace, empty support)."""
