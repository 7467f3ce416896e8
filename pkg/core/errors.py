# core/errors.py
"""
Exception hierarchy for the monotone hierarchy toolkit.

Every error raised on purpose by the library derives from MonoHierError so the
CLI can map it to an exit code in one place.
"""

from typing import Optional, Tuple


class MonoHierError(Exception):
    """Base class for all library errors."""


class ConfigError(MonoHierError, ValueError):
    """Invalid or out-of-range configuration value."""


class InvalidPartitionError(MonoHierError, ValueError):
    """Blocks do not form a partition of {1..n}."""


class CrossingPartitionError(MonoHierError, ValueError):
    """Depth and inner-block counts are only defined for non-crossing partitions."""


class ProfileError(MonoHierError, ValueError):
    """Support profile malformed or inconsistent with a pair partition."""


class WordSyntaxError(MonoHierError, ValueError):
    """A word or profile string could not be parsed."""


class UnknownAlgebraError(MonoHierError, KeyError):
    """A letter references an algebra index that is not registered."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message instead
        return str(self.args[0]) if self.args else ""


class MarginalOrderError(MonoHierError, ValueError):
    """Marginal moments are missing, or their Hankel matrix is not positive semidefinite."""


class BasisTooLargeError(MonoHierError):
    """Product-space basis would exceed the configured cap."""

    def __init__(self, dimension: int, cap: int):
        super().__init__(f"product space dimension {dimension} exceeds the basis cap {cap}")
        self.dimension = dimension
        self.cap = cap


class OrderCapError(MonoHierError, ValueError):
    """Requested order exceeds a hard or configured limit."""


class TruncationError(MonoHierError, ValueError):
    """A truncated model is too shallow for the requested moment."""


class BranchCutError(MonoHierError, ValueError):
    """Cauchy transform requested on its branch cut without a side."""


class RootSearchError(MonoHierError):
    """Bracketed root refinement did not converge."""

    def __init__(self, message: str, bracket: Optional[Tuple[float, float]] = None):
        if bracket is not None:
            message = f"{message} (bracket [{bracket[0]!r}, {bracket[1]!r}])"
        super().__init__(message)
        self.bracket = bracket


class UnsupportedOverlapError(MonoHierError):
    """Fock inner product requested outside the factorising case."""
