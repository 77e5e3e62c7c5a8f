"""Exception types shared across the package."""

from __future__ import annotations


class MinreachError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MinreachError):
    """A value fails validation: wrong type, non-finite, out of range."""


class DimensionError(InputError):
    """Array shapes are inconsistent with each other or with the system."""


class CapacityError(InputError):
    """An exhaustive routine was asked to exceed its hard size cap."""


class NumericalInfeasibilityError(MinreachError):
    """A requested tolerance cannot be met in floating point.

    Raised when a selection routine has exhausted every candidate index
    (or found no candidate with positive gain) while the residual still
    exceeds the requested threshold.
    """

    def __init__(self, message: str, residual_sq: float | None = None):
        super().__init__(message)
        self.residual_sq = residual_sq


class UnsupportedOperationError(MinreachError):
    """The operation is not defined for this system variant."""
