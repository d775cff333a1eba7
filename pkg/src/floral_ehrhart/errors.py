"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class FloralError(Exception):
    """Base class for all errors raised by this package."""


class DimensionCapExceeded(FloralError, ValueError):
    pass


class ComplementOfIdentity(FloralError, ValueError):
    pass


class LengthMismatch(FloralError, ValueError):
    pass


class TableMismatch(FloralError, ValueError):
    pass


class InputError(FloralError, ValueError):
    """Malformed or unusable voxel input."""


class EmptyInput(InputError):
    pass


class DimensionOutOfRange(InputError):
    pass


class RaggedTuple(InputError):
    pass


class CellNotInP(FloralError, ValueError):
    pass


class NotGeneric(FloralError):
    """A cell of the input has a tangent cone that is not read-once."""

    def __init__(self, anchor: tuple[int, ...], directions: tuple[int, ...], arity: int, mask: int):
        self.anchor = anchor
        self.directions = directions
        self.arity = arity
        self.mask = mask
        width = 1 << arity
        super().__init__(
            f"not a generic orthotope: cell anchor={anchor} directions={list(directions)} "
            f"occupancy={mask:0{width}b} (arity {arity})"
        )


class NonFloralPointInDilate(FloralError):
    pass


class GenerationFailed(FloralError):
    pass


class NonIntegralResult(FloralError, ArithmeticError):
    pass


class IdentityFailed(FloralError, AssertionError):
    """Two independent computations of the same quantity disagree."""
