"""Exception types shared across the package."""

from __future__ import annotations


class PlanesysError(Exception):
    """Base class for every error this package raises deliberately.

    ``partial_trace`` carries the reduction steps completed before the
    failure, when a multi-step operation aborts midway.
    """

    partial_trace: list | None = None


class NonPositiveDegreeError(PlanesysError, ValueError):
    """Degree of a linear system must be a positive integer."""


class NegativeMultiplicityError(PlanesysError, ValueError):
    """A multiplicity became (or was given as) a negative integer."""


class MagnitudeError(PlanesysError, OverflowError):
    """Input exceeds the supported desk-scale magnitude.

    All arithmetic is exact; this guard only rejects inputs so large that
    "desk scale" no longer describes them, instead of silently accepting
    them.
    """


class DegenerateDegreeError(PlanesysError, ValueError):
    """A quadratic transformation would drop the degree below one."""


class InsufficientSimplePointsError(PlanesysError, ValueError):
    """Too few simple points for the rewrite that absorbs 2*m1 + 1 of them."""


class DegreeBoundError(PlanesysError, ValueError):
    """Degree too small to raise the top multiplicity by one."""


class PreconditionError(PlanesysError, ValueError):
    """An operation was called on input outside its contract."""


class PostconditionViolatedError(PlanesysError, RuntimeError):
    """A defensive invariant check failed; signals a bug, not bad input."""


class DuplicatePointError(PlanesysError, ValueError):
    """Interpolation points must be pairwise distinct."""


class LiteralSyntaxError(PlanesysError, ValueError):
    """Malformed system literal; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
