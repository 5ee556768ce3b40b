"""Value types and exact integer invariants for planar linear systems.

A linear system is identified with its numerical data: a plane-curve degree
``d`` and a descending multiset of point multiplicities ``m_1 >= m_2 >= ...``
at general (unlabelled) base points.  Everything here is pure and exact; no
floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MagnitudeError, NegativeMultiplicityError, NonPositiveDegreeError

# Inputs past this magnitude are rejected up front rather than silently
# accepted: arithmetic stays exact regardless, but the package targets desk
# scale and a hard cap makes the supported range explicit.
MAX_MAGNITUDE = 2**31


@dataclass(frozen=True, order=True)
class LinearSystem:
    """A degree plus a descending multiset of positive multiplicities.

    Construction normalizes: zero multiplicities are stripped and the rest
    are sorted descending.  Instances are immutable values; ordering is
    (degree, multiplicities) lexicographic.
    """

    degree: int
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.degree, int) or isinstance(self.degree, bool):
            raise NonPositiveDegreeError(f"degree must be an integer, got {self.degree!r}")
        if self.degree < 1:
            raise NonPositiveDegreeError(f"degree must be >= 1, got {self.degree}")
        if self.degree > MAX_MAGNITUDE:
            raise MagnitudeError(f"degree {self.degree} exceeds supported magnitude {MAX_MAGNITUDE}")
        ms = []
        for m in self.multiplicities:
            if not isinstance(m, int) or isinstance(m, bool):
                raise NegativeMultiplicityError(f"multiplicity must be an integer, got {m!r}")
            if m < 0:
                raise NegativeMultiplicityError(f"multiplicity must be >= 0, got {m}")
            if m > MAX_MAGNITUDE:
                raise MagnitudeError(f"multiplicity {m} exceeds supported magnitude {MAX_MAGNITUDE}")
            if m > 0:
                ms.append(m)
        ms.sort(reverse=True)
        object.__setattr__(self, "multiplicities", tuple(ms))

    @property
    def n(self) -> int:
        """Number of assigned base points."""
        return len(self.multiplicities)

    def mult(self, i: int) -> int:
        """Multiplicity at 1-based index ``i``; indices past the end read 0."""
        if i < 1:
            raise IndexError("multiplicity index is 1-based")
        if i > len(self.multiplicities):
            return 0
        return self.multiplicities[i - 1]

    def __str__(self) -> str:
        return f"{self.degree}({format_multiplicities(self.multiplicities)})"

    def __repr__(self) -> str:
        return f"LinearSystem[{self}]"


def format_multiplicities(ms: tuple[int, ...]) -> str:
    """Render a descending multiset with exponents for runs of length >= 2."""
    parts = []
    i = 0
    while i < len(ms):
        j = i
        while j < len(ms) and ms[j] == ms[i]:
            j += 1
        run = j - i
        parts.append(f"{ms[i]}^{run}" if run >= 2 else f"{ms[i]}")
        i = j
    return ",".join(parts)


@dataclass(frozen=True)
class SystemStats:
    """Derived integer invariants of a linear system.

    big_n          count of multiplicities >= 2
    h              count of multiplicities == 1
    e              d - (m1 + m2 + m3), the slack of the top-three sum
    self_int       d^2 - sum(m_i^2)
    anticanonical  3d - sum(m_i)
    virt_dim       d(d+3)/2 - sum(m_i (m_i + 1)/2), the expected dimension
    """

    big_n: int
    h: int
    e: int
    self_int: int
    anticanonical: int
    virt_dim: int


def normalize(degree: int, raw) -> LinearSystem:
    """Build a system from possibly unsorted data with zeros allowed."""
    return LinearSystem(degree, tuple(raw))


def stats(system: LinearSystem) -> SystemStats:
    """Compute all derived invariants exactly."""
    d = system.degree
    ms = system.multiplicities
    return SystemStats(
        big_n=sum(1 for m in ms if m >= 2),
        h=sum(1 for m in ms if m == 1),
        e=d - (system.mult(1) + system.mult(2) + system.mult(3)),
        self_int=d * d - sum(m * m for m in ms),
        anticanonical=3 * d - sum(ms),
        virt_dim=d * (d + 3) // 2 - sum(m * (m + 1) // 2 for m in ms),
    )


@dataclass(frozen=True)
class ClauseFailure:
    """One violated clause of the emptiness hypothesis, with its numbers."""

    clause: str  # "i", "ii" or "iii"
    detail: str


@dataclass(frozen=True)
class HReport:
    """Result of the three-clause hypothesis check."""

    holds: bool
    failed_clauses: tuple[ClauseFailure, ...]


def hypothesis_h(system: LinearSystem) -> HReport:
    """Check the three-clause hypothesis on which certification rests.

    (i)   the degree dominates the largest multiplicity,
    (ii)  the top three multiplicities fit inside the degree (e >= 0),
    (iii) the self-intersection is zero (d^2 equals the sum of squares).

    The descending order required alongside clause (i) is a construction
    invariant of LinearSystem and cannot fail here.
    """
    d = system.degree
    st = stats(system)
    failures = []
    if d < system.mult(1):
        failures.append(ClauseFailure("i", f"d = {d} < m1 = {system.mult(1)}"))
    if st.e < 0:
        failures.append(ClauseFailure("ii", f"e = {st.e} < 0"))
    if st.self_int != 0:
        sq = sum(m * m for m in system.multiplicities)
        failures.append(ClauseFailure("iii", f"d^2 = {d * d} != sum of squares = {sq}"))
    return HReport(holds=not failures, failed_clauses=tuple(failures))


def scale(system: LinearSystem, k: int) -> LinearSystem:
    """Multiply the degree and every multiplicity by ``k >= 1``."""
    if k < 1:
        raise ValueError(f"scale factor must be >= 1, got {k}")
    return LinearSystem(k * system.degree, tuple(k * m for m in system.multiplicities))


def primitive_part(system: LinearSystem) -> tuple[LinearSystem, int]:
    """Divide out the gcd of the degree and all multiplicities.

    Returns (primitive system, t) with scale(primitive, t) == system.
    """
    t = math.gcd(system.degree, *system.multiplicities)
    if t == 1:
        return system, 1
    return LinearSystem(system.degree // t, tuple(m // t for m in system.multiplicities)), t


def is_multiple_of(system: LinearSystem, base: LinearSystem) -> int | None:
    """Return t when ``system`` equals ``base`` scaled by t, else None."""
    if system.degree % base.degree != 0:
        return None
    t = system.degree // base.degree
    if system.multiplicities == tuple(t * m for m in base.multiplicities):
        return t
    return None
