"""Quadratic (Cremona) transformations and reduction to minimal degree.

The plane Cremona map based at three of the assigned points acts on the
numerical data only:

    d'   = 2d - (m_i + m_j + m_k)
    m_a' = d - (sum of the other two chosen multiplicities)   for a in {i,j,k}

with every other multiplicity unchanged.  It preserves the self-intersection,
the anticanonical degree and the virtual dimension, and it lowers the degree
exactly when the three chosen multiplicities sum to more than the degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateDegreeError, NegativeMultiplicityError, PlanesysError
from .systems import LinearSystem, stats


@dataclass(frozen=True)
class QuadraticStep:
    """A replayable record of one quadratic transformation."""

    before: LinearSystem
    indices: tuple[int, int, int]  # positions into before.multiplicities
    after: LinearSystem


def quadratic_transform(system: LinearSystem, i: int, j: int, k: int) -> LinearSystem:
    """Apply the quadratic transformation based at three assigned points.

    ``i, j, k`` are distinct 0-based positions into the multiplicity list.
    Raises NegativeMultiplicityError if the law would produce a negative
    multiplicity, DegenerateDegreeError if the new degree would drop below 1.
    """
    ms = system.multiplicities
    idx = (i, j, k)
    if len(set(idx)) != 3:
        raise ValueError(f"indices must be three distinct positions, got {idx}")
    for a in idx:
        if not 0 <= a < len(ms):
            raise ValueError(f"index {a} out of range for {len(ms)} multiplicities")
    d = system.degree
    mi, mj, mk = ms[i], ms[j], ms[k]
    new_d = 2 * d - (mi + mj + mk)
    new_vals = {i: d - mj - mk, j: d - mi - mk, k: d - mi - mj}
    for pos, v in new_vals.items():
        if v < 0:
            raise NegativeMultiplicityError(
                f"transforming {system} at positions {idx} sends m={ms[pos]} to {v}"
            )
    if new_d < 1:
        raise DegenerateDegreeError(f"transforming {system} at positions {idx} gives degree {new_d}")
    out = list(ms)
    for pos, v in new_vals.items():
        out[pos] = v
    return LinearSystem(new_d, tuple(out))


def cremona_reduce(system: LinearSystem) -> tuple[LinearSystem, list[QuadraticStep]]:
    """Transform at the three largest multiplicities until e >= 0.

    The pivot is always positions (0, 1, 2) of the descending list, so ties
    resolve leftmost and traces are deterministic.  The degree strictly
    decreases at each step, which bounds the loop.  Errors raised by an
    illegal transformation propagate with the completed steps attached as
    ``partial_trace``.
    """
    steps: list[QuadraticStep] = []
    cur = system
    while stats(cur).e < 0:
        if cur.n < 3:
            # A third base point would have multiplicity 0 and the law would
            # send it to e < 0.
            err = NegativeMultiplicityError(
                f"{cur} has e < 0 but fewer than three assigned points"
            )
            err.partial_trace = steps
            raise err
        try:
            nxt = quadratic_transform(cur, 0, 1, 2)
        except PlanesysError as err:
            err.partial_trace = steps
            raise
        steps.append(QuadraticStep(before=cur, indices=(0, 1, 2), after=nxt))
        cur = nxt
    return cur, steps
