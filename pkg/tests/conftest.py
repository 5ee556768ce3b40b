"""Shared corpora for the test suite."""

from __future__ import annotations

import math

import pytest

import planesys as ps


@pytest.fixture(scope="session")
def corpus10():
    return ps.enumerate_h_systems(10)


@pytest.fixture(scope="session")
def corpus13():
    """Larger pool backing the 10^4-case randomized property suites."""
    return ps.enumerate_h_systems(13)


@pytest.fixture(scope="session")
def zero_self_int_pool():
    """All systems with d^2 == sum(m_i^2) for d <= 10, slack unconstrained."""
    pool = []
    for d in range(1, 11):
        found: list[tuple[int, ...]] = []

        def dfs(parts: list[int], remaining: int, max_part: int):
            found.append(tuple(parts + [1] * remaining))
            v = min(max_part, math.isqrt(remaining))
            while v >= 2:
                parts.append(v)
                dfs(parts, remaining - v * v, v)
                parts.pop()
                v -= 1

        dfs([], d * d, d)
        pool.extend(ps.LinearSystem(d, t) for t in found)
    return pool
