"""Interpolation matrices, the exact rank kernel, and oracle semantics."""

from __future__ import annotations

import dataclasses
import random
from fractions import Fraction

import pytest

import planesys as ps
from planesys.errors import DuplicatePointError
from planesys.oracle import (
    PRIMES_62BIT,
    ConditionMatrix,
    PrimeField,
    derivative_orders,
    monomials,
)


def L(text):
    return ps.parse_system(text)


def _matrix(entries, p):
    """Wrap raw rows for the rank kernel (shape metadata only)."""
    cols = len(entries[0]) if entries else 0
    return ConditionMatrix(
        field=PrimeField(p),
        degree=0,
        columns=cols,
        rows=len(entries),
        entries=tuple(tuple(x % p for x in row) for row in entries),
    )


P = PRIMES_62BIT[0]


# --- matrix construction -----------------------------------------------------


def test_matrix_shape_examples():
    field = PrimeField(101)
    m = ps.build_matrix(L("1(1)"), [(3, 5)], field)
    assert (m.columns, m.rows) == (3, 1)

    pts = [(i, i * i + 1) for i in range(12)]
    m = ps.build_matrix(L("6(2^8,1^4)"), pts, field)
    assert (m.columns, m.rows) == (28, 28)

    m = ps.build_matrix(L("3(1^9)"), pts[:9], field)
    assert (m.columns, m.rows) == (10, 9)


def test_matrix_rejects_bad_points():
    field = PrimeField(101)
    with pytest.raises(DuplicatePointError):
        ps.build_matrix(L("2(1^2)"), [(4, 5), (4, 5)], field)
    with pytest.raises(ValueError):
        ps.build_matrix(L("2(1^2)"), [(4, 5)], field)


def test_rows_are_divided_power_derivative_functionals():
    """Dotting a row of order (i, j) at (u, v) with the coefficients of
    (x-u)^a0 (y-v)^b0 must give 1 when (i, j) == (a0, b0) and 0 otherwise."""
    rng = random.Random(4242)
    field = PrimeField(P)
    d, m = 6, 4
    u, v = rng.randrange(P), rng.randrange(P)
    matrix = ps.build_matrix(ps.LinearSystem(d, (m,)), [(u, v)], field)
    cols = monomials(d)
    orders = derivative_orders(m)

    from math import comb

    for a0 in range(d + 1):
        for b0 in range(d + 1 - a0):
            coeff = {}
            for s in range(a0 + 1):
                for t in range(b0 + 1):
                    coeff[(s, t)] = (
                        comb(a0, s) * pow(p_minus(u), a0 - s, P)
                        * comb(b0, t) * pow(p_minus(v), b0 - t, P)
                    ) % P
            vec = [coeff.get(st, 0) for st in cols]
            for row, (i, j) in zip(matrix.entries, orders):
                dot = sum(r * c for r, c in zip(row, vec)) % P
                assert dot == (1 if (i, j) == (a0, b0) else 0)


def p_minus(x):
    return (P - x) % P


# --- rank kernel -------------------------------------------------------------


def test_rank_trivial_cases():
    assert ps.rank(_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], P)) == 3
    assert ps.rank(_matrix([[0, 0], [0, 0], [0, 0]], P)) == 0
    assert ps.rank(_matrix([[0]], 101)) == 0
    assert ps.rank(_matrix([[P + 3, 1]], P)) == 1


def test_rank_nine_general_points_impose_independent_cubic_conditions():
    rng = random.Random(7)
    field = PrimeField(P)
    pts = []
    while len(pts) < 9:
        pt = (rng.randrange(P), rng.randrange(P))
        if pt not in pts:
            pts.append(pt)
    matrix = ps.build_matrix(L("3(1^9)"), pts, field)
    assert ps.rank(matrix) == 9


def _rank_over_rationals(rows):
    rows = [[Fraction(x) for x in row] for row in rows]
    cols = len(rows[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / prow[c]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        r += 1
        if r == len(rows):
            break
    return r


def test_rank_agrees_with_rational_elimination_on_small_integers():
    # entries <= 30 and dimension <= 8 keep every minor far below the prime,
    # so the rank mod p provably equals the rank over the rationals
    rng = random.Random(3131)
    for _ in range(300):
        nr, nc = rng.randrange(1, 9), rng.randrange(1, 9)
        rows = [[rng.randrange(31) for _ in range(nc)] for _ in range(nr)]
        assert ps.rank(_matrix(rows, P)) == _rank_over_rationals(rows)


def test_rank_of_seeded_products_with_known_inner_dimension():
    rng = random.Random(11)
    for _ in range(60):
        nr, nc = rng.randrange(1, 22), rng.randrange(1, 22)
        inner = rng.randrange(0, 12)
        left = [[rng.randrange(P) for _ in range(inner)] for _ in range(nr)]
        right = [[rng.randrange(P) for _ in range(nc)] for _ in range(inner)]
        prod = [
            [sum(left[i][t] * right[t][j] for t in range(inner)) % P for j in range(nc)]
            for i in range(nr)
        ]
        assert ps.rank(_matrix(prod, P)) == min(inner, nr, nc)


def test_rank_invariant_under_row_shuffles():
    rng = random.Random(99)
    field = PrimeField(P)
    pts = [(rng.randrange(P), rng.randrange(P)) for _ in range(8)]
    matrix = ps.build_matrix(L("4(2^3,1^5)"), pts, field)
    base = ps.rank(matrix)
    for _ in range(10):
        entries = list(matrix.entries)
        rng.shuffle(entries)
        assert ps.rank(dataclasses.replace(matrix, entries=tuple(entries))) == base


def test_adding_a_simple_point_raises_rank_by_at_most_one():
    rng = random.Random(640)
    field = PrimeField(P)
    for _ in range(40):
        d = rng.randrange(2, 7)
        count = rng.randrange(1, 6)
        ms = tuple(sorted((rng.randrange(1, d + 1) for _ in range(count)), reverse=True))
        pts = []
        while len(pts) < count + 1:
            pt = (rng.randrange(P), rng.randrange(P))
            if pt not in pts:
                pts.append(pt)
        base = ps.rank(ps.build_matrix(ps.LinearSystem(d, ms), pts[:-1], field))
        bigger = ps.rank(ps.build_matrix(ps.LinearSystem(d, ms + (1,)), pts, field))
        assert base <= bigger <= base + 1


# --- randomized oracle -------------------------------------------------------


def test_oracle_dim_examples():
    report = ps.oracle_dim(L("6(2^8,1^4)"), 1, trials=3, seed=0)
    assert report.verdict == ps.CERTIFIED_EMPTY
    assert (report.best_rank, report.columns, report.rows) == (28, 28, 28)
    assert report.likely_dimension is None

    report = ps.oracle_dim(L("3(1^9)"), 1, trials=3, seed=0)
    assert report.verdict == ps.LIKELY_DIMENSION
    assert report.corank == 1 and report.likely_dimension == 0

    report = ps.oracle_dim(L("3(2,1^5)"), 1, trials=3, seed=0)
    assert report.corank == 2 and report.likely_dimension == 1

    report = ps.oracle_dim(L("2(2,1^5)"), 1, trials=3, seed=0)
    assert report.verdict == ps.CERTIFIED_EMPTY


def test_oracle_report_bookkeeping():
    report = ps.oracle_dim(L("5(2^2,1^17)"), 2, trials=4, seed=9)
    assert report.k == 2 and report.trials == 4
    assert len(report.p_list) == 4
    assert all(p in PRIMES_62BIT for p in report.p_list)
    assert report.corank == report.columns - report.best_rank
    assert (report.verdict == ps.CERTIFIED_EMPTY) == (report.corank == 0)
    assert report.best_rank <= min(report.rows, report.columns)


def test_oracle_dim_is_deterministic_for_a_seed():
    a = ps.oracle_dim(L("6(2^7,1^8)"), 1, trials=2, seed=5)
    b = ps.oracle_dim(L("6(2^7,1^8)"), 1, trials=2, seed=5)
    assert a == b
    c = ps.oracle_dim(L("6(2^7,1^8)"), 1, trials=2, seed=6)
    assert c.p_list != a.p_list
    assert c.verdict == a.verdict == ps.CERTIFIED_EMPTY


def test_effective_systems_match_their_expected_dimension():
    # systems the certifier never claims: corank - 1 equals the virtual
    # dimension, trial by trial
    for lit in ("1(1)", "3(1^9)"):
        system = L(lit)
        want = ps.stats(system).virt_dim
        for seed in range(5):
            report = ps.oracle_dim(system, 1, trials=1, seed=seed)
            assert report.corank - 1 == want


def test_verify_certificate_examples():
    agreement = ps.verify_certificate(ps.certify(L("6(2^8,1^4)")), ks=[1, 2, 3], trials=1)
    assert agreement.agrees
    got = [(c.report.best_rank, c.report.columns, c.report.rows) for c in agreement.checks]
    assert got == [(28, 28, 28), (91, 91, 92), (190, 190, 192)]

    agreement = ps.verify_certificate(ps.certify(L("9(3^8,1^9)")), ks=[1], trials=1)
    assert agreement.agrees
    assert (agreement.checks[0].report.best_rank, agreement.checks[0].report.rows) == (55, 57)

    agreement = ps.verify_certificate(ps.certify(L("3(1^9)")), ks=[1], trials=2)
    assert agreement.agrees
    assert agreement.checks[0].report.corank == 1
    assert agreement.disagreements() == []


def test_verify_certificate_scaled_exceptions():
    # t times the one-point line family: corank k*t + 1 holds exactly
    agreement = ps.verify_certificate(ps.certify(L("2(2)")), ks=[1, 2, 3], trials=1)
    assert agreement.agrees
    assert [c.report.corank for c in agreement.checks] == [3, 5, 7]

    agreement = ps.verify_certificate(ps.certify(L("9(3^9)")), ks=[1, 2], trials=1)
    assert agreement.agrees
    assert [c.report.corank for c in agreement.checks] == [1, 1]


def test_verify_certificate_rejects_unverifiable_verdicts():
    certificate = ps.certify(L("2(1^4)"))  # HypothesisFailed
    with pytest.raises(ValueError):
        ps.verify_certificate(certificate, ks=[1])


# --- the fixed prime list ----------------------------------------------------


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24 with the first twelve primes
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def test_prime_list_is_prime_and_62_bits():
    assert len(PRIMES_62BIT) == len(set(PRIMES_62BIT))
    for p in PRIMES_62BIT:
        assert p.bit_length() == 62
        assert _is_prime(p)
