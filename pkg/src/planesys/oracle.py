"""Independent numerical cross-check: exact rank of interpolation matrices.

For a system of degree d with multiplicities (m_1, ..., m_n) at chosen points
over a prime field, the condition matrix has one column per monomial
x^a y^b with a + b <= d and one row per vanishing condition: for the point
(u, v) with multiplicity m, all divided-power derivative orders (i, j) with
i + j <= m - 1.  The entry at row ((u,v), (i,j)) and column (a,b) is

    C(a,i) * C(b,j) * u^(a-i) * v^(b-j)   mod p     (0 when i > a or j > b)

which encodes vanishing to order m in any characteristic.

Soundness is one-sided: the rank at any special choice of points bounds the
rank at general points from below, and rank mod p bounds the rank in
characteristic zero from below.  Full column rank in a single trial is
therefore a genuine certificate that the system is empty at general points;
a positive corank, however many trials agree, is only probabilistic evidence
of the dimension.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .certifier import Certificate, EmptyAllMultiples, ExceptionVerdict
from .errors import DuplicatePointError
from .systems import LinearSystem, scale

# Fixed 62-bit primes (descending from 2^62); (seed, trial) indexes into this
# list so runs are reproducible.  62 bits leaves double-width head-room for
# products during elimination.
PRIMES_62BIT: tuple[int, ...] = (
    4611686018427387847, 4611686018427387817, 4611686018427387787, 4611686018427387761,
    4611686018427387751, 4611686018427387737, 4611686018427387733, 4611686018427387709,
    4611686018427387701, 4611686018427387631, 4611686018427387617, 4611686018427387587,
    4611686018427387461, 4611686018427387421, 4611686018427387409, 4611686018427387329,
    4611686018427387323, 4611686018427387301, 4611686018427387271, 4611686018427387241,
    4611686018427387139, 4611686018427387131, 4611686018427387127, 4611686018427387113,
    4611686018427387091, 4611686018427387073, 4611686018427386981, 4611686018427386923,
    4611686018427386911, 4611686018427386903, 4611686018427386897, 4611686018427386887,
)

CERTIFIED_EMPTY = "CertifiedEmpty"
LIKELY_DIMENSION = "LikelyDimension"


@dataclass(frozen=True)
class PrimeField:
    """A prime modulus; elements are plain ints in [0, p)."""

    p: int


@dataclass(frozen=True)
class ConditionMatrix:
    """Dense vanishing-condition matrix over a prime field."""

    field: PrimeField
    degree: int
    columns: int
    rows: int
    entries: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class OracleReport:
    """Outcome of repeated random-point rank trials for one scaled system."""

    system: LinearSystem  # the unscaled input
    k: int
    p_list: tuple[int, ...]
    trials: int
    columns: int
    rows: int
    best_rank: int
    corank: int
    verdict: str  # CERTIFIED_EMPTY or LIKELY_DIMENSION
    likely_dimension: int | None  # corank - 1 (projective) when not empty


def monomials(degree: int) -> list[tuple[int, int]]:
    """Column order: exponent pairs (a, b) with a + b <= degree."""
    return [(a, b) for a in range(degree + 1) for b in range(degree + 1 - a)]


def derivative_orders(multiplicity: int) -> list[tuple[int, int]]:
    """Row order for one point: orders (i, j) with i + j <= multiplicity - 1."""
    return [(i, j) for i in range(multiplicity) for j in range(multiplicity - i)]


def build_matrix(
    system: LinearSystem, points: Sequence[tuple[int, int]], field: PrimeField
) -> ConditionMatrix:
    """Assemble the condition matrix for ``system`` at the given points.

    ``points`` must contain one pairwise-distinct (u, v) per multiplicity, in
    the same order as system.multiplicities.
    """
    ms = system.multiplicities
    if len(points) != len(ms):
        raise ValueError(f"{len(ms)} multiplicities but {len(points)} points")
    p = field.p
    pts = [(u % p, v % p) for u, v in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePointError("interpolation points must be pairwise distinct")
    d = system.degree
    cols = monomials(d)

    # Pascal's triangle mod p; degrees stay at desk scale so the table is tiny.
    binom = [[0] * (d + 1) for _ in range(d + 1)]
    for a in range(d + 1):
        binom[a][0] = 1
        for i in range(1, a + 1):
            binom[a][i] = (binom[a - 1][i - 1] + binom[a - 1][i]) % p

    rows: list[tuple[int, ...]] = []
    for (u, v), m in zip(pts, ms):
        upow = [1] * (d + 1)
        vpow = [1] * (d + 1)
        for t in range(1, d + 1):
            upow[t] = upow[t - 1] * u % p
            vpow[t] = vpow[t - 1] * v % p
        for i, j in derivative_orders(m):
            row = [
                binom[a][i] * binom[b][j] % p * upow[a - i] % p * vpow[b - j] % p
                if i <= a and j <= b
                else 0
                for a, b in cols
            ]
            rows.append(tuple(row))

    expected_rows = sum(m * (m + 1) // 2 for m in ms)
    assert len(rows) == expected_rows and len(cols) == (d + 1) * (d + 2) // 2
    return ConditionMatrix(
        field=field, degree=d, columns=len(cols), rows=len(rows), entries=tuple(rows)
    )


# --- exact rank kernel ------------------------------------------------------
#
# Gaussian elimination over F_p, with each row packed into one big integer of
# fixed-width lanes.  One elimination step is then a single multiply-add:
#
#     row  +=  (p - f) * pivot_row        (f = row's pivot-column entry)
#
# which is lane-wise  x + (p - f) * y, congruent to x - f*y mod p.  Pivot rows
# are re-reduced lane-wise before use, so the addend is < p^2 per lane and a
# row accumulates at most (number of pivots) such addends.  160-bit lanes
# therefore never overflow for any desk-scale matrix (p < 2^62, p^2 < 2^124,
# head-room 2^36 rows).  Division happens only on pivot normalization, and
# all arithmetic is exact, so the result is the true rank over F_p.

_LANE_BYTES = 20
_LANE_BITS = _LANE_BYTES * 8
_LANE_MASK = (1 << _LANE_BITS) - 1


def _pack(vals: Sequence[int]) -> int:
    return int.from_bytes(
        b"".join(v.to_bytes(_LANE_BYTES, "little") for v in vals), "little"
    )


def _unpack(packed: int, n: int) -> list[int]:
    buf = packed.to_bytes(n * _LANE_BYTES, "little")
    return [
        int.from_bytes(buf[t * _LANE_BYTES : (t + 1) * _LANE_BYTES], "little")
        for t in range(n)
    ]


def rank(matrix: ConditionMatrix) -> int:
    """Exact rank over the prime field; deterministic for a fixed input.

    Pivots are chosen by scanning columns left to right and rows top to
    bottom for the first entry that is nonzero mod p.
    """
    p = matrix.field.p
    ncols = matrix.columns
    rows = [_pack(r) for r in matrix.entries]
    m = len(rows)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        shift = c * _LANE_BITS
        piv = None
        pivval = 0
        for i in range(r, m):
            v = ((rows[i] >> shift) & _LANE_MASK) % p
            if v:
                piv, pivval = i, v
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        # Reduce the pivot row's lanes mod p and scale its pivot entry to 1;
        # lanes left of c are multiples of p and collapse to exact zeros.
        inv = pow(pivval, -1, p)
        lanes = _unpack(rows[r], ncols)
        prow = _pack([0] * c + [v % p * inv % p for v in lanes[c:]])
        rows[r] = prow
        for i in range(r + 1, m):
            f = ((rows[i] >> shift) & _LANE_MASK) % p
            if f:
                rows[i] += (p - f) * prow
        r += 1
    return r


# --- randomized trials ------------------------------------------------------


def _trial_prime(seed: int, trial: int) -> int:
    return PRIMES_62BIT[(seed + trial) % len(PRIMES_62BIT)]


def _trial_points(seed: int, trial: int, p: int, count: int) -> list[tuple[int, int]]:
    rng = random.Random(seed * 1_000_003 + trial)
    points: list[tuple[int, int]] = []
    used = set()
    while len(points) < count:
        pt = (rng.randrange(p), rng.randrange(p))
        if pt in used:
            continue
        used.add(pt)
        points.append(pt)
    return points


def oracle_dim(system: LinearSystem, k: int, trials: int = 3, seed: int = 0) -> OracleReport:
    """Estimate the dimension of ``system`` scaled by k at random points.

    Each trial draws a fresh prime from the fixed list and fresh uniform
    points, then computes the exact matrix rank.  Full column rank in any
    trial certifies emptiness at general points (see the module docstring for
    the one-sided soundness argument); otherwise the report carries the best
    rank over all trials and the implied likely projective dimension
    corank - 1.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    scaled = scale(system, k)
    columns = (scaled.degree + 1) * (scaled.degree + 2) // 2
    nrows = sum(m * (m + 1) // 2 for m in scaled.multiplicities)
    best = 0
    p_list = []
    for trial in range(trials):
        p = _trial_prime(seed, trial)
        p_list.append(p)
        field = PrimeField(p)
        points = _trial_points(seed, trial, p, scaled.n)
        best = max(best, rank(build_matrix(scaled, points, field)))
    corank = columns - best
    return OracleReport(
        system=system,
        k=k,
        p_list=tuple(p_list),
        trials=trials,
        columns=columns,
        rows=nrows,
        best_rank=best,
        corank=corank,
        verdict=CERTIFIED_EMPTY if corank == 0 else LIKELY_DIMENSION,
        likely_dimension=None if corank == 0 else corank - 1,
    )


@dataclass(frozen=True)
class AgreementCheck:
    """One oracle run compared against what the certificate predicts."""

    k: int
    report: OracleReport
    expected: str
    agrees: bool


@dataclass(frozen=True)
class AgreementReport:
    certificate: Certificate
    checks: tuple[AgreementCheck, ...]
    agrees: bool

    def disagreements(self) -> list[str]:
        return [
            f"k={c.k}: expected {c.expected}, oracle found corank {c.report.corank}"
            for c in self.checks
            if not c.agrees
        ]


def verify_certificate(
    certificate: Certificate, ks: Sequence[int], trials: int = 2, seed: int = 0
) -> AgreementReport:
    """Cross-check an emptiness or exception certificate numerically.

    EmptyAllMultiples must come back CertifiedEmpty at every requested k.
    For exception (a) the input is t times a line through one point, so the
    scaled system is a single point of multiplicity k*t on degree k*t and its
    corank is exactly k*t + 1 (conditions at one point are independent).  For
    exception (b), t times the cubic through nine points, the scaled system
    consists of the multiples of that unique cubic, so the expected corank
    is 1 for every k.
    """
    verdict = certificate.verdict
    if not isinstance(verdict, (EmptyAllMultiples, ExceptionVerdict)):
        raise ValueError(f"nothing to cross-check for verdict {verdict!r}")
    checks = []
    for k in ks:
        report = oracle_dim(certificate.input, k, trials=trials, seed=seed)
        if isinstance(verdict, EmptyAllMultiples):
            expected = "corank 0 (CertifiedEmpty)"
            ok = report.verdict == CERTIFIED_EMPTY
        elif verdict.exception_id == "a":
            want = k * verdict.t + 1
            expected = f"corank {want}"
            ok = report.corank == want
        else:
            expected = "corank 1"
            ok = report.corank == 1
        checks.append(AgreementCheck(k=k, report=report, expected=expected, agrees=ok))
    return AgreementReport(
        certificate=certificate, checks=tuple(checks), agrees=all(c.agrees for c in checks)
    )
