"""Certifier and exact numerical cross-checker for emptiness of planar
linear systems with general base points."""

from .certifier import (
    AXIOMS,
    EXCEPTIONS,
    AxiomMatchStep,
    Certificate,
    EmptyAllMultiples,
    ExceptionMatchStep,
    ExceptionVerdict,
    HypothesisFailed,
    InternalLimit,
    LemmaTwoStep,
    OutOfScope,
    PrimitiveExtractionStep,
    ReductionStep,
    Verdict,
    basic_move,
    certify,
    enumerate_h_systems,
    lemma_two_rewrite,
    replay,
)
from .cli import parse_system, run
from .cremona import QuadraticStep, cremona_reduce, quadratic_transform
from .oracle import (
    CERTIFIED_EMPTY,
    LIKELY_DIMENSION,
    PRIMES_62BIT,
    AgreementCheck,
    AgreementReport,
    ConditionMatrix,
    OracleReport,
    PrimeField,
    build_matrix,
    oracle_dim,
    rank,
    verify_certificate,
)
from .systems import (
    ClauseFailure,
    HReport,
    LinearSystem,
    SystemStats,
    hypothesis_h,
    is_multiple_of,
    normalize,
    primitive_part,
    scale,
    stats,
)

__version__ = "0.1.0"

__all__ = [
    "AXIOMS",
    "EXCEPTIONS",
    "AgreementCheck",
    "AgreementReport",
    "AxiomMatchStep",
    "CERTIFIED_EMPTY",
    "Certificate",
    "ClauseFailure",
    "ConditionMatrix",
    "EmptyAllMultiples",
    "ExceptionMatchStep",
    "ExceptionVerdict",
    "HReport",
    "HypothesisFailed",
    "InternalLimit",
    "LIKELY_DIMENSION",
    "LemmaTwoStep",
    "LinearSystem",
    "OracleReport",
    "OutOfScope",
    "PRIMES_62BIT",
    "PrimeField",
    "PrimitiveExtractionStep",
    "QuadraticStep",
    "ReductionStep",
    "SystemStats",
    "Verdict",
    "basic_move",
    "build_matrix",
    "certify",
    "cremona_reduce",
    "enumerate_h_systems",
    "hypothesis_h",
    "is_multiple_of",
    "lemma_two_rewrite",
    "normalize",
    "oracle_dim",
    "parse_system",
    "primitive_part",
    "quadratic_transform",
    "rank",
    "replay",
    "run",
    "scale",
    "stats",
    "verify_certificate",
]
