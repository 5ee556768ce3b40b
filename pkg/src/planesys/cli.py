"""Command-line front end: literal parsing, dispatch, JSON emission.

The textual form of a system is ``d(m1^e1,m2^e2,...)`` with an optional
leading ``L``, exponents only for runs, e.g. ``6(2^8,1^4)``.  All commands
write results to stdout and diagnostics to stderr; ``--json`` selects the
stable schema-1 JSON forms.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import oracle
from .certifier import (
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
    certify,
    enumerate_h_systems,
    replay,
)
from .cremona import QuadraticStep, cremona_reduce
from .errors import LiteralSyntaxError, MagnitudeError, PlanesysError
from .oracle import oracle_dim, verify_certificate
from .systems import LinearSystem, hypothesis_h, stats

EX_OK = 0
EX_INTERNAL_LIMIT = 2
EX_EXCEPTION = 10
EX_HYPOTHESIS_FAILED = 11
EX_OUT_OF_SCOPE = 12
EX_USAGE = 64

# Caps on parsed run lengths; keeps a stray literal from exhausting memory.
MAX_PARSED_POINTS = 1_000_000


def parse_system(text: str) -> LinearSystem:
    """Parse a system literal, reporting syntax errors with byte offsets."""
    s = text
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def read_int() -> tuple[int, int]:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start:
            raise LiteralSyntaxError("expected an integer", start)
        return int(s[start:pos]), start

    def expect(ch: str):
        nonlocal pos
        skip_ws()
        if pos >= len(s) or s[pos] != ch:
            raise LiteralSyntaxError(f"expected '{ch}'", pos)
        pos += 1

    skip_ws()
    if pos < len(s) and s[pos] == "L":
        pos += 1
    degree, _ = read_int()
    expect("(")
    mults: list[int] = []
    skip_ws()
    if pos < len(s) and s[pos] == ")":
        pos += 1
    else:
        while True:
            m, _ = read_int()
            exponent = 1
            skip_ws()
            if pos < len(s) and s[pos] == "^":
                pos += 1
                exponent, exp_at = read_int()
                if exponent < 1:
                    raise LiteralSyntaxError("exponent must be >= 1", exp_at)
            if exponent > MAX_PARSED_POINTS or len(mults) + exponent > MAX_PARSED_POINTS:
                raise MagnitudeError(f"more than {MAX_PARSED_POINTS} points in literal")
            mults.extend([m] * exponent)
            skip_ws()
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            expect(")")
            break
    skip_ws()
    if pos != len(s):
        raise LiteralSyntaxError("unexpected trailing characters", pos)
    return LinearSystem(degree, tuple(mults))


# ---------------------------------------------------------------------------
# JSON forms (schema 1)


def stats_to_json(system: LinearSystem) -> dict:
    st = stats(system)
    return {
        "schema": 1,
        "system": str(system),
        "big_n": st.big_n,
        "h": st.h,
        "e": st.e,
        "self_int": st.self_int,
        "anticanonical": st.anticanonical,
        "virt_dim": st.virt_dim,
    }


def _verdict_to_json(verdict) -> dict:
    if isinstance(verdict, EmptyAllMultiples):
        return {"kind": "EmptyAllMultiples"}
    if isinstance(verdict, ExceptionVerdict):
        return {"kind": "Exception", "exception_id": verdict.exception_id, "t": verdict.t}
    if isinstance(verdict, HypothesisFailed):
        return {
            "kind": "HypothesisFailed",
            "failed_clauses": [
                {"clause": f.clause, "detail": f.detail}
                for f in verdict.report.failed_clauses
            ],
        }
    if isinstance(verdict, OutOfScope):
        return {"kind": "OutOfScope", "reason": verdict.reason}
    if isinstance(verdict, InternalLimit):
        return {"kind": "InternalLimit", "reason": verdict.reason}
    raise TypeError(f"unknown verdict {verdict!r}")


def _step_to_json(step) -> dict:
    if isinstance(step, PrimitiveExtractionStep):
        return {
            "step": "PrimitiveExtraction",
            "t": step.t,
            "before": str(step.before),
            "after": str(step.after),
        }
    if isinstance(step, LemmaTwoStep):
        return {
            "step": "LemmaTwo",
            "a": step.a,
            "b": step.b,
            "before": str(step.before),
            "after": str(step.after),
        }
    if isinstance(step, QuadraticStep):
        return {
            "step": "Quadratic",
            "indices": list(step.indices),
            "before": str(step.before),
            "after": str(step.after),
        }
    if isinstance(step, AxiomMatchStep):
        return {
            "step": "AxiomMatch",
            "axiom_id": step.axiom_id,
            "t": step.t,
            "before": str(step.system),
            "after": str(step.system),
        }
    if isinstance(step, ExceptionMatchStep):
        return {
            "step": "ExceptionMatch",
            "exception_id": step.exception_id,
            "t": step.t,
            "before": str(step.system),
            "after": str(step.system),
        }
    raise TypeError(f"unknown step {step!r}")


def certificate_to_json(certificate: Certificate) -> dict:
    return {
        "schema": 1,
        "input": str(certificate.input),
        "verdict": _verdict_to_json(certificate.verdict),
        "trace": [_step_to_json(s) for s in certificate.trace],
        "axioms_used": sorted(certificate.axioms_used),
        "citations": certificate.citations(),
    }


def oracle_report_to_json(report: oracle.OracleReport, wall_time_s: float) -> dict:
    verdict: dict = {"kind": report.verdict}
    if report.likely_dimension is not None:
        verdict["dimension"] = report.likely_dimension
    return {
        "schema": 1,
        "system": str(report.system),
        "k": report.k,
        "p_list": list(report.p_list),
        "trials": report.trials,
        "columns": report.columns,
        "rows": report.rows,
        "best_rank": report.best_rank,
        "corank": report.corank,
        "verdict": verdict,
        "wall_time_s": wall_time_s,
    }


# ---------------------------------------------------------------------------
# Command handlers


def _verdict_exit_code(verdict) -> int:
    if isinstance(verdict, EmptyAllMultiples):
        return EX_OK
    if isinstance(verdict, ExceptionVerdict):
        return EX_EXCEPTION
    if isinstance(verdict, HypothesisFailed):
        return EX_HYPOTHESIS_FAILED
    if isinstance(verdict, OutOfScope):
        return EX_OUT_OF_SCOPE
    return EX_INTERNAL_LIMIT


def _verdict_text(verdict) -> str:
    if isinstance(verdict, EmptyAllMultiples):
        return "EmptyAllMultiples"
    if isinstance(verdict, ExceptionVerdict):
        return f"Exception({verdict.exception_id}, t={verdict.t})"
    if isinstance(verdict, HypothesisFailed):
        clauses = ", ".join(f.clause for f in verdict.report.failed_clauses)
        return f"HypothesisFailed(clauses: {clauses})"
    if isinstance(verdict, OutOfScope):
        return f"OutOfScope({verdict.reason})"
    return f"InternalLimit({verdict.reason})"


def _step_text(step) -> str:
    if isinstance(step, PrimitiveExtractionStep):
        return f"PrimitiveExtraction t={step.t}: {step.before} -> {step.after}"
    if isinstance(step, LemmaTwoStep):
        return f"LemmaTwo a={step.a} b={step.b}: {step.before} -> {step.after}"
    if isinstance(step, QuadraticStep):
        return f"Quadratic {step.indices}: {step.before} -> {step.after}"
    if isinstance(step, AxiomMatchStep):
        return f"AxiomMatch {step.axiom_id} t={step.t}: {step.system}"
    if isinstance(step, ExceptionMatchStep):
        return f"ExceptionMatch {step.exception_id} t={step.t}: {step.system}"
    return repr(step)


def _cmd_stats(args) -> int:
    system = parse_system(args.system)
    if args.json:
        print(json.dumps(stats_to_json(system)))
    else:
        st = stats(system)
        print(
            f"system: {system}  N={st.big_n} h={st.h} e={st.e} "
            f"self_int={st.self_int} anticanonical={st.anticanonical} virt_dim={st.virt_dim}"
        )
    return EX_OK


def _cmd_check(args) -> int:
    system = parse_system(args.system)
    report = hypothesis_h(system)
    if args.json:
        print(
            json.dumps(
                {
                    "schema": 1,
                    "system": str(system),
                    "holds": report.holds,
                    "failed_clauses": [
                        {"clause": f.clause, "detail": f.detail} for f in report.failed_clauses
                    ],
                }
            )
        )
    else:
        print(f"system: {system}")
        failed = {f.clause: f.detail for f in report.failed_clauses}
        for clause in ("i", "ii", "iii"):
            print(f"clause {clause}: " + (f"FAIL {failed[clause]}" if clause in failed else "ok"))
        print(f"holds: {'yes' if report.holds else 'no'}")
    return EX_OK if report.holds else 1


def _cmd_certify(args) -> int:
    system = parse_system(args.system)
    certificate = certify(system)
    if args.json:
        print(json.dumps(certificate_to_json(certificate)))
    else:
        print(f"input: {system}")
        print(f"verdict: {_verdict_text(certificate.verdict)}")
        if certificate.axioms_used:
            print(f"axioms: {', '.join(sorted(certificate.axioms_used))}")
        print("trace:")
        for step in certificate.trace:
            print(f"  {_step_text(step)}")
    return _verdict_exit_code(certificate.verdict)


def _cmd_reduce(args) -> int:
    system = parse_system(args.system)
    try:
        reduced, steps = cremona_reduce(system)
    except PlanesysError as err:
        print(f"error: {err}", file=sys.stderr)
        for step in err.partial_trace or []:
            print(f"  {_step_text(step)}", file=sys.stderr)
        return 1
    for step in steps:
        print(f"  {_step_text(step)}")
    print(f"reduced: {reduced}  ({len(steps)} steps)")
    return EX_OK


def _cmd_oracle(args) -> int:
    system = parse_system(args.system)
    start = time.perf_counter()
    report = oracle_dim(system, args.k, trials=args.trials, seed=args.seed)
    wall = time.perf_counter() - start
    if args.json:
        print(json.dumps(oracle_report_to_json(report, round(wall, 6))))
    else:
        dim = "" if report.likely_dimension is None else f" likely_dim={report.likely_dimension}"
        print(
            f"system {report.system} k={report.k}: columns={report.columns} rows={report.rows} "
            f"best_rank={report.best_rank} corank={report.corank} verdict={report.verdict}{dim} "
            f"trials={report.trials} wall={wall:.3f}s"
        )
    return EX_OK if report.verdict == oracle.CERTIFIED_EMPTY else EX_EXCEPTION


def _parse_ks(text: str) -> list[int]:
    try:
        ks = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise LiteralSyntaxError(f"bad k list {text!r}", 0)
    if not ks or any(k < 1 for k in ks):
        raise LiteralSyntaxError(f"k values must be positive integers, got {text!r}", 0)
    return ks


def _cmd_verify(args) -> int:
    system = parse_system(args.system)
    certificate = certify(system)
    print(f"input: {system}")
    print(f"verdict: {_verdict_text(certificate.verdict)}")
    if not isinstance(certificate.verdict, (EmptyAllMultiples, ExceptionVerdict)):
        print("nothing to cross-check for this verdict", file=sys.stderr)
        return _verdict_exit_code(certificate.verdict)
    agreement = verify_certificate(
        certificate, _parse_ks(args.ks), trials=args.trials, seed=args.seed
    )
    for check in agreement.checks:
        r = check.report
        print(
            f"  k={check.k}: rank {r.best_rank}/{r.columns} (rows {r.rows}), corank {r.corank}, "
            f"expected {check.expected} -> {'agree' if check.agrees else 'DISAGREE'}"
        )
    print(f"agreement: {'yes' if agreement.agrees else 'no'}")
    return EX_OK if agreement.agrees else 1


def _cmd_enumerate(args) -> int:
    do_certify = args.certify or args.oracle
    ks = _parse_ks(args.ks)
    corpus = enumerate_h_systems(args.max_degree)
    verdict_counts: dict[str, int] = {}
    disagreements: list[str] = []
    for system in corpus:
        line = str(system)
        if do_certify:
            certificate = certify(system)
            kind = type(certificate.verdict).__name__
            verdict_counts[kind] = verdict_counts.get(kind, 0) + 1
            line += f"  {_verdict_text(certificate.verdict)}"
            if not replay(certificate):
                disagreements.append(f"{system}: certificate does not replay")
                line += "  REPLAY-FAIL"
            if args.oracle and isinstance(
                certificate.verdict, (EmptyAllMultiples, ExceptionVerdict)
            ):
                agreement = verify_certificate(
                    certificate, ks, trials=args.trials, seed=args.seed
                )
                if agreement.agrees:
                    line += "  oracle:agree"
                else:
                    line += "  oracle:DISAGREE"
                    disagreements.extend(f"{system}: {d}" for d in agreement.disagreements())
        print(line)
    print(f"systems: {len(corpus)}")
    for kind in sorted(verdict_counts):
        print(f"  {kind}: {verdict_counts[kind]}")
    print(f"disagreements: {len(disagreements)}")
    for d in disagreements:
        print(f"  {d}", file=sys.stderr)
    return EX_OK if not disagreements else 1


# ---------------------------------------------------------------------------
# Dispatch


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="planesys", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, with_json=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        if with_json:
            p.add_argument("--json", action="store_true", help="emit schema-1 JSON")
        return p

    p = add("stats", _cmd_stats, "print derived invariants of a system")
    p.add_argument("system")

    p = add("check", _cmd_check, "check the emptiness hypothesis; exit 0 iff it holds")
    p.add_argument("system")

    p = add("certify", _cmd_certify, "certify emptiness of all multiples")
    p.add_argument("system")

    p = add("reduce", _cmd_reduce, "Cremona-reduce a system, printing each step", with_json=False)
    p.add_argument("system")

    p = add("oracle", _cmd_oracle, "exact-rank dimension estimate at random points")
    p.add_argument("system")
    p.add_argument("--k", type=int, default=1, help="scale factor (default 1)")
    p.add_argument("--trials", type=int, default=3, help="independent trials (default 3)")
    p.add_argument("--seed", type=int, default=0, help="seed for primes and points")

    p = add("verify", _cmd_verify, "certify, then cross-check numerically", with_json=False)
    p.add_argument("system")
    p.add_argument("--ks", default="1,2", help="comma-separated scale factors (default 1,2)")
    p.add_argument("--trials", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)

    p = add("enumerate", _cmd_enumerate, "stream the corpus, optionally cross-checking",
            with_json=False)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--certify", action="store_true", help="certify every corpus system")
    p.add_argument("--oracle", action="store_true", help="also cross-check verdicts (implies --certify)")
    p.add_argument("--ks", default="1,2")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command line; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EX_USAGE
    except SystemExit as err:  # --help
        return int(err.code or 0)
    try:
        return args.handler(args)
    except (PlanesysError, ValueError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EX_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
