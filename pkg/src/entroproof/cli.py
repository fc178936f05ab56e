from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .atoms import MAX_VARIABLES
from .lp import LPError, direct_lp_prove
from .parser import Query, QueryError, lower, lower_entropy, parse_query
from .prover import (
    CertificateCheck,
    CertificateFormatError,
    ProofCertificate,
    Verdict,
    check_certificate,
    prove_identity,
    prove_inequality,
    reduce_constraints,
    stats,
)
from .render import (
    elemental_document,
    proof_document,
    reduction_document,
    render_text,
    verification_document,
)
from .schema import CertificateSchemaGuard
from .settings import ProverSettings, load_settings
from .types import CertificateKind, OutputFormat, StatementKind

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_PROVED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=[fmt.value for fmt in OutputFormat],
        default=OutputFormat.TEXT.value,
        help="Output format",
    )
    common.add_argument("--max-n", type=int, default=None, help="Largest number of random variables accepted")
    common.add_argument("--verbose", action="store_true", help="Log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="entroproof",
        description="Exact prover for linear information inequalities and identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    prove = sub.add_parser("prove", parents=[common], help="Prove the objective of a query document")
    prove.add_argument("query", help="Query document path, or '-' for stdin")
    prove.add_argument("--check", action="store_true", help="Verify the certificate and compare with the direct LP")
    prove.add_argument("--stats", action="store_true", help="Report problem sizes before and after reduction")
    prove.add_argument("--certificate", default="", help="Write the proof certificate to this path")

    verify = sub.add_parser("verify", parents=[common], help="Check a certificate against a query document")
    verify.add_argument("query", help="Query document path, or '-' for stdin")
    verify.add_argument("--cert", required=True, help="Certificate JSON path")

    simplify = sub.add_parser(
        "simplify", parents=[common], help="Show the constraint reduction of a query document"
    )
    simplify.add_argument("query", help="Query document path, or '-' for stdin")

    elemental = sub.add_parser("elemental", parents=[common], help="List the elemental inequalities")
    elemental.add_argument("n", type=int, help="Number of random variables")
    return parser


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _max_n(args: argparse.Namespace, settings: ProverSettings) -> int:
    if args.max_n is not None and not 1 <= args.max_n <= MAX_VARIABLES:
        raise UsageError(f"--max-n must lie in 1..{MAX_VARIABLES}")
    return settings.effective_max_n(args.max_n)


def _load_query(args: argparse.Namespace, settings: ProverSettings, require_objective: bool = True) -> Query:
    return parse_query(_read_text(args.query), max_n=_max_n(args, settings), require_objective=require_objective)


def _emit(document: dict[str, Any], fmt: str) -> None:
    if fmt == OutputFormat.JSON.value:
        print(json.dumps(document, indent=2))
    else:
        print("\n".join(render_text(document)))


def _prove(query: Query) -> Verdict:
    objective, equalities, inequalities = lower(query)
    assert query.objective is not None
    if query.objective.kind is StatementKind.OBJECTIVE_IDENTITY:
        return prove_identity(objective, equalities, inequalities, query.n, query.variables)
    return prove_inequality(objective, equalities, inequalities, query.n, query.variables)


def _cross_check(query: Query, verdict: Verdict, settings: ProverSettings) -> dict[str, Any]:
    failures: list[str] = []
    if verdict.certificate is not None:
        objective, equalities, inequalities = lower(query)
        result = check_certificate(objective, equalities, inequalities, verdict.certificate, query.n)
        failures.extend(result.failures)
    oracle: Optional[bool] = None
    if query.n <= settings.oracle_max_n:
        goal, equalities, inequalities = lower_entropy(query)
        oracle = direct_lp_prove(goal, equalities, query.n, inequalities)
        if verdict.kind is CertificateKind.IDENTITY:
            oracle = oracle and direct_lp_prove(-goal, equalities, query.n, inequalities)
        if oracle != verdict.proved:
            failures.append("oracle")
    parts = ["certificate verified"] if verdict.certificate is not None else []
    if oracle is None:
        parts.append(f"direct LP skipped above n = {settings.oracle_max_n}")
    else:
        parts.append("direct LP agrees")
    summary = "FAILED: " + ", ".join(failures) if failures else "; ".join(parts)
    return {"ok": not failures, "failures": failures, "oracle": oracle, "summary": summary}


def _cmd_prove(args: argparse.Namespace, settings: ProverSettings) -> int:
    query = _load_query(args, settings)
    verdict = _prove(query)
    check = _cross_check(query, verdict, settings) if args.check else None
    document = proof_document(query, verdict, stats(verdict) if args.stats else None, check)
    if args.certificate:
        if verdict.certificate is None:
            logger.warning("No certificate written: the objective was not proved")
        else:
            Path(args.certificate).write_text(json.dumps(document["certificate"], indent=2) + "\n", encoding="utf-8")
    _emit(document, args.format)
    if check is not None and not check["ok"]:
        return EXIT_INTERNAL
    return EXIT_OK if verdict.proved else EXIT_NOT_PROVED


def _cmd_verify(args: argparse.Namespace, settings: ProverSettings) -> int:
    query = _load_query(args, settings)
    raw = _read_text(args.cert)
    errors: list[str] = []
    try:
        payload = json.loads(raw)
        guard = CertificateSchemaGuard().validate(payload)
        errors = list(guard["errors"])
        if not guard["ok"]:
            raise CertificateFormatError("; ".join(errors))
        certificate = ProofCertificate.from_dict(payload, settings.certificate_format)
    except (ValueError, CertificateFormatError) as exc:
        logger.debug("Certificate rejected: %s", exc)
        result = CertificateCheck(False, ("malformed",))
        errors = errors or [str(exc)]
    else:
        objective, equalities, inequalities = lower(query)
        result = check_certificate(objective, equalities, inequalities, certificate, query.n)
    _emit(verification_document(result, errors if not result.ok else ()), args.format)
    return EXIT_OK if result.ok else EXIT_NOT_PROVED


def _cmd_simplify(args: argparse.Namespace, settings: ProverSettings) -> int:
    query = _load_query(args, settings, require_objective=False)
    _, equalities, inequalities = lower(query)
    reduction = reduce_constraints(equalities, inequalities, query.n)
    _emit(reduction_document(query, reduction), args.format)
    return EXIT_OK


def _cmd_elemental(args: argparse.Namespace, settings: ProverSettings) -> int:
    limit = _max_n(args, settings)
    if not 2 <= args.n <= limit:
        raise UsageError(f"n must lie in 2..{limit}")
    _emit(elemental_document(args.n), args.format)
    return EXIT_OK


_COMMANDS = {
    "prove": _cmd_prove,
    "verify": _cmd_verify,
    "simplify": _cmd_simplify,
    "elemental": _cmd_elemental,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    settings = load_settings()
    try:
        return _COMMANDS[args.command](args, settings)
    except QueryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LPError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
