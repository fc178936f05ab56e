"""Structured output documents and their plain-text rendering.

Every command builds a JSON-ready document first; text output is rendered
from that document only.
"""
from __future__ import annotations

from typing import Any, Optional, Sequence

from .algebra import JordanForm, LinPoly
from .atoms import elemental_inequalities, elemental_measures, shannon_measures, svar_sequence
from .parser import Query, format_statement
from .prover import CertificateCheck, ConstraintReduction, Verdict
from .types import CertificateKind, ProblemStats


def _labels(n: int) -> list[str]:
    return svar_sequence(n).labels()


def _poly_text(poly: LinPoly, n: int) -> str:
    return poly.format(_labels(n))


def _rows(form: JordanForm, n: int) -> list[str]:
    return [row.format(_labels(n)) for row in form.rows]


def pool_origin(query: Query, source: int) -> str:
    """Human-readable statement behind a pooled inequality."""
    given = query.inequalities
    if source < len(given):
        return format_statement(given[source])
    measure = shannon_measures(query.n)[source - len(given)]
    return f"{measure.format(query.variables)} >= 0"


def _members(query: Query, reduction: ConstraintReduction) -> list[dict[str, str]]:
    return [
        {
            "label": member.label,
            "poly": _poly_text(member.poly, query.n),
            "origin": pool_origin(query, member.source),
        }
        for member in reduction.members
    ]


def reduction_document(query: Query, reduction: ConstraintReduction) -> dict[str, Any]:
    n = query.n
    return {
        "command": "simplify",
        "variables": list(query.variables),
        "n": n,
        "universe_size": len(svar_sequence(n)),
        "equalities": reduction.equality_count,
        "inequalities": len(reduction.pool),
        "given_inequalities": reduction.given_inequalities,
        "equality_form": _rows(reduction.equality_form, n),
        "remainder_size": len(reduction.remainder),
        "implied_equalities": _rows(reduction.implied_form, n),
        "trail": _rows(reduction.trail, n),
        "members": _members(query, reduction),
    }


def proof_document(
    query: Query,
    verdict: Verdict,
    problem_stats: Optional[ProblemStats] = None,
    check: Optional[dict[str, Any]] = None,
) -> dict[str, Any]:
    n = query.n
    reduction = verdict.reduction
    certificate = verdict.certificate
    identity: Optional[str] = None
    if verdict.proved and certificate is not None:
        identity = (
            certificate.identity_text()
            if verdict.kind is CertificateKind.INEQUALITY
            else "remainder of F under B is 0"
        )
    counterexample = None
    if verdict.counterexample:
        counterexample = {_labels(n)[var]: str(value) for var, value in verdict.counterexample.items()}
    coefficients = None
    if verdict.coefficients is not None:
        coefficients = [p.format(lambda var: f"p{var + 1}") for p in verdict.coefficients]
    return {
        "command": "prove",
        "objective": format_statement(query.objective) if query.objective else "",
        "kind": verdict.kind.value,
        "variables": list(query.variables),
        "n": n,
        "universe_size": len(svar_sequence(n)),
        "equalities": reduction.equality_count,
        "inequalities": len(reduction.pool),
        "given_inequalities": reduction.given_inequalities,
        "trail": _rows(reduction.trail, n),
        "members": _members(query, reduction),
        "reduced_goal": _poly_text(verdict.reduced_goal, n),
        "coefficients": coefficients,
        "verdict": verdict.status.value,
        "step": verdict.step,
        "reason": verdict.reason,
        "identity": identity,
        "counterexample": counterexample,
        "certificate": certificate.to_dict() if certificate is not None else None,
        "stats": problem_stats.to_dict() if problem_stats is not None else None,
        "check": check,
    }


def verification_document(check: CertificateCheck, errors: Sequence[str] = ()) -> dict[str, Any]:
    return {
        "command": "verify",
        "ok": check.ok,
        "failures": list(check.failures),
        "errors": list(errors),
    }


def elemental_document(n: int, names: Optional[Sequence[str]] = None) -> dict[str, Any]:
    names = list(names) if names else [f"X{i}" for i in range(1, n + 1)]
    rows = [
        {"measure": measure.format(names), "poly": _poly_text(poly, n)}
        for measure, poly in zip(elemental_measures(n), elemental_inequalities(n))
    ]
    return {"command": "elemental", "n": n, "count": len(rows), "inequalities": rows}


def _member_lines(members: Sequence[dict[str, str]]) -> list[str]:
    return [f"  {m['label']}: {m['poly']} >= 0    from {m['origin']}" for m in members]


def _stats_lines(stats: dict[str, Any]) -> list[str]:
    lines = ["problem sizes (variables, equalities, inequalities):"]
    for key in ("P1", "P2", "P3"):
        size = stats.get(key)
        if size is not None:
            lines.append(f"  {key}: ({size['variables']}, {size['equalities']}, {size['inequalities']})")
    lines.append(f"  monotone: {'yes' if stats.get('monotone') else 'no'}")
    return lines


def render_text(document: dict[str, Any]) -> list[str]:
    command = document.get("command")
    if command == "elemental":
        return [f"{row['measure']} >= 0    {row['poly']} >= 0" for row in document["inequalities"]]
    if command == "verify":
        if document["ok"]:
            return ["certificate verified"]
        lines = [f"schema: {error}" for error in document.get("errors", [])]
        lines.append("verification failed: " + ", ".join(document["failures"]))
        return lines

    lines = [
        f"variables: {', '.join(document['variables'])} "
        f"(n = {document['n']}, {document['universe_size']} s-variables)",
        f"constraints: {document['equalities']} equalities, {document['inequalities']} pooled inequalities "
        f"({document['given_inequalities']} given)",
    ]
    if command == "simplify":
        lines.append(f"equality form ({len(document['equality_form'])} rows):")
        lines.extend(f"  {row}" for row in document["equality_form"])
        lines.append(f"implied equalities ({len(document['implied_equalities'])} rows):")
        lines.extend(f"  {row}" for row in document["implied_equalities"])
        lines.append(f"combined Jordan form ({len(document['trail'])} rows):")
        lines.extend(f"  {row}" for row in document["trail"])
        lines.append(f"reduced characterization ({len(document['members'])} members):")
        lines.extend(_member_lines(document["members"]))
        return lines

    lines.insert(0, f"objective: {document['objective']}")
    lines.append(f"combined Jordan form ({len(document['trail'])} rows):")
    lines.extend(f"  {row}" for row in document["trail"])
    lines.append(f"reduced characterization ({len(document['members'])} members):")
    lines.extend(_member_lines(document["members"]))
    lines.append(f"reduced objective: {document['reduced_goal']}")
    if document.get("coefficients") is not None:
        lines.append(
            "coefficients: "
            + ", ".join(f"p{i} = {value}" for i, value in enumerate(document["coefficients"], start=1))
        )
    if document.get("stats") is not None:
        lines.extend(_stats_lines(document["stats"]))
    check = document.get("check")
    if check is not None:
        lines.append(f"check: {check['summary']}")
    if document["verdict"] == "Proved":
        lines.append("verdict: Proved")
    else:
        lines.append(f"verdict: Not Provable (step {document['step']})" if document["step"] else "verdict: Not Provable")
        lines.append(f"reason: {document['reason']}")
    if document.get("counterexample"):
        assignment = ", ".join(f"{label} = {value}" for label, value in document["counterexample"].items())
        lines.append(f"counterexample: {assignment}, all other free s-variables 0")
    if document.get("identity"):
        lines.append(document["identity"])
    return lines
