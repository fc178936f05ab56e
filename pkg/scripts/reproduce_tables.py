#!/usr/bin/env python3
"""Prove every bundled query and print its verdict, reduction sizes and certificate check."""
from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from entroproof.parser import lower, parse_query
from entroproof.prover import check_certificate, prove_identity, prove_inequality, stats
from entroproof.types import StatementKind


def run_query(path: Path) -> dict[str, object]:
    query = parse_query(path.read_text(encoding="utf-8"))
    objective, equalities, inequalities = lower(query)
    assert query.objective is not None
    if query.objective.kind is StatementKind.OBJECTIVE_IDENTITY:
        verdict = prove_identity(objective, equalities, inequalities, query.n, query.variables)
    else:
        verdict = prove_inequality(objective, equalities, inequalities, query.n, query.variables)
    row: dict[str, object] = {
        "query": path.name,
        "verdict": verdict.status.value,
        "stats": stats(verdict).to_dict(),
    }
    if verdict.certificate is not None:
        row["identity"] = verdict.certificate.identity_text()
        check = check_certificate(objective, equalities, inequalities, verdict.certificate, query.n)
        row["certificate_ok"] = check.ok
    return row


def main() -> int:
    rows = []
    for path in sorted((ROOT / "queries").glob("*.txt")):
        if "prove" not in path.read_text(encoding="utf-8"):
            continue
        rows.append(run_query(path))
    print(json.dumps(rows, indent=2, ensure_ascii=True))
    return 0 if all(row.get("certificate_ok", True) for row in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
