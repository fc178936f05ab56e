"""Shannon-type proofs over the s-variables.

``prove_inequality`` eliminates the equality constraints and every implied
equality, reduces the pooled inequalities to their minimal characterization,
and then looks for a nonnegative combination of that characterization equal to
the reduced objective. ``prove_identity`` only needs the elimination.
Proofs come with a certificate that :func:`check_certificate` re-derives
without any linear programming.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Mapping, Optional, Sequence

from .algebra import (
    JordanForm,
    JordanRow,
    LinPoly,
    gauss_jordan,
    reduce_poly,
    reduce_set,
    solve_linear_system,
)
from .atoms import MAX_VARIABLES, SVarSequence, expand_measure, shannon_measures, svar_sequence
from .lp import LPError, feasible
from .simplify import InequalitySet, ReducedCharacterization, reduced_minimal_characterization
from .types import CertificateKind, LPStatus, ProblemSize, ProblemStats, VerdictStatus

logger = logging.getLogger(__name__)

CERTIFICATE_FORMAT = "entroproof.certificate/1"
NOT_IMPLIED = "not implied by the given constraints and the elemental inequalities"


class CertificateFormatError(ValueError):
    """A certificate document that cannot be decoded."""


def shannon_pool(n: int) -> list[LinPoly]:
    return [expand_measure(measure, n) for measure in shannon_measures(n)]


@dataclass(frozen=True)
class ConicMember:
    """``poly = scale * reduce(pool[source], trail)``, labelled ``C1``, ``C2``, ..."""

    label: str
    source: int
    scale: Fraction
    poly: LinPoly


@dataclass(frozen=True)
class ConstraintReduction:
    n: int
    equality_count: int
    given_inequalities: int
    pool: tuple[LinPoly, ...]
    equality_form: JordanForm
    remainder: InequalitySet
    characterization: ReducedCharacterization
    trail: JordanForm
    members: tuple[ConicMember, ...]

    @property
    def implied_form(self) -> JordanForm:
        return self.characterization.jordan


def _presentation_key(poly: LinPoly, sequence: SVarSequence) -> tuple[int, tuple[tuple[int, ...], ...]]:
    return (len(poly.terms), tuple(sorted(sequence[var].subscripts for var in poly.variables())))


@lru_cache(maxsize=64)
def _reduce_constraints(
    n: int, equalities: tuple[LinPoly, ...], inequalities: tuple[LinPoly, ...]
) -> ConstraintReduction:
    sequence = svar_sequence(n)
    pool = tuple(inequalities) + tuple(shannon_pool(n))
    equality_form = gauss_jordan(equalities)
    remainder = InequalitySet.tagged(reduce_set(pool, equality_form))
    characterization = reduced_minimal_characterization(remainder)
    trail = gauss_jordan(
        list(equalities) + [pool[source] for source in characterization.implied_sources]
    )

    derived: list[tuple[int, Fraction, LinPoly]] = []
    for source, poly in characterization.minimal.members():
        base = reduce_poly(pool[source], trail)
        lead = poly.leading_variable()
        scale = poly.coefficient(lead) / base.coefficient(lead) if base.coefficient(lead) else Fraction(0)
        if scale <= 0 or base.scale(scale) != poly:
            raise LPError(f"member {poly.format()} is not a positive multiple of its reduced source")
        derived.append((source, scale, poly))
    derived.sort(key=lambda item: _presentation_key(item[2], sequence))
    members = tuple(
        ConicMember(f"C{index}", source, scale, poly)
        for index, (source, scale, poly) in enumerate(derived, start=1)
    )
    logger.debug(
        "reduce_constraints: n=%d, %d equalities, pool %d, remainder %d, implied %d, members %d",
        n,
        len(equalities),
        len(pool),
        len(remainder),
        len(characterization.implied_sources),
        len(members),
    )
    return ConstraintReduction(
        n=n,
        equality_count=len(equalities),
        given_inequalities=len(inequalities),
        pool=pool,
        equality_form=equality_form,
        remainder=remainder,
        characterization=characterization,
        trail=trail,
        members=members,
    )


def reduce_constraints(
    equalities: Sequence[LinPoly], inequalities: Sequence[LinPoly], n: int
) -> ConstraintReduction:
    """Eliminate the equalities, find the implied ones, and minimize what remains."""
    if not 1 <= n <= MAX_VARIABLES:
        raise ValueError(f"n must lie in 1..{MAX_VARIABLES}, got {n}")
    return _reduce_constraints(n, tuple(equalities), tuple(inequalities))


@dataclass(frozen=True)
class ImpliedEquality:
    source: int
    multipliers: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class ConicTerm:
    label: str
    source: int
    scale: Fraction
    poly: LinPoly
    coefficient: Fraction


def _poly_json(poly: LinPoly) -> list[list[Any]]:
    return [[var, str(coef)] for var, coef in poly.terms.items()]


def _poly_from_json(payload: Any) -> LinPoly:
    if not isinstance(payload, list):
        raise CertificateFormatError("polynomials are encoded as [[id, coefficient], ...]")
    terms = []
    for entry in payload:
        if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], int):
            raise CertificateFormatError(f"malformed polynomial term {entry!r}")
        terms.append((entry[0], Fraction(str(entry[1]))))
    return LinPoly(terms)


@dataclass(frozen=True)
class ProofCertificate:
    kind: CertificateKind
    n: int
    variables: tuple[str, ...]
    universe: tuple[str, ...]
    objective: LinPoly
    jordan_trail: JordanForm
    implied: tuple[ImpliedEquality, ...]
    conic: tuple[ConicTerm, ...]
    reduced_goal: LinPoly

    def identity_text(self) -> str:
        parts = []
        for term in self.conic:
            if term.coefficient == 0:
                continue
            parts.append(term.label if term.coefficient == 1 else f"{term.coefficient}*{term.label}")
        return "F1 = " + (" + ".join(parts) if parts else "0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": CERTIFICATE_FORMAT,
            "kind": self.kind.value,
            "n": self.n,
            "variables": list(self.variables),
            "universe": list(self.universe),
            "objective": _poly_json(self.objective),
            "jordan_trail": [
                {"pivot": row.pivot, "tail": _poly_json(row.tail)} for row in self.jordan_trail.rows
            ],
            "implied_equalities": [
                {"source": item.source, "multipliers": [[i, str(v)] for i, v in item.multipliers]}
                for item in self.implied
            ],
            "conic": [
                {
                    "label": term.label,
                    "source": term.source,
                    "scale": str(term.scale),
                    "coefficient": str(term.coefficient),
                    "poly": _poly_json(term.poly),
                }
                for term in self.conic
            ],
            "reduced_goal": _poly_json(self.reduced_goal),
            "identity": self.identity_text(),
        }

    @classmethod
    def from_dict(
        cls, payload: Mapping[str, Any], expected_format: str = CERTIFICATE_FORMAT
    ) -> "ProofCertificate":
        if payload.get("format") != expected_format:
            raise CertificateFormatError(
                f"unsupported certificate format {payload.get('format')!r}, expected {expected_format!r}"
            )
        try:
            return cls(
                kind=CertificateKind(payload["kind"]),
                n=int(payload["n"]),
                variables=tuple(str(v) for v in payload["variables"]),
                universe=tuple(str(label) for label in payload["universe"]),
                objective=_poly_from_json(payload["objective"]),
                jordan_trail=JordanForm(
                    tuple(
                        JordanRow(int(row["pivot"]), _poly_from_json(row["tail"]))
                        for row in payload["jordan_trail"]
                    )
                ),
                implied=tuple(
                    ImpliedEquality(
                        int(item["source"]),
                        tuple((int(i), Fraction(str(v))) for i, v in item["multipliers"]),
                    )
                    for item in payload["implied_equalities"]
                ),
                conic=tuple(
                    ConicTerm(
                        label=str(term["label"]),
                        source=int(term["source"]),
                        scale=Fraction(str(term["scale"])),
                        poly=_poly_from_json(term["poly"]),
                        coefficient=Fraction(str(term["coefficient"])),
                    )
                    for term in payload["conic"]
                ),
                reduced_goal=_poly_from_json(payload["reduced_goal"]),
            )
        except CertificateFormatError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    kind: CertificateKind
    reason: str
    objective: LinPoly
    reduction: ConstraintReduction
    reduced_goal: LinPoly
    step: Optional[int] = None
    certificate: Optional[ProofCertificate] = None
    coefficients: Optional[tuple[LinPoly, ...]] = None
    open_constraints: tuple[LinPoly, ...] = ()
    free_coefficients: int = 0
    farkas: Mapping[int, Fraction] = field(default_factory=dict)
    counterexample: Mapping[int, Fraction] = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.status is VerdictStatus.PROVED


def _certificate(
    kind: CertificateKind,
    objective: LinPoly,
    reduction: ConstraintReduction,
    reduced_goal: LinPoly,
    coefficients: Sequence[Fraction],
    variables: Sequence[str],
) -> ProofCertificate:
    characterization = reduction.characterization
    implied = tuple(
        ImpliedEquality(source, tuple(sorted(characterization.multipliers[source].items())))
        for source in characterization.implied_sources
    )
    conic = tuple(
        ConicTerm(member.label, member.source, member.scale, member.poly, coefficient)
        for member, coefficient in zip(reduction.members, coefficients)
    )
    return ProofCertificate(
        kind=kind,
        n=reduction.n,
        variables=tuple(variables) or tuple(f"X{i}" for i in range(1, reduction.n + 1)),
        universe=tuple(svar_sequence(reduction.n).labels()),
        objective=objective,
        jordan_trail=reduction.trail,
        implied=implied,
        conic=conic if kind is CertificateKind.INEQUALITY else (),
        reduced_goal=reduced_goal,
    )


def prove_inequality(
    objective: LinPoly,
    equalities: Sequence[LinPoly],
    inequalities: Sequence[LinPoly],
    n: int,
    variables: Sequence[str] = (),
) -> Verdict:
    """Decide whether ``objective >= 0`` follows from the constraints and the Shannon cone."""
    reduction = reduce_constraints(equalities, inequalities, n)
    reduced = reduce_poly(objective, reduction.trail)
    members = reduction.members

    def refuse(step: int, reason: str, **extra: Any) -> Verdict:
        logger.debug("prove_inequality: not provable at step %d", step)
        return Verdict(
            VerdictStatus.NOT_PROVABLE,
            CertificateKind.INEQUALITY,
            f"{NOT_IMPLIED}: {reason}",
            objective,
            reduction,
            reduced,
            step=step,
            **extra,
        )

    support = sorted({var for poly in (reduced, *(m.poly for m in members)) for var in poly.variables()})
    system = [
        LinPoly(
            {i: -member.poly.coefficient(var) for i, member in enumerate(members)},
            reduced.coefficient(var),
        )
        for var in support
    ]
    solved = solve_linear_system(system)
    if solved is None:
        return refuse(8, "the reduced objective is outside the span of the reduced characterization")

    coefficients = tuple(solved.solved_value(i) for i in range(len(members)))
    free = len(members) - solved.rank
    if any(p.is_constant() and p.constant < 0 for p in coefficients):
        return refuse(
            10,
            "a forced coefficient of the reduced characterization is negative",
            coefficients=coefficients,
            free_coefficients=free,
        )

    open_constraints: list[LinPoly] = []
    for p in coefficients:
        if not p.is_constant() and p not in open_constraints:
            open_constraints.append(p)
    witness: dict[int, Fraction] = {}
    if open_constraints:
        result = feasible(open_constraints)
        if result.status is LPStatus.INFEASIBLE:
            return refuse(
                12,
                "no nonnegative choice of the free coefficients exists",
                coefficients=coefficients,
                open_constraints=tuple(open_constraints),
                free_coefficients=free,
                farkas=result.farkas,
            )
        witness = result.witness

    values = [p.evaluate(witness) for p in coefficients]
    certificate = _certificate(
        CertificateKind.INEQUALITY, objective, reduction, reduced, values, variables
    )
    logger.debug("prove_inequality: proved, %s", certificate.identity_text())
    return Verdict(
        VerdictStatus.PROVED,
        CertificateKind.INEQUALITY,
        "the reduced objective is a nonnegative combination of the reduced characterization",
        objective,
        reduction,
        reduced,
        certificate=certificate,
        coefficients=coefficients,
        open_constraints=tuple(open_constraints),
        free_coefficients=free,
    )


def prove_identity(
    objective: LinPoly,
    equalities: Sequence[LinPoly],
    inequalities: Sequence[LinPoly],
    n: int,
    variables: Sequence[str] = (),
) -> Verdict:
    """Decide whether ``objective = 0`` holds on every admissible point."""
    reduction = reduce_constraints(equalities, inequalities, n)
    reduced = reduce_poly(objective, reduction.trail)
    if reduced.is_zero():
        certificate = _certificate(CertificateKind.IDENTITY, objective, reduction, reduced, (), variables)
        return Verdict(
            VerdictStatus.PROVED,
            CertificateKind.IDENTITY,
            "remainder of F under B is 0",
            objective,
            reduction,
            reduced,
            certificate=certificate,
        )
    lead = reduced.leading_variable()
    assert lead is not None
    return Verdict(
        VerdictStatus.NOT_PROVABLE,
        CertificateKind.IDENTITY,
        f"{NOT_IMPLIED}: remainder of F under B is not 0",
        objective,
        reduction,
        reduced,
        counterexample={lead: Fraction(1)},
    )


def stats(run: Verdict) -> ProblemStats:
    reduction = run.reduction
    universe = len(svar_sequence(reduction.n))
    p1 = ProblemSize(universe, reduction.equality_count, len(reduction.pool))
    p2 = ProblemSize(len(reduction.trail.free_variables(universe)), 0, len(reduction.members))
    p3 = None
    if run.kind is CertificateKind.INEQUALITY and run.coefficients is not None:
        p3 = ProblemSize(run.free_coefficients, 0, len(run.open_constraints))
    return ProblemStats(p1, p2, p3)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    failures: tuple[str, ...] = ()


def check_certificate(
    objective: LinPoly,
    equalities: Sequence[LinPoly],
    inequalities: Sequence[LinPoly],
    certificate: ProofCertificate,
    n: int,
) -> CertificateCheck:
    """Re-derive a certificate by elimination alone and name every clause that fails."""
    failures: list[str] = []

    def fail(code: str) -> None:
        if code not in failures:
            failures.append(code)

    if certificate.n != n or not 1 <= n <= MAX_VARIABLES:
        return CertificateCheck(False, ("universe",))
    if tuple(certificate.universe) != tuple(svar_sequence(n).labels()):
        fail("universe")
    if certificate.objective != objective:
        fail("objective")
    if certificate.jordan_trail.invariant_violations() or any(
        not row.tail.is_homogeneous() for row in certificate.jordan_trail.rows
    ):
        fail("jordan_form")

    pool = list(inequalities) + shannon_pool(n)
    equality_form = gauss_jordan(equalities)
    for item in certificate.implied:
        weights = dict(item.multipliers)
        if not 0 <= item.source < len(pool) or any(not 0 <= i < len(pool) for i in weights):
            fail("implied_equality")
            continue
        combined = LinPoly.zero()
        for i, weight in weights.items():
            combined = combined + pool[i].scale(weight)
        if (
            any(weight < 0 for weight in weights.values())
            or weights.get(item.source, Fraction(0)) <= 0
            or not reduce_poly(combined, equality_form).is_zero()
        ):
            fail("implied_equality")

    sources = [item.source for item in certificate.implied if 0 <= item.source < len(pool)]
    expected_trail = gauss_jordan(list(equalities) + [pool[s] for s in sources])
    if expected_trail != certificate.jordan_trail:
        fail("trail")

    reduced = reduce_poly(objective, certificate.jordan_trail)
    if reduced != certificate.reduced_goal:
        fail("identity")

    combination = LinPoly.zero()
    for term in certificate.conic:
        if not 0 <= term.source < len(pool) or term.scale <= 0:
            fail("derivation")
            continue
        if term.poly != reduce_poly(pool[term.source], certificate.jordan_trail).scale(term.scale):
            fail("derivation")
        if term.coefficient < 0:
            fail("negative_coefficient")
        combination = combination + term.poly.scale(term.coefficient)

    if certificate.kind is CertificateKind.IDENTITY:
        if certificate.conic or not reduced.is_zero():
            fail("identity")
    elif combination != reduced:
        fail("identity")

    logger.debug("check_certificate: %s", ", ".join(failures) or "ok")
    return CertificateCheck(not failures, tuple(failures))


def verify_certificate(
    objective: LinPoly,
    equalities: Sequence[LinPoly],
    inequalities: Sequence[LinPoly],
    certificate: ProofCertificate,
    n: int,
) -> bool:
    return check_certificate(objective, equalities, inequalities, certificate, n).ok
