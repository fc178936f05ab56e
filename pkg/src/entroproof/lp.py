"""Exact simplex over the rationals with Bland's rule.

Two questions are answered: whether a system of affine inequalities is
feasible (with a verified witness or Farkas certificate), and whether a
homogeneous objective can be made positive on a polyhedral cone.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence, Union

from .algebra import LinPoly
from .atoms import joint_entropy_vector, shannon_measures
from .types import LPStatus

logger = logging.getLogger(__name__)


class LPError(RuntimeError):
    """Raised when an exact solve contradicts its own certificate."""


@dataclass(frozen=True)
class AffineConstraint:
    """``poly >= 0``."""

    poly: LinPoly


ConstraintLike = Union[LinPoly, AffineConstraint]


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    witness: dict[int, Fraction] = field(default_factory=dict)
    farkas: dict[int, Fraction] = field(default_factory=dict)
    pivots: int = 0
    rows: int = 0
    columns: int = 0

    @property
    def pivot_bound(self) -> int:
        return comb(self.columns, self.rows) if self.columns >= self.rows else 0


def _polys(constraints: Iterable[ConstraintLike]) -> list[LinPoly]:
    return [c.poly if isinstance(c, AffineConstraint) else c for c in constraints]


def _support(polys: Iterable[LinPoly]) -> list[int]:
    return sorted({var for poly in polys for var in poly.variables()})


class _Tableau:
    """Dense tableau for ``max c.x`` subject to ``A x = b``, ``x >= 0``, ``b >= 0``."""

    def __init__(
        self,
        rows: list[list[Fraction]],
        rhs: list[Fraction],
        basis: list[int],
        objective: list[Fraction],
    ) -> None:
        self.rows = [list(row) + [value] for row, value in zip(rows, rhs)]
        self.width = len(objective)
        self.basis = list(basis)
        self.pivots = 0
        cost = list(objective) + [Fraction(0)]
        for row, column in zip(self.rows, self.basis):
            factor = cost[column]
            if factor:
                cost = [c - factor * a for c, a in zip(cost, row)]
        self.cost = cost

    def _entering(self) -> Optional[int]:
        for column in range(self.width):
            if self.cost[column] > 0:
                return column
        return None

    def _leaving(self, column: int) -> Optional[int]:
        best: Optional[int] = None
        best_ratio = Fraction(0)
        for index, row in enumerate(self.rows):
            entry = row[column]
            if entry <= 0:
                continue
            ratio = row[-1] / entry
            if (
                best is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.basis[index] < self.basis[best])
            ):
                best, best_ratio = index, ratio
        return best

    def _pivot(self, target: int, column: int) -> None:
        row = self.rows[target]
        entry = row[column]
        if entry != 1:
            row = [value / entry for value in row]
            self.rows[target] = row
        support = [j for j, value in enumerate(row) if value]
        for index, other in enumerate(self.rows):
            factor = other[column]
            if index == target or not factor:
                continue
            for j in support:
                other[j] -= factor * row[j]
        factor = self.cost[column]
        if factor:
            for j in support:
                self.cost[j] -= factor * row[j]
        self.basis[target] = column
        self.pivots += 1

    def optimize(self) -> None:
        limit = comb(self.width, len(self.rows)) if self.rows else 0
        while True:
            column = self._entering()
            if column is None:
                return
            target = self._leaving(column)
            if target is None:
                raise LPError("objective is unbounded on a problem built to be bounded")
            self._pivot(target, column)
            if self.pivots > limit:
                raise LPError("pivot count exceeded the number of bases; Bland's rule was violated")

    @property
    def value(self) -> Fraction:
        return -self.cost[-1]

    def solution(self) -> list[Fraction]:
        values = [Fraction(0)] * self.width
        for row, column in zip(self.rows, self.basis):
            values[column] = row[-1]
        return values


def _phase_one(
    rows: list[list[Fraction]], rhs: list[Fraction], unit_columns: list[Optional[int]]
) -> tuple[Optional[list[Fraction]], int, int]:
    """Find ``x >= 0`` with ``A x = b`` from a partial slack basis; returns (x, pivots, columns)."""
    width = len(rows[0]) if rows else 0
    missing = [index for index, column in enumerate(unit_columns) if column is None]
    extended = []
    basis: list[int] = []
    for index, row in enumerate(rows):
        tail = [Fraction(0)] * len(missing)
        if unit_columns[index] is None:
            tail[missing.index(index)] = Fraction(1)
            basis.append(width + missing.index(index))
        else:
            basis.append(unit_columns[index])
        extended.append(list(row) + tail)
    objective = [Fraction(0)] * width + [Fraction(-1)] * len(missing)
    tableau = _Tableau(extended, rhs, basis, objective)
    if missing:
        tableau.optimize()
    if tableau.value < 0:
        return None, tableau.pivots, tableau.width
    return tableau.solution()[:width], tableau.pivots, tableau.width


def feasible(constraints: Sequence[ConstraintLike]) -> LPResult:
    """Decide ``{x : poly(x) >= 0 for all constraints}`` exactly.

    A feasible answer carries a witness point; an infeasible one carries
    nonnegative multipliers ``y`` with ``sum(y_i * poly_i)`` a negative constant.
    """
    polys = _polys(constraints)
    variables = _support(polys)
    count = len(polys)
    split = 2 * len(variables)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    units: list[Optional[int]] = []
    for index, poly in enumerate(polys):
        row = [Fraction(0)] * (split + count)
        for k, var in enumerate(variables):
            coef = poly.coefficient(var)
            row[2 * k], row[2 * k + 1] = coef, -coef
        row[split + index] = Fraction(-1)
        if poly.constant >= 0:
            rows.append([-value for value in row])
            rhs.append(poly.constant)
            units.append(split + index)
        else:
            rows.append(row)
            rhs.append(-poly.constant)
            units.append(None)

    solution, pivots, width = _phase_one(rows, rhs, units) if polys else ([], 0, 0)
    if solution is not None:
        witness = {var: solution[2 * k] - solution[2 * k + 1] for k, var in enumerate(variables)}
        for poly in polys:
            if poly.evaluate(witness) < 0:
                raise LPError(f"witness violates {poly.format()}")
        logger.debug("feasible: %d constraints, %d pivots, feasible", count, pivots)
        return LPResult(LPStatus.FEASIBLE, witness=witness, pivots=pivots, rows=count, columns=width)

    farkas, farkas_pivots = _farkas_certificate(polys, variables)
    logger.debug("feasible: %d constraints, %d pivots, infeasible", count, pivots + farkas_pivots)
    return LPResult(
        LPStatus.INFEASIBLE,
        farkas=farkas,
        pivots=pivots + farkas_pivots,
        rows=count,
        columns=width,
    )


def _farkas_certificate(polys: list[LinPoly], variables: list[int]) -> tuple[dict[int, Fraction], int]:
    count = len(polys)
    rows = [[poly.coefficient(var) for poly in polys] for var in variables]
    rows.append([-poly.constant for poly in polys])
    rhs = [Fraction(0)] * len(variables) + [Fraction(1)]
    solution, pivots, _ = _phase_one(rows, rhs, [None] * len(rows))
    if solution is None:
        raise LPError("primal phase one failed but no Farkas multipliers exist")
    multipliers = {index: value for index, value in enumerate(solution[:count]) if value}
    combined = LinPoly.zero()
    for index, value in multipliers.items():
        if value < 0:
            raise LPError("negative Farkas multiplier")
        combined = combined + polys[index].scale(value)
    if not combined.is_constant() or combined.constant >= 0:
        raise LPError(f"Farkas combination {combined.format()} is not a negative constant")
    return multipliers, pivots


def cone_positive(objective: LinPoly, constraints: Sequence[ConstraintLike]) -> LPResult:
    """Is ``objective > 0`` somewhere on the cone ``{poly >= 0}``?

    Maximizes the objective under the extra bound ``objective <= 1``, so the
    optimum is 0 or 1. A positive answer carries a witness ray.
    """
    polys = _polys(constraints)
    if not objective.is_homogeneous() or not all(poly.is_homogeneous() for poly in polys):
        raise ValueError("cone_positive expects homogeneous objective and constraints")
    polys = [poly for poly in polys if not poly.is_zero()]
    if objective.is_zero():
        return LPResult(LPStatus.ZERO_ONLY, rows=len(polys) + 1)

    variables = _support(polys + [objective])
    split = 2 * len(variables)
    width = split + len(polys) + 1
    rows: list[list[Fraction]] = []
    for index, poly in enumerate(polys + [objective]):
        row = [Fraction(0)] * width
        sign = -1 if index < len(polys) else 1
        for k, var in enumerate(variables):
            coef = poly.coefficient(var)
            row[2 * k], row[2 * k + 1] = sign * coef, -sign * coef
        row[split + index] = Fraction(1)
        rows.append(row)
    rhs = [Fraction(0)] * len(polys) + [Fraction(1)]
    gains = [Fraction(0)] * width
    for k, var in enumerate(variables):
        coef = objective.coefficient(var)
        gains[2 * k], gains[2 * k + 1] = coef, -coef
    tableau = _Tableau(rows, rhs, list(range(split, width)), gains)
    tableau.optimize()
    shape = dict(pivots=tableau.pivots, rows=len(rows), columns=width)

    if tableau.value <= 0:
        logger.debug("cone_positive: zero-only after %d pivots", tableau.pivots)
        return LPResult(LPStatus.ZERO_ONLY, **shape)
    solution = tableau.solution()
    witness = {var: solution[2 * k] - solution[2 * k + 1] for k, var in enumerate(variables)}
    if objective.evaluate(witness) <= 0 or any(poly.evaluate(witness) < 0 for poly in polys):
        raise LPError("cone witness fails its own constraints")
    logger.debug("cone_positive: positive after %d pivots", tableau.pivots)
    return LPResult(LPStatus.POSITIVE, witness=witness, **shape)


def direct_lp_prove(
    objective: LinPoly,
    equalities: Sequence[LinPoly],
    n: int,
    inequalities: Sequence[LinPoly] = (),
) -> bool:
    """Baseline check in joint-entropy coordinates: is ``objective >= 0`` Shannon-implied?"""
    generators = [joint_entropy_vector([(1, measure)], n) for measure in shannon_measures(n)]
    cone = generators + list(inequalities) + list(equalities) + [-eq for eq in equalities]
    return cone_positive(-objective, cone).status is LPStatus.ZERO_ONLY
