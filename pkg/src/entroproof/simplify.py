"""Implied equalities and minimal characterizations of homogeneous inequality sets."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .algebra import JordanForm, LinPoly, gauss_jordan, reduce_poly, solve_linear_system
from .lp import cone_positive, feasible
from .types import LPStatus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InequalitySet:
    """Members ``poly >= 0`` tagged with the position each came from in some outer pool."""

    polys: tuple[LinPoly, ...]
    sources: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if not self.sources:
            object.__setattr__(self, "sources", tuple(range(len(polys))))
        if len(self.sources) != len(polys):
            raise ValueError("every member needs exactly one source index")
        for poly in polys:
            if poly.is_zero():
                raise ValueError("inequality sets exclude the zero polynomial")
            if not poly.is_homogeneous():
                raise ValueError(f"inequality sets are homogeneous, got {poly.format()}")

    @classmethod
    def tagged(cls, members: Sequence[tuple[int, LinPoly]]) -> "InequalitySet":
        return cls(tuple(poly for _, poly in members), tuple(source for source, _ in members))

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self) -> Iterator[LinPoly]:
        return iter(self.polys)

    def members(self) -> list[tuple[int, LinPoly]]:
        return list(zip(self.sources, self.polys))


@dataclass(frozen=True)
class ImpliedEqualitySearch:
    """Positions of the implied equalities and, for each, multipliers by position.

    For an implied member ``k`` the multipliers ``v`` are nonnegative, ``v_k > 0``
    and ``sum(v_i * f_i)`` vanishes identically.
    """

    positions: tuple[int, ...] = ()
    multipliers: Mapping[int, Mapping[int, Fraction]] = field(default_factory=dict)


def search_implied_equalities(inequalities: InequalitySet) -> ImpliedEqualitySearch:
    polys = inequalities.polys
    count = len(polys)
    if count == 0:
        return ImpliedEqualitySearch()
    variables = sorted({var for poly in polys for var in poly.variables()})
    combination = [
        LinPoly({i: poly.coefficient(var) for i, poly in enumerate(polys)}) for var in variables
    ]
    nullspace = gauss_jordan(combination)
    values = [nullspace.solved_value(i) for i in range(count)]
    cone = [value for value in values if not value.is_zero()]

    found: dict[int, dict[int, Fraction]] = {}
    calls = 0
    for k in range(count):
        if k in found or values[k].is_zero():
            continue
        calls += 1
        result = cone_positive(values[k], cone)
        if result.status is not LPStatus.POSITIVE:
            continue
        weights = [value.evaluate(result.witness) for value in values]
        multipliers = {i: w for i, w in enumerate(weights) if w != 0}
        for i, weight in enumerate(weights):
            if weight > 0 and i not in found:
                found[i] = multipliers
    logger.debug(
        "search_implied_equalities: %d members, %d implied, %d cone checks", count, len(found), calls
    )
    return ImpliedEqualitySearch(tuple(sorted(found)), found)


def implied_equalities(inequalities: InequalitySet | Sequence[LinPoly]) -> list[LinPoly]:
    """Members that vanish on every point of ``{f >= 0}``, verbatim and in input order."""
    if not isinstance(inequalities, InequalitySet):
        inequalities = InequalitySet(tuple(inequalities))
    search = search_implied_equalities(inequalities)
    return [inequalities.polys[i] for i in search.positions]


def is_conic_combination(target: LinPoly, generators: Sequence[LinPoly]) -> bool:
    """Is ``target`` a nonnegative combination of ``generators``?"""
    variables = sorted({var for poly in (target, *generators) for var in poly.variables()})
    system = [
        LinPoly(
            {i: -generator.coefficient(var) for i, generator in enumerate(generators)},
            target.coefficient(var),
        )
        for var in variables
    ]
    solved = solve_linear_system(system)
    if solved is None:
        return False
    weights = [solved.solved_value(i) for i in range(len(generators))]
    if any(w.is_constant() and w.constant < 0 for w in weights):
        return False
    open_weights = [w for w in weights if not w.is_constant()]
    return feasible(open_weights).status is LPStatus.FEASIBLE


def collapse_trivially_equivalent(inequalities: InequalitySet) -> InequalitySet:
    """Keep the earliest member of each positive-multiple class, scaled to a unit leading coefficient."""
    seen: set[LinPoly] = set()
    kept: list[tuple[int, LinPoly]] = []
    for source, poly in inequalities.members():
        normal = poly.normalized()
        if normal in seen:
            continue
        seen.add(normal)
        kept.append((source, normal))
    return InequalitySet.tagged(kept)


def minimal_characterization(inequalities: InequalitySet | Sequence[LinPoly]) -> InequalitySet:
    """Drop every member that is a conic combination of the members still kept.

    Assumes no implied equalities; the answer is then unique up to positive scaling.
    """
    if not isinstance(inequalities, InequalitySet):
        inequalities = InequalitySet(tuple(inequalities))
    collapsed = collapse_trivially_equivalent(inequalities)
    keep = list(range(len(collapsed)))
    for k in range(len(collapsed)):
        others = [collapsed.polys[i] for i in keep if i != k]
        if is_conic_combination(collapsed.polys[k], others):
            keep.remove(k)
    logger.debug("minimal_characterization: %d -> %d members", len(inequalities), len(keep))
    return InequalitySet(
        tuple(collapsed.polys[i] for i in keep),
        tuple(collapsed.sources[i] for i in keep),
    )


@dataclass(frozen=True)
class ReducedCharacterization:
    jordan: JordanForm
    minimal: InequalitySet
    implied_sources: tuple[int, ...] = ()
    multipliers: Mapping[int, Mapping[int, Fraction]] = field(default_factory=dict)


def reduced_minimal_characterization(
    inequalities: InequalitySet | Sequence[LinPoly],
) -> ReducedCharacterization:
    """Split a set into its implied equalities, in Jordan form, and a minimal pure remainder."""
    if not isinstance(inequalities, InequalitySet):
        inequalities = InequalitySet(tuple(inequalities))
    search = search_implied_equalities(inequalities)
    implied = set(search.positions)
    jordan = gauss_jordan(inequalities.polys[i] for i in search.positions)
    remainder: list[tuple[int, LinPoly]] = []
    for position, (source, poly) in enumerate(inequalities.members()):
        if position in implied:
            continue
        reduced = reduce_poly(poly, jordan)
        if not reduced.is_zero():
            remainder.append((source, reduced))
    minimal = minimal_characterization(InequalitySet.tagged(remainder))
    sources = inequalities.sources
    multipliers = {
        sources[k]: {sources[i]: v for i, v in search.multipliers[k].items()} for k in search.positions
    }
    return ReducedCharacterization(
        jordan=jordan,
        minimal=minimal,
        implied_sources=tuple(sources[i] for i in search.positions),
        multipliers=multipliers,
    )
