"""Exact sparse linear algebra over the rationals.

Polynomials are affine forms over integer variable ids. The variable id
order is the elimination order: a Jordan row always pivots on the smallest
id it contains.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

logger = logging.getLogger(__name__)

Rational = Fraction
VarId = int
Scalar = Union[int, Fraction]
NameLookup = Union[Sequence[str], Callable[[int], str]]


def as_rational(value: Scalar | str) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"unsupported scalar type: {type(value).__name__}")


def _name_of(var: int, names: Optional[NameLookup]) -> str:
    if names is None:
        return f"x{var + 1}"
    if callable(names):
        return names(var)
    return names[var]


class LinPoly:
    """Immutable affine form ``sum(coef * x_var) + constant`` with exact coefficients."""

    __slots__ = ("_terms", "_constant", "_hash")

    def __init__(
        self,
        terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = (),
        constant: Scalar = 0,
    ) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[int, Fraction] = {}
        for var, coef in items:
            if not isinstance(var, int) or var < 0:
                raise ValueError(f"variable ids are non-negative integers, got {var!r}")
            merged[var] = merged.get(var, Fraction(0)) + as_rational(coef)
        self._terms = {var: merged[var] for var in sorted(merged) if merged[var] != 0}
        self._constant = as_rational(constant)
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction], constant: Fraction) -> "LinPoly":
        poly = cls.__new__(cls)
        poly._terms = {var: terms[var] for var in sorted(terms) if terms[var] != 0}
        poly._constant = constant
        poly._hash = None
        return poly

    @classmethod
    def variable(cls, var: int, coef: Scalar = 1) -> "LinPoly":
        return cls({var: coef})

    @classmethod
    def const(cls, value: Scalar) -> "LinPoly":
        return cls((), value)

    @classmethod
    def zero(cls) -> "LinPoly":
        return cls()

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def constant(self) -> Fraction:
        return self._constant

    def coefficient(self, var: int) -> Fraction:
        return self._terms.get(var, Fraction(0))

    def variables(self) -> tuple[int, ...]:
        return tuple(self._terms)

    def leading_variable(self) -> Optional[int]:
        return next(iter(self._terms), None)

    def is_zero(self) -> bool:
        return not self._terms and self._constant == 0

    def is_constant(self) -> bool:
        return not self._terms

    def is_homogeneous(self) -> bool:
        return self._constant == 0

    def __add__(self, other: "LinPoly") -> "LinPoly":
        if not isinstance(other, LinPoly):
            return NotImplemented
        terms = dict(self._terms)
        for var, coef in other._terms.items():
            terms[var] = terms.get(var, Fraction(0)) + coef
        return LinPoly._raw(terms, self._constant + other._constant)

    def __sub__(self, other: "LinPoly") -> "LinPoly":
        if not isinstance(other, LinPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "LinPoly":
        return LinPoly._raw({var: -coef for var, coef in self._terms.items()}, -self._constant)

    def scale(self, factor: Scalar) -> "LinPoly":
        factor = as_rational(factor)
        if factor == 0:
            return LinPoly.zero()
        return LinPoly._raw(
            {var: coef * factor for var, coef in self._terms.items()},
            self._constant * factor,
        )

    def __mul__(self, factor: Scalar) -> "LinPoly":
        if isinstance(factor, LinPoly):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def substitute(self, var: int, replacement: "LinPoly") -> "LinPoly":
        """Replace ``x_var`` by ``replacement`` everywhere it occurs."""
        coef = self._terms.get(var)
        if coef is None:
            return self
        terms = dict(self._terms)
        del terms[var]
        for other, other_coef in replacement._terms.items():
            terms[other] = terms.get(other, Fraction(0)) + coef * other_coef
        return LinPoly._raw(terms, self._constant + coef * replacement._constant)

    def evaluate(self, assignment: Mapping[int, Scalar]) -> Fraction:
        total = self._constant
        for var, coef in self._terms.items():
            value = assignment.get(var)
            if value:
                total += coef * as_rational(value)
        return total

    def normalized(self) -> "LinPoly":
        """Positive multiple whose leading coefficient is +1 or -1."""
        lead = self.leading_variable()
        if lead is None:
            return self
        return self.scale(1 / abs(self._terms[lead]))

    def trivially_equivalent(self, other: "LinPoly") -> bool:
        return self.normalized() == other.normalized()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinPoly):
            return NotImplemented
        return self._constant == other._constant and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self._terms.items()), self._constant))
        return self._hash

    def __repr__(self) -> str:
        return f"LinPoly({self.format()})"

    def format(self, names: Optional[NameLookup] = None) -> str:
        parts: list[tuple[Fraction, Optional[str]]] = [
            (coef, _name_of(var, names)) for var, coef in self._terms.items()
        ]
        if self._constant != 0 or not parts:
            parts.append((self._constant, None))
        text = ""
        for index, (coef, name) in enumerate(parts):
            magnitude = abs(coef)
            if name is None:
                body = str(magnitude)
            elif magnitude == 1:
                body = name
            else:
                body = f"{magnitude}*{name}"
            if index == 0:
                text = f"-{body}" if coef < 0 else body
            else:
                text += f" {'-' if coef < 0 else '+'} {body}"
        return text


@dataclass(frozen=True)
class JordanRow:
    """``x_pivot = tail``; the tail mentions only ids above the pivot and no other pivot."""

    pivot: int
    tail: LinPoly

    def as_poly(self) -> LinPoly:
        return LinPoly.variable(self.pivot) - self.tail

    def format(self, names: Optional[NameLookup] = None) -> str:
        return f"{_name_of(self.pivot, names)} = {self.tail.format(names)}"


@dataclass(frozen=True)
class JordanForm:
    rows: tuple[JordanRow, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(row.pivot for row in self.rows)

    def row_for(self, pivot: int) -> Optional[JordanRow]:
        for row in self.rows:
            if row.pivot == pivot:
                return row
        return None

    def polys(self) -> list[LinPoly]:
        return [row.as_poly() for row in self.rows]

    def solved_value(self, var: int) -> LinPoly:
        """Expression for ``x_var`` on the solution set: its tail, or itself when free."""
        row = self.row_for(var)
        return row.tail if row is not None else LinPoly.variable(var)

    def free_variables(self, universe_size: int) -> list[int]:
        pivots = set(self.pivots)
        return [var for var in range(universe_size) if var not in pivots]

    def invariant_violations(self) -> list[str]:
        problems: list[str] = []
        pivots = self.pivots
        pivot_set = set(pivots)
        if list(pivots) != sorted(pivot_set):
            problems.append("pivots are not strictly increasing")
        for row in self.rows:
            for var in row.tail.variables():
                if var in pivot_set:
                    problems.append(f"pivot {var} occurs in the tail of row {row.pivot}")
                elif var < row.pivot:
                    problems.append(f"tail of row {row.pivot} mentions smaller id {var}")
        return problems


def _reduce_by(poly: LinPoly, basis: Mapping[int, LinPoly]) -> LinPoly:
    for var in poly.variables():
        tail = basis.get(var)
        if tail is not None:
            poly = poly.substitute(var, tail)
    return poly


def _eliminate(eqs: Iterable[LinPoly]) -> Optional[dict[int, LinPoly]]:
    basis: dict[int, LinPoly] = {}
    for eq in eqs:
        residual = _reduce_by(eq, basis)
        if residual.is_constant():
            if residual.constant != 0:
                return None
            continue
        pivot = residual.leading_variable()
        assert pivot is not None
        coef = residual.coefficient(pivot)
        tail = (residual - LinPoly.variable(pivot, coef)).scale(-1 / coef)
        for other, other_tail in basis.items():
            if other_tail.coefficient(pivot):
                basis[other] = other_tail.substitute(pivot, tail)
        basis[pivot] = tail
    return basis


def _to_form(basis: Mapping[int, LinPoly]) -> JordanForm:
    return JordanForm(tuple(JordanRow(pivot, basis[pivot]) for pivot in sorted(basis)))


def gauss_jordan(eqs: Iterable[LinPoly]) -> JordanForm:
    """Reduced row-echelon form of a homogeneous system ``eqs = 0``."""
    eqs = list(eqs)
    for eq in eqs:
        if not eq.is_homogeneous():
            raise ValueError(f"gauss_jordan expects homogeneous equations, got {eq.format()}")
    basis = _eliminate(eqs)
    assert basis is not None
    form = _to_form(basis)
    logger.debug("gauss_jordan: %d equations, rank %d", len(eqs), form.rank)
    return form


def solve_linear_system(eqs: Iterable[LinPoly]) -> Optional[JordanForm]:
    """Affine variant of :func:`gauss_jordan`; ``None`` when ``eqs = 0`` has no solution."""
    basis = _eliminate(eqs)
    if basis is None:
        return None
    return _to_form(basis)


def reduce_poly(poly: LinPoly, form: JordanForm) -> LinPoly:
    for row in form.rows:
        poly = poly.substitute(row.pivot, row.tail)
    return poly


def reduce_set(polys: Sequence[LinPoly], form: JordanForm) -> list[tuple[int, LinPoly]]:
    """Reduce every member and keep the distinct nonzero results with their first input position."""
    kept: list[tuple[int, LinPoly]] = []
    seen: set[LinPoly] = set()
    for index, poly in enumerate(polys):
        reduced = reduce_poly(poly, form)
        if reduced.is_zero() or reduced in seen:
            continue
        seen.add(reduced)
        kept.append((index, reduced))
    return kept


class DimensionReduction(NamedTuple):
    jordan: JordanForm
    remainder: list[LinPoly]


def dimension_reduce(inequalities: Sequence[LinPoly], equalities: Sequence[LinPoly]) -> DimensionReduction:
    """Eliminate the pivots of ``equalities`` from ``inequalities`` and drop what vanishes."""
    jordan = gauss_jordan(equalities)
    remainder = [poly for _, poly in reduce_set(inequalities, jordan)]
    logger.debug(
        "dimension_reduce: %d inequalities -> %d after %d pivots",
        len(inequalities),
        len(remainder),
        jordan.rank,
    )
    return DimensionReduction(jordan, remainder)
