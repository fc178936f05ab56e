"""Atoms of the information diagram and their s-variable encoding.

An atom is a nonempty subset ``S`` of ``{1..n}``. Its s-variable is the
length-``n`` subscript sequence that carries ``j`` at every position ``j``
in ``S`` and ``min(S)`` elsewhere.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import AbstractSet, Iterable, Iterator, Optional, Sequence

from .algebra import LinPoly, Scalar, as_rational

logger = logging.getLogger(__name__)

MAX_VARIABLES = 16


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_VARIABLES:
        raise ValueError(f"number of random variables must lie in 1..{MAX_VARIABLES}, got {n!r}")


@dataclass(frozen=True)
class SVar:
    subscripts: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.subscripts)
        if n == 0:
            raise ValueError("an s-variable needs at least one subscript")
        members = set(self.subscripts)
        if not all(isinstance(i, int) and 1 <= i <= n for i in members):
            raise ValueError(f"subscripts {self.subscripts} fall outside 1..{n}")
        low = min(members)
        for position, value in enumerate(self.subscripts, start=1):
            expected = position if position in members else low
            if value != expected:
                raise ValueError(f"subscripts {self.subscripts} are not a canonical s-variable")

    @property
    def n(self) -> int:
        return len(self.subscripts)

    @property
    def atom(self) -> frozenset[int]:
        return frozenset(self.subscripts)

    @property
    def order_key(self) -> tuple[int, tuple[int, ...]]:
        return (-len(self.atom), self.subscripts)

    @property
    def label(self) -> str:
        return "s_{" + ",".join(str(i) for i in self.subscripts) + "}"

    def __str__(self) -> str:
        return self.label


def svar_from_atom(atom: AbstractSet[int], n: int) -> SVar:
    _check_n(n)
    members = frozenset(atom)
    if not members or not members <= frozenset(range(1, n + 1)):
        raise ValueError(f"atom {sorted(members)} is not a nonempty subset of 1..{n}")
    low = min(members)
    return SVar(tuple(j if j in members else low for j in range(1, n + 1)))


def atom_from_svar(svar: SVar | Sequence[int]) -> frozenset[int]:
    if not isinstance(svar, SVar):
        svar = SVar(tuple(svar))
    return svar.atom


def _split_sequences(n: int) -> list[tuple[int, ...]]:
    current: list[tuple[int, ...]] = [(1,)]
    for size in range(1, n):
        grown: list[tuple[int, ...]] = []
        for subscripts in current:
            grown.append(subscripts + (subscripts[0],))
            grown.append(subscripts + (size + 1,))
        grown.append((size + 1,) * (size + 1))
        current = grown
    return current


@dataclass(frozen=True)
class SVarSequence:
    """The ordered universe of ``2**n - 1`` s-variables; positions are variable ids."""

    n: int
    svars: tuple[SVar, ...]
    _index: dict[tuple[int, ...], int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._index.update({svar.subscripts: i for i, svar in enumerate(self.svars)})

    def __len__(self) -> int:
        return len(self.svars)

    def __iter__(self) -> Iterator[SVar]:
        return iter(self.svars)

    def __getitem__(self, var: int) -> SVar:
        return self.svars[var]

    def index_of(self, svar: SVar | Sequence[int]) -> int:
        key = svar.subscripts if isinstance(svar, SVar) else tuple(svar)
        try:
            return self._index[key]
        except KeyError as exc:
            raise KeyError(f"{key} is not an s-variable of order {self.n}") from exc

    def atom(self, var: int) -> frozenset[int]:
        return self.svars[var].atom

    def labels(self) -> list[str]:
        return [svar.label for svar in self.svars]

    def label(self, var: int) -> str:
        return self.svars[var].label


@lru_cache(maxsize=None)
def svar_sequence(n: int) -> SVarSequence:
    """Build the s-variables by repeated splitting, then sort them by ``(-|atom|, subscripts)``."""
    _check_n(n)
    svars = sorted((SVar(s) for s in _split_sequences(n)), key=lambda svar: svar.order_key)
    if len({svar.atom for svar in svars}) != 2**n - 1:
        raise AssertionError(f"splitting produced a malformed universe for n={n}")
    return SVarSequence(n, tuple(svars))


@dataclass(frozen=True)
class MeasureTerm:
    """``I(first; second | given)``; an empty ``second`` encodes ``H(first | given)``."""

    first: frozenset[int]
    second: frozenset[int] = frozenset()
    given: frozenset[int] = frozenset()

    @property
    def is_entropy(self) -> bool:
        return not self.second

    @property
    def effective_second(self) -> frozenset[int]:
        return self.second or self.first

    def indices(self) -> frozenset[int]:
        return self.first | self.second | self.given

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        def group(ids: frozenset[int]) -> str:
            return ",".join(names[i - 1] if names else f"X{i}" for i in sorted(ids))

        body = group(self.first) if self.is_entropy else f"{group(self.first)};{group(self.second)}"
        if self.given:
            body += f"|{group(self.given)}"
        return f"{'H' if self.is_entropy else 'I'}({body})"


def entropy(first: Iterable[int], given: Iterable[int] = ()) -> Optional[MeasureTerm]:
    """Canonical ``H(first|given)``, or ``None`` when it vanishes identically."""
    condition = frozenset(given)
    target = frozenset(first) - condition
    if not target:
        return None
    return MeasureTerm(target, frozenset(), condition)


def mutual_information(
    first: Iterable[int], second: Iterable[int], given: Iterable[int] = ()
) -> Optional[MeasureTerm]:
    condition = frozenset(given)
    left = frozenset(first) - condition
    right = frozenset(second) - condition
    if not left or not right:
        return None
    if left == right:
        return MeasureTerm(left, frozenset(), condition)
    return MeasureTerm(left, right, condition)


def expand_measure(measure: MeasureTerm, n: int) -> LinPoly:
    """Sum of the s-variables whose atoms meet ``first`` and ``second`` and avoid ``given``."""
    sequence = svar_sequence(n)
    if max(measure.indices(), default=0) > n:
        raise ValueError(f"{measure.format()} mentions a variable beyond X{n}")
    second = measure.effective_second
    return LinPoly(
        {
            var: 1
            for var, svar in enumerate(sequence)
            if svar.atom & measure.first and svar.atom & second and not svar.atom & measure.given
        }
    )


def elemental_count(n: int) -> int:
    return n + comb(n, 2) * 2 ** (n - 2)


def elemental_measures(n: int) -> list[MeasureTerm]:
    """``H(X_i|rest)`` for each i, then ``I(X_i;X_j|X_K)`` by ``|K|``, pair, then ``K``."""
    _check_n(n)
    if n < 2:
        raise ValueError("elemental inequalities need at least two random variables")
    everything = frozenset(range(1, n + 1))
    measures = [MeasureTerm(frozenset({i}), frozenset(), everything - {i}) for i in range(1, n + 1)]
    for size in range(0, n - 1):
        for i, j in combinations(range(1, n + 1), 2):
            rest = sorted(everything - {i, j})
            for condition in combinations(rest, size):
                measures.append(MeasureTerm(frozenset({i}), frozenset({j}), frozenset(condition)))
    return measures


def shannon_measures(n: int) -> list[MeasureTerm]:
    """Generators of the Shannon cone: the elemental measures, or ``H(X1)`` when ``n == 1``."""
    if n == 1:
        return [MeasureTerm(frozenset({1}))]
    return elemental_measures(n)


def elemental_inequalities(n: int) -> list[LinPoly]:
    polys = [expand_measure(measure, n) for measure in elemental_measures(n)]
    logger.debug("elemental_inequalities: n=%d, %d members", n, len(polys))
    return polys


@dataclass(frozen=True)
class EntropyCoordinates:
    """Joint-entropy coordinates ``H(A)`` for nonempty ``A``, ordered by size then elements."""

    n: int
    subsets: tuple[frozenset[int], ...] = field(init=False)

    def __post_init__(self) -> None:
        _check_n(self.n)
        ordered = [
            frozenset(subset)
            for size in range(1, self.n + 1)
            for subset in combinations(range(1, self.n + 1), size)
        ]
        object.__setattr__(self, "subsets", tuple(ordered))

    def __len__(self) -> int:
        return len(self.subsets)

    def index_of(self, subset: Iterable[int]) -> int:
        return self.subsets.index(frozenset(subset))

    def joint(self, subset: Iterable[int], coef: Scalar = 1) -> LinPoly:
        members = frozenset(subset)
        if not members:
            return LinPoly.zero()
        return LinPoly.variable(self.index_of(members), coef)


def joint_entropy_vector(terms: Iterable[tuple[Scalar, MeasureTerm]], n: int) -> LinPoly:
    """Lower a linear combination of measures to joint-entropy coordinates."""
    coords = _coordinates(n)
    total = LinPoly.zero()
    for coef, measure in terms:
        coef = as_rational(coef)
        first, second, given = measure.first, measure.effective_second, measure.given
        total = (
            total
            + coords.joint(first | given, coef)
            + coords.joint(second | given, coef)
            - coords.joint(first | second | given, coef)
            - coords.joint(given, coef)
        )
    return total


@lru_cache(maxsize=None)
def _coordinates(n: int) -> EntropyCoordinates:
    return EntropyCoordinates(n)


def atom_values_to_entropies(atom_values: Sequence[Fraction], n: int) -> list[Fraction]:
    """``H(A)`` is the sum of the atom values over atoms meeting ``A``."""
    sequence = svar_sequence(n)
    coords = _coordinates(n)
    return [
        sum(
            (as_rational(atom_values[var]) for var, svar in enumerate(sequence) if svar.atom & subset),
            Fraction(0),
        )
        for subset in coords.subsets
    ]
