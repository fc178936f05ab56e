"""Query documents: ``vars``, ``prove`` and ``given`` lines over H/I measures.

Grammar of an expression::

    expr     := [sign] term (sign term)*
    term     := number ['*'] measure | number | measure
    number   := INT ['/' INT]
    measure  := 'H' '(' names ['|' names] ')'
              | 'I' '(' names ';' names ['|' names] ')'
    names    := NAME (',' NAME)*

A statement is ``expr rel expr`` with ``rel`` one of ``>= <= = ==``.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence

from .algebra import LinPoly
from .atoms import (
    MAX_VARIABLES,
    MeasureTerm,
    entropy,
    expand_measure,
    joint_entropy_vector,
    mutual_information,
)
from .types import StatementKind

logger = logging.getLogger(__name__)


class QueryError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<space>[ \t\r]+)
  | (?P<number>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<relation>>=|<=|==|=)
  | (?P<symbol>[()+\-*/,;|])
    """,
    re.VERBOSE,
)

_KEYWORDS = ("vars", "prove", "given")


def tokenize(text: str, line: int = 1, offset: int = 0) -> Iterator[Token]:
    """Positioned tokens of one line; ``offset`` is the column of ``text[0]`` minus one."""
    position = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if match is None:
            raise QueryError(f"unexpected character {text[position]!r}", line, offset + position + 1)
        kind = match.lastgroup or ""
        if kind != "space":
            yield Token(kind, match.group(), line, offset + position + 1)
        position = match.end()
    yield Token("end", "", line, offset + len(text) + 1)


@dataclass(frozen=True)
class ExprAST:
    """Canonical linear combination of measures with like terms merged.

    The zero expression carries no variable names, so it renders and parses back as ``0``.
    """

    terms: tuple[tuple[Fraction, MeasureTerm], ...]
    variables: tuple[str, ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class Statement:
    kind: StatementKind
    expr: ExprAST
    line: int
    source: str = ""


@dataclass(frozen=True)
class Query:
    variables: tuple[str, ...]
    objective: Optional[Statement]
    constraints: tuple[Statement, ...] = ()

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def equalities(self) -> list[Statement]:
        return [s for s in self.constraints if s.kind is StatementKind.CONSTRAINT_EQUALITY]

    @property
    def inequalities(self) -> list[Statement]:
        return [s for s in self.constraints if s.kind is StatementKind.CONSTRAINT_INEQUALITY]


@dataclass
class _VariableTable:
    names: list[str] = field(default_factory=list)
    fixed: bool = False
    max_n: int = MAX_VARIABLES

    def declare(self, token: Token) -> None:
        if token.text in self.names:
            raise QueryError(f"variable {token.text!r} declared twice", token.line, token.column)
        self._append(token)

    def lookup(self, token: Token) -> int:
        if token.text in self.names:
            return self.names.index(token.text) + 1
        if self.fixed:
            raise QueryError(f"unknown variable {token.text!r}", token.line, token.column)
        self._append(token)
        return len(self.names)

    def _append(self, token: Token) -> None:
        if len(self.names) >= self.max_n:
            raise QueryError(
                f"too many random variables: at most {self.max_n} are supported",
                token.line,
                token.column,
            )
        self.names.append(token.text)


class _Parser:
    def __init__(self, tokens: Sequence[Token], table: _VariableTable) -> None:
        self.tokens = list(tokens)
        self.position = 0
        self.table = table

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.current
        if token.kind != "end":
            self.position += 1
        return token

    def fail(self, message: str, token: Optional[Token] = None) -> QueryError:
        token = token or self.current
        return QueryError(message, token.line, token.column)

    def expect(self, text: str) -> Token:
        token = self.current
        if token.text != text or token.kind == "end":
            found = "end of line" if token.kind == "end" else repr(token.text)
            raise self.fail(f"expected {text!r}, found {found}")
        return self.advance()

    def at(self, text: str) -> bool:
        return self.current.kind != "end" and self.current.text == text

    def expect_end(self) -> None:
        if self.current.kind != "end":
            raise self.fail(f"unexpected {self.current.text!r}")

    def names(self) -> list[Token]:
        tokens = [self.name()]
        while self.at(","):
            self.advance()
            tokens.append(self.name())
        return tokens

    def name(self) -> Token:
        token = self.current
        if token.kind != "name":
            found = "end of line" if token.kind == "end" else repr(token.text)
            raise self.fail(f"expected a variable name, found {found}")
        return self.advance()

    def group(self) -> frozenset[int]:
        return frozenset(self.table.lookup(token) for token in self.names())

    def number(self) -> Fraction:
        numerator = self.advance()
        value = Fraction(int(numerator.text))
        if self.at("/"):
            self.advance()
            token = self.current
            if token.kind != "number":
                raise self.fail("expected a denominator after '/'")
            self.advance()
            if int(token.text) == 0:
                raise self.fail("zero denominator", token)
            value /= int(token.text)
        return value

    def measure(self) -> Optional[MeasureTerm]:
        head = self.advance()
        self.expect("(")
        first = self.group()
        second: Optional[frozenset[int]] = None
        if self.at(";"):
            if head.text == "H":
                raise self.fail("H(...) takes a single group; use I(...;...) for mutual information")
            self.advance()
            second = self.group()
            if self.at(";"):
                raise self.fail("multi-way mutual information is not supported")
        elif head.text == "I":
            raise self.fail("I(...) needs two groups separated by ';'")
        given: frozenset[int] = frozenset()
        if self.at("|"):
            self.advance()
            given = self.group()
        self.expect(")")
        if second is None:
            return entropy(first, given)
        return mutual_information(first, second, given)

    def is_measure_start(self) -> bool:
        token = self.current
        if token.kind != "name" or token.text not in ("H", "I"):
            return False
        following = self.tokens[self.position + 1]
        return following.text == "("

    def term(self, sign: int, terms: dict[MeasureTerm, Fraction]) -> None:
        coefficient = Fraction(sign)
        if self.current.kind == "number":
            token = self.current
            coefficient *= self.number()
            if self.at("*"):
                self.advance()
            elif not self.is_measure_start():
                if coefficient != 0:
                    raise self.fail("constant terms are not allowed; expressions are homogeneous", token)
                return
        if not self.is_measure_start():
            found = "end of line" if self.current.kind == "end" else repr(self.current.text)
            raise self.fail(f"expected H(...) or I(...), found {found}")
        measure = self.measure()
        if measure is not None:
            terms[measure] = terms.get(measure, Fraction(0)) + coefficient

    def expression(self) -> dict[MeasureTerm, Fraction]:
        terms: dict[MeasureTerm, Fraction] = {}
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.advance().text == "-" else 1
        self.term(sign, terms)
        while self.at("+") or self.at("-"):
            sign = -1 if self.advance().text == "-" else 1
            self.term(sign, terms)
        return terms


def _combine(
    left: dict[MeasureTerm, Fraction], right: dict[MeasureTerm, Fraction], variables: Sequence[str]
) -> ExprAST:
    merged = dict(left)
    for measure, coef in right.items():
        merged[measure] = merged.get(measure, Fraction(0)) - coef
    terms = tuple((coef, measure) for measure, coef in merged.items() if coef != 0)
    return ExprAST(terms, tuple(variables) if terms else ())


def _statement(parser: _Parser, objective: bool, source: str) -> tuple[StatementKind, dict, dict]:
    left = parser.expression()
    relation = parser.current
    if relation.kind != "relation":
        found = "end of line" if relation.kind == "end" else repr(relation.text)
        raise parser.fail(f"expected one of >=, <=, =, ==, found {found}")
    parser.advance()
    right = parser.expression()
    parser.expect_end()
    if relation.text == "<=":
        left, right = right, left
    if relation.text in ("=", "=="):
        kind = StatementKind.OBJECTIVE_IDENTITY if objective else StatementKind.CONSTRAINT_EQUALITY
    else:
        kind = StatementKind.OBJECTIVE_INEQUALITY if objective else StatementKind.CONSTRAINT_INEQUALITY
    return kind, left, right


def parse_query(text: str, max_n: int = MAX_VARIABLES, require_objective: bool = True) -> Query:
    """Parse a query document; every failure is a :class:`QueryError` with a position."""
    table = _VariableTable(max_n=min(max_n, MAX_VARIABLES))
    pending: list[tuple[StatementKind, dict, dict, int, str]] = []
    objective_seen = False
    for line_number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        stripped = content.strip()
        if not stripped:
            continue
        offset = len(content) - len(content.lstrip())
        tokens = list(tokenize(stripped, line_number, offset))
        keyword = tokens[0]
        if keyword.kind != "name" or keyword.text not in _KEYWORDS:
            raise QueryError(
                f"a line must start with one of {', '.join(_KEYWORDS)}", line_number, keyword.column
            )
        parser = _Parser(tokens[1:], table)
        if keyword.text == "vars":
            if table.fixed:
                raise QueryError("duplicate vars header", line_number, keyword.column)
            if table.names:
                raise QueryError("vars must precede every statement", line_number, keyword.column)
            for token in parser.names():
                table.declare(token)
            parser.expect_end()
            table.fixed = True
            continue
        if keyword.text == "prove":
            if objective_seen:
                raise QueryError("only one prove statement is allowed", line_number, keyword.column)
            objective_seen = True
        kind, left, right = _statement(parser, keyword.text == "prove", stripped)
        pending.append((kind, left, right, line_number, stripped))

    if require_objective and not objective_seen:
        lines = max(1, len(text.splitlines()))
        raise QueryError("missing prove statement", lines, 1)
    if not table.names:
        raise QueryError("the query mentions no random variables", 1, 1)

    variables = tuple(table.names)
    objective: Optional[Statement] = None
    constraints: list[Statement] = []
    for kind, left, right, line_number, source in pending:
        statement = Statement(kind, _combine(left, right, variables), line_number, source)
        if kind.is_objective:
            objective = statement
        else:
            constraints.append(statement)
    logger.debug("parse_query: n=%d, %d constraints", len(variables), len(constraints))
    return Query(variables, objective, tuple(constraints))


def parse_expression(text: str, variables: Optional[Sequence[str]] = None) -> ExprAST:
    """Parse a bare expression; with ``variables`` given, unknown names are rejected."""
    table = _VariableTable(names=list(variables or ()), fixed=variables is not None)
    parser = _Parser(list(tokenize(text)), table)
    terms = parser.expression()
    parser.expect_end()
    return _combine(terms, {}, table.names)


def format_expression(expr: ExprAST) -> str:
    if expr.is_zero:
        return "0"
    text = ""
    for index, (coef, measure) in enumerate(expr.terms):
        magnitude = abs(coef)
        body = measure.format(expr.variables)
        if magnitude != 1:
            body = f"{magnitude}*{body}"
        if index == 0:
            text = f"-{body}" if coef < 0 else body
        else:
            text += f" {'-' if coef < 0 else '+'} {body}"
    return text


def format_statement(statement: Statement) -> str:
    relation = "=" if statement.kind.is_equality else ">="
    return f"{format_expression(statement.expr)} {relation} 0"


class LoweredQuery(NamedTuple):
    objective: LinPoly
    equalities: list[LinPoly]
    inequalities: list[LinPoly]


def lower_expression(expr: ExprAST, n: int) -> LinPoly:
    total = LinPoly.zero()
    for coef, measure in expr.terms:
        total = total + expand_measure(measure, n).scale(coef)
    return total


def lower(query: Query) -> LoweredQuery:
    """Rewrite a query over the s-variables of its ``n`` random variables."""
    n = query.n
    objective = lower_expression(query.objective.expr, n) if query.objective else LinPoly.zero()
    return LoweredQuery(
        objective,
        [lower_expression(s.expr, n) for s in query.equalities],
        [lower_expression(s.expr, n) for s in query.inequalities],
    )


def lower_entropy(query: Query) -> LoweredQuery:
    """Rewrite a query over joint-entropy coordinates."""
    n = query.n

    def convert(expr: ExprAST) -> LinPoly:
        return joint_entropy_vector(expr.terms, n)

    objective = convert(query.objective.expr) if query.objective else LinPoly.zero()
    return LoweredQuery(
        objective,
        [convert(s.expr) for s in query.equalities],
        [convert(s.expr) for s in query.inequalities],
    )
