from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from entroproof.algebra import LinPoly
from entroproof.atoms import MeasureTerm, svar_sequence
from entroproof.parser import (
    QueryError,
    format_expression,
    lower,
    lower_entropy,
    parse_expression,
    parse_query,
)
from entroproof.types import StatementKind

QUERIES = Path(__file__).resolve().parents[1] / "queries"
NAMES = ("A", "B", "C", "D")


class TestParseQuery(unittest.TestCase):
    def test_conditional_identity_document(self) -> None:
        query = parse_query((QUERIES / "conditional_identity.txt").read_text(encoding="utf-8"))
        self.assertEqual(query.variables, ("X1", "X2", "X3"))
        assert query.objective is not None
        self.assertIs(query.objective.kind, StatementKind.OBJECTIVE_IDENTITY)
        self.assertEqual(len(query.equalities), 2)
        objective, eqs, ineqs = lower(query)
        sequence = svar_sequence(3)
        expected = LinPoly({sequence.index_of(s): 1 for s in [(1, 2, 1), (1, 1, 3), (1, 2, 3)]})
        self.assertEqual(objective, expected)
        self.assertEqual(ineqs, [])

    def test_variables_inferred_in_order_of_use(self) -> None:
        query = parse_query("prove I(Y;Z|X) >= 0\n")
        self.assertEqual(query.variables, ("Y", "Z", "X"))

    def test_relations_are_normalized(self) -> None:
        query = parse_query("vars X, Y\nprove H(X) <= H(X,Y)\ngiven H(Y) >= 1/2*H(X)\n")
        assert query.objective is not None
        coef, measure = query.objective.expr.terms[0]
        self.assertEqual(len(query.objective.expr.terms), 2)
        self.assertIs(query.inequalities[0].kind, StatementKind.CONSTRAINT_INEQUALITY)
        self.assertEqual(dict((m, c) for c, m in query.inequalities[0].expr.terms)[MeasureTerm(frozenset({1}))], Fraction(-1, 2))
        self.assertEqual(coef, 1)
        self.assertEqual(measure, MeasureTerm(frozenset({1, 2})))

    def test_comments_blank_lines_and_double_equals(self) -> None:
        query = parse_query("# header\n\nvars X, Y  # two\nprove I(X;Y) == 0\n")
        assert query.objective is not None
        self.assertIs(query.objective.kind, StatementKind.OBJECTIVE_IDENTITY)

    def test_like_terms_merge_and_vanish(self) -> None:
        query = parse_query("vars X, Y\nprove H(X) - H(X) + 2 H(Y|X) - H(X,Y|X) >= 0\n")
        assert query.objective is not None
        self.assertEqual(query.objective.expr.terms, ((Fraction(1), MeasureTerm(frozenset({2}), frozenset(), frozenset({1}))),))

    def test_vanishing_measure_is_dropped(self) -> None:
        query = parse_query("vars X, Y\nprove H(X|X,Y) >= 0\n")
        assert query.objective is not None
        self.assertTrue(query.objective.expr.is_zero)

    def test_simplify_documents_need_no_objective(self) -> None:
        query = parse_query((QUERIES / "all_atoms_vanish.txt").read_text(encoding="utf-8"), require_objective=False)
        self.assertIsNone(query.objective)
        self.assertEqual(len(query.inequalities), 1)

    def test_entropy_lowering(self) -> None:
        query = parse_query("vars X, Y\nprove I(X;Y) >= 0\n")
        objective, _, _ = lower_entropy(query)
        self.assertEqual(objective, LinPoly({0: 1, 1: 1, 2: -1}))


class TestParseErrors(unittest.TestCase):
    def assertError(self, text: str, line: int, column: int, fragment: str) -> None:
        with self.assertRaises(QueryError) as ctx:
            parse_query(text)
        self.assertEqual((ctx.exception.line, ctx.exception.column), (line, column))
        self.assertIn(fragment, ctx.exception.message)
        self.assertIsInstance(ctx.exception, ValueError)

    def test_unknown_variable(self) -> None:
        self.assertError("vars X, Y\nprove H(X, W) >= 0\n", 2, 12, "unknown variable 'W'")

    def test_multi_way_information_is_rejected(self) -> None:
        self.assertError("prove I(X;Y;Z) >= 0\n", 1, 12, "multi-way")

    def test_missing_relation(self) -> None:
        self.assertError("prove H(X)\n", 1, 11, "expected one of")

    def test_bad_character(self) -> None:
        self.assertError("prove H(X) >= 0 & H(Y)\n", 1, 17, "unexpected character")

    def test_missing_objective(self) -> None:
        self.assertError("vars X\ngiven H(X) >= 0\n", 2, 1, "missing prove")

    def test_constant_terms(self) -> None:
        self.assertError("prove H(X) >= 1\n", 1, 15, "constant terms")

    def test_unknown_keyword(self) -> None:
        self.assertError("show H(X) >= 0\n", 1, 1, "a line must start")

    def test_variable_cap(self) -> None:
        names = ", ".join(f"V{i}" for i in range(17))
        self.assertError(f"vars {names}\n", 1, 6 + 4 * 10 + 5 * 6, "too many random variables")

    def test_late_vars_header(self) -> None:
        self.assertError("prove H(X) >= 0\nvars X\n", 2, 1, "vars must precede")

    def test_max_n_override(self) -> None:
        with self.assertRaises(QueryError):
            parse_query("prove H(A,B,C) >= 0\n", max_n=2)


@st.composite
def expressions(draw: st.DrawFn) -> str:
    count = draw(st.integers(min_value=1, max_value=4))
    parts = []
    for index in range(count):
        numerator = draw(st.integers(min_value=1, max_value=5))
        denominator = draw(st.integers(min_value=1, max_value=3))
        sign = draw(st.sampled_from(["+", "-"]))
        groups = [draw(st.sets(st.sampled_from(NAMES), min_size=1, max_size=2)) for _ in range(3)]
        if draw(st.booleans()):
            body = f"H({','.join(sorted(groups[0]))}|{','.join(sorted(groups[2]))})"
        else:
            body = f"I({','.join(sorted(groups[0]))};{','.join(sorted(groups[1]))})"
        coef = f"{numerator}/{denominator}*" if (numerator, denominator) != (1, 1) else ""
        parts.append(f"{sign if index or sign == '-' else ''} {coef}{body}")
    return " ".join(parts)


class TestRoundTrip(unittest.TestCase):
    @settings(max_examples=150, deadline=None)
    @given(expressions())
    def test_format_then_parse_is_identity(self, text: str) -> None:
        ast = parse_expression(text, NAMES)
        self.assertEqual(parse_expression(format_expression(ast), NAMES), ast)

    def test_vanishing_expression_round_trips(self) -> None:
        ast = parse_expression("I(X;Y|X)")
        self.assertTrue(ast.is_zero)
        self.assertEqual(format_expression(ast), "0")
        self.assertEqual(parse_expression("0"), ast)
        self.assertEqual(parse_expression("H(A) - H(A)", NAMES), ast)

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet="HIXY(),;|+-*/=<>0123 \n#", max_size=40))
    def test_arbitrary_input_raises_only_query_errors(self, text: str) -> None:
        try:
            parse_query(text)
        except QueryError:
            pass


if __name__ == "__main__":
    unittest.main()
