from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import io
import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

from entroproof.cli import main

QUERIES = Path(__file__).resolve().parents[1] / "queries"


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def query(name: str) -> str:
    return str(QUERIES / name)


class TestProveCommand(unittest.TestCase):
    def test_four_variable_bound(self) -> None:
        code, out, _ = run("prove", query("four_variable_bound.txt"))
        self.assertEqual(code, 0)
        self.assertEqual(out.strip().splitlines()[-1], "F1 = C1 + C3 + C8")
        self.assertIn("verdict: Proved", out)

    def test_identity(self) -> None:
        code, out, _ = run("prove", query("conditional_identity.txt"))
        self.assertEqual(code, 0)
        self.assertEqual(out.strip().splitlines()[-1], "remainder of F under B is 0")

    def test_not_provable(self) -> None:
        code, out, _ = run("prove", query("common_information.txt"))
        self.assertEqual(code, 1)
        self.assertIn("verdict: Not Provable", out)
        self.assertIn("reason: not implied by the given constraints and the elemental inequalities", out)

    def test_not_provable_reason_in_json(self) -> None:
        text = "vars X1, X2\nprove I(X1;X2) >= H(X1)\n"
        with mock.patch("sys.stdin", io.StringIO(text)):
            code, out, _ = run("prove", "--check", "--format", "json", "-")
        self.assertEqual(code, 1)
        document = json.loads(out)
        self.assertEqual(document["verdict"], "NotProvable")
        self.assertTrue(
            document["reason"].startswith("not implied by the given constraints and the elemental inequalities")
        )
        self.assertTrue(document["check"]["ok"])

    def test_check_and_stats(self) -> None:
        code, out, _ = run("prove", "--check", "--stats", query("four_variable_bound.txt"))
        self.assertEqual(code, 0)
        self.assertIn("P1: (15, 6, 28)", out)
        self.assertIn("P3: (2, 0, 6)", out)
        self.assertIn("direct LP agrees", out)
        self.assertEqual(out.strip().splitlines()[-1], "F1 = C1 + C3 + C8")

    def test_check_on_refusal(self) -> None:
        code, out, _ = run("prove", "--check", query("common_information.txt"))
        self.assertEqual(code, 1)
        self.assertIn("direct LP agrees", out)

    def test_json_output(self) -> None:
        code, out, _ = run("prove", "--format", "json", query("data_processing.txt"))
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document["verdict"], "Proved")
        self.assertEqual(document["certificate"]["kind"], "inequality")
        self.assertEqual(document["n"], 4)

    def test_stdin(self) -> None:
        text = "vars X, Y\nprove I(X;Y) >= 0\n"
        with mock.patch("sys.stdin", io.StringIO(text)):
            code, out, _ = run("prove", "-")
        self.assertEqual(code, 0)
        self.assertEqual(out.strip().splitlines()[-1], "F1 = C2")

    def test_parse_error(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.txt"
            path.write_text("vars X\nprove H(X, Q) >= 0\n", encoding="utf-8")
            code, _, err = run("prove", str(path))
        self.assertEqual(code, 2)
        self.assertIn("line 2, column 12", err)

    def test_missing_file(self) -> None:
        code, _, err = run("prove", "/nonexistent/query.txt")
        self.assertEqual(code, 2)
        self.assertIn("cannot read", err)

    def test_max_n(self) -> None:
        code, _, err = run("prove", "--max-n", "3", query("four_variable_bound.txt"))
        self.assertEqual(code, 2)
        self.assertIn("too many random variables", err)
        self.assertEqual(run("prove", "--max-n", "17", query("conditional_identity.txt"))[0], 2)

    def test_usage_error(self) -> None:
        self.assertEqual(run("prove")[0], 2)
        self.assertEqual(run("frobnicate")[0], 2)


class TestVerifyCommand(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.cert = Path(self.tmp.name) / "cert.json"
        code, _, _ = run("prove", "--certificate", str(self.cert), query("four_variable_bound.txt"))
        self.assertEqual(code, 0)

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def test_round_trip(self) -> None:
        code, out, _ = run("verify", "--cert", str(self.cert), query("four_variable_bound.txt"))
        self.assertEqual(code, 0)
        self.assertIn("certificate verified", out)

    def test_wrong_query(self) -> None:
        code, out, _ = run("verify", "--cert", str(self.cert), query("conditional_identity.txt"))
        self.assertEqual(code, 1)
        self.assertIn("universe", out)

    def test_tampered_coefficient(self) -> None:
        payload = json.loads(self.cert.read_text(encoding="utf-8"))
        payload["conic"][0]["coefficient"] = "-1"
        self.cert.write_text(json.dumps(payload), encoding="utf-8")
        code, out, _ = run("verify", "--cert", str(self.cert), query("four_variable_bound.txt"))
        self.assertEqual(code, 1)
        self.assertIn("negative_coefficient", out)

    def test_malformed(self) -> None:
        self.cert.write_text('{"kind": "inequality"}', encoding="utf-8")
        code, out, _ = run("verify", "--format", "json", "--cert", str(self.cert), query("four_variable_bound.txt"))
        self.assertEqual(code, 1)
        document = json.loads(out)
        self.assertEqual(document["failures"], ["malformed"])
        self.assertTrue(document["errors"])

    def test_not_json(self) -> None:
        self.cert.write_text("not json", encoding="utf-8")
        code, out, _ = run("verify", "--cert", str(self.cert), query("four_variable_bound.txt"))
        self.assertEqual(code, 1)
        self.assertIn("malformed", out)

    def test_unknown_format(self) -> None:
        payload = json.loads(self.cert.read_text(encoding="utf-8"))
        payload["format"] = "entroproof.certificate/0"
        self.cert.write_text(json.dumps(payload), encoding="utf-8")
        code, out, _ = run("verify", "--format", "json", "--cert", str(self.cert), query("four_variable_bound.txt"))
        self.assertEqual(code, 1)
        document = json.loads(out)
        self.assertEqual(document["failures"], ["malformed"])
        self.assertIn("unsupported certificate format", document["errors"][0])


class TestSimplifyAndElemental(unittest.TestCase):
    def test_simplify_forces_every_atom(self) -> None:
        code, out, _ = run("simplify", "--format", "json", query("all_atoms_vanish.txt"))
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(len(document["implied_equalities"]), 7)
        self.assertEqual(len(document["trail"]), 7)
        self.assertEqual(document["members"], [])

    def test_simplify_text(self) -> None:
        code, out, _ = run("simplify", query("four_variable_bound.txt"))
        self.assertEqual(code, 0)
        self.assertIn("reduced characterization (10 members):", out)
        self.assertIn("  s_{4,4,4,4} = 0", out)

    def test_elemental_lines(self) -> None:
        code, out, _ = run("elemental", "4")
        self.assertEqual(code, 0)
        self.assertEqual(len(out.strip().splitlines()), 28)
        self.assertTrue(out.startswith("H(X1|X2,X3,X4) >= 0"))

    def test_elemental_range(self) -> None:
        self.assertEqual(run("elemental", "1")[0], 2)
        self.assertEqual(run("elemental", "17")[0], 2)

    def test_elemental_follows_default_cap(self) -> None:
        with mock.patch.dict("os.environ", {"ENTROPROOF_MAX_N": "3"}):
            self.assertEqual(run("elemental", "4")[0], 2)
            self.assertEqual(run("elemental", "3")[0], 0)
            self.assertEqual(run("elemental", "--max-n", "4", "4")[0], 0)
        with mock.patch.dict("os.environ", {}, clear=True):
            code, _, err = run("elemental", "9")
        self.assertEqual(code, 2)
        self.assertIn("n must lie in 2..8", err)


if __name__ == "__main__":
    unittest.main()
