"""End-to-end tests for the hermblock command line."""
import json
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np

from src.core.blocks import partition
from src.main import main
from src.utils.config import Config
from src.utils.matrix_io import load_decomposition, read_json, save_block_matrix

ONES = np.array([[1.0, 1.0], [1.0, 1.0]])
X_CONTROL = np.array([1.0, 0.0, 0.0, 1.0])


class TestCLI(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self._tol = patch.object(Config, "TOL_CERT", Config.TOL_CERT)
        self._tol.start()

    def tearDown(self):
        self._tol.stop()
        self._tmp.cleanup()

    def write_block(self, name, matrix, beta, n):
        return str(save_block_matrix(self.tmp / name, partition(matrix, beta, n)))

    def run_cli(self, *argv):
        return main([*argv, "--output-dir", str(self.tmp / "out"), "--quiet"])

    def test_verify_pass(self):
        print("\n>>> Testing verify exit code 0...")
        path = self.write_block("ones.json", ONES, 2, 1)
        report_path = self.tmp / "report.json"
        self.assertEqual(self.run_cli("verify", "hiroshima", path, "--report", str(report_path)), 0)
        report = read_json(report_path)
        self.assertEqual(report["command"], "verify")
        self.assertNotIn("wall_time", report)
        self.assertTrue(report["certificates"][0]["passed"])
        self.assertIn(path, report["input_digests"])

    def test_verify_hypothesis_refusal_and_forced_violation(self):
        print("\n>>> Testing negative control exit codes...")
        path = self.write_block("control.json", np.outer(X_CONTROL, X_CONTROL), 2, 2)
        self.assertEqual(self.run_cli("verify", "hiroshima", path), 4)
        self.assertEqual(self.run_cli("verify", "hiroshima", path, "--force"), 1)
        report = read_json(self.tmp / "out" / "verify_report.json")
        certificate = report["certificates"][0]
        self.assertTrue(certificate["hypothesis_violated"])
        self.assertAlmostEqual(min(i["margin"] for i in certificate["items"]), -1.0)

    def test_verify_plain_matrix_with_layout(self):
        plain = self.tmp / "plain.json"
        plain.write_text(json.dumps({"rows": 2, "cols": 2, "data": [[1, 0], [1, 0], [1, 0], [1, 0]]}))
        self.assertEqual(self.run_cli("verify", "eigen-step", str(plain), "--beta", "2"), 0)
        self.assertEqual(self.run_cli("verify", "eigen-step", str(plain)), 2)

    def test_verify_trace_and_functions(self):
        path = self.write_block("ones.json", ONES, 2, 1)
        self.assertEqual(self.run_cli("verify", "trace-concave", path, "--f", "log1p"), 0)
        self.assertEqual(self.run_cli("verify", "trace-concave", path, "--f", "exp"), 2)
        self.assertEqual(self.run_cli("verify", "trace-concave", path), 2)
        self.assertEqual(self.run_cli("verify", "determinant", path), 0)
        self.assertEqual(self.run_cli("verify", "norm-bound", path, "--p", "2"), 0)

    def test_verify_parallel_keeps_order(self):
        paths = [self.write_block(f"m{i}.json", np.eye(4) * (i + 1), 2, 2) for i in range(3)]
        self.assertEqual(self.run_cli("verify", "eigen-avg", *paths, "--jobs", "3"), 0)
        report = read_json(self.tmp / "out" / "verify_report.json")
        self.assertEqual([c["context"]["input"] for c in report["certificates"]], paths)

    def test_tolerance_override(self):
        path = self.write_block("ones.json", ONES, 2, 1)
        self.assertEqual(self.run_cli("verify", "hiroshima", path, "--tol", "1e-6"), 0)
        report = read_json(self.tmp / "out" / "verify_report.json")
        self.assertEqual(report["tolerances"]["tol_cert"], 1e-6)

    def test_malformed_input(self):
        bad = self.tmp / "bad.json"
        bad.write_text("{not json")
        self.assertEqual(self.run_cli("verify", "hiroshima", str(bad)), 2)
        missing = self.tmp / "short.json"
        missing.write_text(json.dumps({"beta": 2, "n": 1, "matrix": {"rows": 2, "cols": 2, "data": [[1, 0]]}}))
        self.assertEqual(self.run_cli("verify", "hiroshima", str(missing)), 2)

    def test_not_psd_input(self):
        path = self.tmp / "indefinite.json"
        path.write_text(json.dumps({"beta": 2, "n": 1, "matrix": {"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [-1, 0]]}}))
        self.assertEqual(self.run_cli("verify", "hiroshima", str(path)), 2)

    def test_decompose_two_block_round_trip(self):
        print("\n>>> Testing decompose and reload...")
        path = self.write_block("ones.json", ONES, 2, 1)
        out = self.tmp / "d.json"
        self.assertEqual(self.run_cli("decompose", "two-block", path, "--out", str(out)), 0)
        decomposition = load_decomposition(out)
        self.assertEqual(decomposition.weight, 0.5)
        self.assertLessEqual(decomposition.residual(ONES), 1e-10)
        report = read_json(self.tmp / "out" / "decompose_report.json")
        self.assertLessEqual(report["decompositions"][0]["residual"], 1e-10)

    def test_decompose_clifford_padding(self):
        rng = np.random.default_rng(6)
        g = rng.standard_normal((3, 3))
        path = self.write_block("three.json", g @ g.T, 3, 1)
        self.assertEqual(self.run_cli("decompose", "clifford", path), 2)
        self.assertEqual(self.run_cli("decompose", "clifford", path, "--pad"), 0)
        summary = read_json(self.tmp / "out" / "decompose_report.json")["decompositions"][0]
        self.assertEqual(summary["beta"], 4)
        self.assertEqual(summary["padded_from"], 3)

    def test_decompose_clifford_structured(self):
        path = self.write_block("ones.json", ONES + np.eye(2), 2, 1)
        out = self.tmp / "structured.json"
        self.assertEqual(self.run_cli("decompose", "clifford", path, "--structured", "--out", str(out)), 0)
        document = read_json(out)
        self.assertFalse(document["materialized"])
        summary = read_json(self.tmp / "out" / "decompose_report.json")["decompositions"][0]
        self.assertEqual(summary["residual_kind"], "probe")

    def test_decompose_clifford_structured_beta_eight(self):
        print("\n>>> Testing structured Clifford decomposition above the dense cap...")
        carrier = np.kron(np.eye(8) + np.ones((8, 8)), np.diag([1.0, 2.0, 3.0]))
        path = self.write_block("eight_by_three.json", carrier, 8, 3)
        self.assertEqual(self.run_cli("decompose", "clifford", path, "--structured", "--probes", "3"), 0)
        summary = read_json(self.tmp / "out" / "decompose_report.json")["decompositions"][0]
        self.assertEqual(summary["m"], 256)
        self.assertEqual(summary["residual_kind"], "probe")
        self.assertEqual(len(summary["isometry_defects"]), 8)
        self.assertLessEqual(max(summary["isometry_defects"]), 1e-9)

    def test_decompose_clifford_structured_singular_partial_trace(self):
        path = self.write_block("singular.json", np.kron(ONES + np.eye(2), np.diag([1.0, 0.0])), 2, 2)
        self.assertEqual(self.run_cli("decompose", "clifford", path, "--structured"), 0)
        summary = read_json(self.tmp / "out" / "decompose_report.json")["decompositions"][0]
        self.assertLessEqual(max(summary["isometry_defects"]), 1e-7)

    def test_resource_limit(self):
        path = self.write_block("eight.json", np.eye(8), 8, 1)
        self.assertEqual(self.run_cli("decompose", "clifford", path), 3)

    def test_decompose_refuses_non_hermitian_blocks(self):
        path = self.write_block("control.json", np.outer(X_CONTROL, X_CONTROL), 2, 2)
        self.assertEqual(self.run_cli("decompose", "clifford", path), 2)
        self.assertEqual(self.run_cli("decompose", "two-block", path), 2)
        self.assertEqual(self.run_cli("decompose", "pinch", path), 0)

    def test_generate_is_byte_identical(self):
        print("\n>>> Testing deterministic generate...")
        first, second = self.tmp / "a.json", self.tmp / "b.json"
        for out in (first, second):
            self.assertEqual(self.run_cli("generate", "--method", "gram", "--seed", "42", "--beta", "2", "--n", "3", "--out", str(out)), 0)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertEqual(read_json(first)["provenance"]["seed"], 42)
        self.assertEqual(self.run_cli("verify", "hiroshima", str(first)), 0)

    def test_generate_family_and_state_feed_verify(self):
        family = self.tmp / "family.json"
        state = self.tmp / "state.json"
        self.assertEqual(self.run_cli("generate", "--method", "commuting", "--seed", "1", "--beta", "3", "--n", "3", "--out", str(family)), 0)
        self.assertEqual(self.run_cli("generate", "--method", "separable-state", "--seed", "1", "--beta", "2", "--n", "2", "--out", str(state)), 0)
        self.assertEqual(self.run_cli("verify", "rearrange", str(family), "--mode", "eigensteps"), 0)
        self.assertEqual(self.run_cli("verify", "nielsen-kempe", str(state)), 0)

    def test_generate_projected_cap(self):
        out = self.tmp / "p.json"
        self.assertEqual(self.run_cli("generate", "--method", "projected", "--max-iter", "1", "--out", str(out)), 2)

    def test_search(self):
        self.assertEqual(self.run_cli("search", "--budget", "0"), 0)
        self.assertEqual(self.run_cli("search", "--budget", "2", "--n", "2", "--steps", "2", "--self-test"), 0)
        notes = read_json(self.tmp / "out" / "search_report.json")["notes"]
        prefix = "self-test gap on rank-one control: "
        gaps = [float(note[len(prefix):]) for note in notes if note.startswith(prefix)]
        self.assertEqual(len(gaps), 1)
        self.assertAlmostEqual(gaps[0], 1.0)

    def test_no_command(self):
        self.assertEqual(main([]), 2)


class TestSamples(unittest.TestCase):
    """The sample documents shipped in samples/ run as documented."""

    SAMPLES = Path(__file__).parent.parent / "samples"

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.out = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def run_sample(self, *argv, sample):
        return main([*argv[:2], str(self.SAMPLES / sample), *argv[2:], "--output-dir", str(self.out), "--quiet"])

    def test_documented_commands(self):
        print("\n>>> Testing sample documents...")
        self.assertEqual(self.run_sample("decompose", "two-block", sample="all_ones_scalar.json"), 0)
        self.assertEqual(self.run_sample("decompose", "clifford", "--pad", sample="three_blocks.json"), 0)
        self.assertEqual(self.run_sample("verify", "hiroshima", sample="identity4.json"), 0)
        self.assertEqual(self.run_sample("verify", "hiroshima", sample="rank_one_control.json"), 4)
        self.assertEqual(self.run_sample("verify", "hiroshima", "--force", sample="rank_one_control.json"), 1)
        self.assertEqual(
            self.run_sample("verify", "eigen-avg", "--beta", "2", "--k", "1", "--splits", "0,2", sample="plain_matrix.json"), 0
        )
        self.assertEqual(self.run_sample("verify", "rearrange", "--mode", "eigensteps", sample="commuting_family.json"), 0)
        self.assertEqual(self.run_sample("verify", "nielsen-kempe", sample="separable_state.json"), 0)
        self.assertEqual(self.run_sample("verify", "trace-concave", "--f", "log1p", sample="all_ones_scalar.json"), 0)


if __name__ == "__main__":
    unittest.main()
