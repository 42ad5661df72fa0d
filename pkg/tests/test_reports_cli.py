"""Tests for resource reports and the command-line front end."""

import importlib.util
import json
import sys
import tempfile
import unittest
from pathlib import Path

import pandas as pd

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.analysis.reports import fit_log_scaling, report_row, sweep, write_report
from src.analysis.verification import run_suites, verify_pipeline
from src.builders.catalog import build_circuit
from src.config.settings import settings
from src.errors import AnalysisError, BuilderError, QftLineError


def _load_cli():
    loader_spec = importlib.util.spec_from_file_location("qftline_cli", project_root / "scripts" / "qftline.py")
    module = importlib.util.module_from_spec(loader_spec)
    loader_spec.loader.exec_module(module)
    return module


class TestScalingFit(unittest.TestCase):
    """Test the logarithmic fit."""

    def test_exact_log_law(self):
        """Test that a pure log law fits with zero residual."""
        xs = [4, 8, 16, 32]
        fit = fit_log_scaling(xs, [3 * k + 5 for k in (2, 3, 4, 5)])
        self.assertAlmostEqual(fit.slope, 3.0)
        self.assertAlmostEqual(fit.intercept, 5.0)
        self.assertLess(fit.max_relative_residual, 1e-9)
        self.assertAlmostEqual(fit.predict(64), 23.0)

    def test_needs_two_points(self):
        """Test the input check."""
        with self.assertRaises(AnalysisError):
            fit_log_scaling([4], [1])


class TestReports(unittest.TestCase):
    """Test rows, sweeps and report files."""

    def test_row_columns(self):
        """Test that a row carries exactly the report columns."""
        circuit = build_circuit("qfs", 3, exact=True)
        row = report_row("qfs", 3, None, circuit)
        self.assertEqual(list(row), settings.REPORT_COLUMNS)
        self.assertEqual(row["width_qubits"], 6)
        self.assertEqual(row["measurements"], 0)
        self.assertEqual(row["bound"], 0.0)

    def test_sweep(self):
        """Test a quiet sweep with measured errors."""
        table = sweep("qft-uni", [4], epsilon=0.25, measure=True, quiet=True)
        self.assertEqual(list(table.columns), settings.REPORT_COLUMNS)
        self.assertEqual(list(sweep("longrange-cx", [5, 3], quiet=True)["n"]), [3, 5])
        self.assertTrue((table["measured_error"] <= table["bound"]).all())

    def test_unknown_kind(self):
        """Test that sweeps reject unknown builders."""
        with self.assertRaises(BuilderError):
            sweep("teleport", [2], quiet=True)

    def test_write_csv_and_json(self):
        """Test both report formats."""
        table = sweep("longrange-cx", [3, 5], quiet=True)
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = write_report(table, Path(tmp) / "out" / "lr.csv")
            self.assertEqual(list(pd.read_csv(csv_path).columns), settings.REPORT_COLUMNS)
            json_path = write_report(table, Path(tmp) / "lr.json")
            records = json.loads(json_path.read_text(encoding="utf-8"))
            self.assertEqual([r["n"] for r in records], [3, 5])


class TestVerification(unittest.TestCase):
    """Test suite dispatch."""

    def test_widths_suite(self):
        """Test a passing suite run."""
        report = run_suites(["widths"], max_n=3)
        self.assertTrue(report.passed)
        self.assertIn("results", report.to_dict())

    def test_unknown_suite(self):
        """Test that an unknown suite name raises."""
        with self.assertRaises(QftLineError):
            run_suites(["nonsense"], max_n=3)

    def test_pipeline_by_builder(self):
        """Test that a builder maps onto its suites."""
        report = verify_pipeline("longrange-cx", [2, 3])
        self.assertEqual(report.builder, "longrange-cx")
        self.assertTrue(report.passed)
        with self.assertRaises(QftLineError):
            verify_pipeline("teleport", [2])


class TestCommandLine(unittest.TestCase):
    """Test the qftline script."""

    @classmethod
    def setUpClass(cls):
        cls.cli = _load_cli()

    def test_range_parsing(self):
        """Test single values, ranges and lists."""
        self.assertEqual(self.cli.parse_range("3"), [3])
        self.assertEqual(self.cli.parse_range("2..4"), [2, 3, 4])
        self.assertEqual(self.cli.parse_range("1,4,9"), [1, 4, 9])

    def test_build_and_simulate(self):
        """Test that a saved circuit can be simulated from the command line."""
        with tempfile.TemporaryDirectory() as tmp:
            circuit_path = Path(tmp) / "qfs.json"
            result_path = Path(tmp) / "run.json"
            self.assertEqual(
                self.cli.main(["build", "--kind", "qfs", "--n", "3", "--exact", "--out", str(circuit_path)]), 0
            )
            self.assertTrue(circuit_path.exists())
            code = self.cli.main(
                ["simulate", "--circuit", str(circuit_path), "--basis", "A=5", "--seed", "1..3", "--out", str(result_path)]
            )
            self.assertEqual(code, 0)
            result = json.loads(result_path.read_text(encoding="utf-8"))
            self.assertEqual(len(result["shots"]), 3)
            self.assertEqual(result["width"], 6)

    def test_kind_alias(self):
        """Test that the short builder names are accepted."""
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "lr.json"
            self.assertEqual(self.cli.main(["build", "--kind", "longrange", "--n", "4", "--out", str(out)]), 0)

    def test_report(self):
        """Test a quiet CSV sweep."""
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "add.csv"
            self.assertEqual(self.cli.main(["report", "--kind", "add", "--n", "2..3", "--quiet", "--out", str(out)]), 0)
            table = pd.read_csv(out)
            self.assertEqual(list(table["n"]), [2, 3])

    def test_verify(self):
        """Test that a passing suite exits with zero."""
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "verify.json"
            self.assertEqual(self.cli.main(["verify", "--suite", "widths", "--max-n", "3", "--out", str(out)]), 0)
            self.assertTrue(json.loads(out.read_text(encoding="utf-8"))["pass"])

    def test_errors_exit_nonzero(self):
        """Test that library errors become exit code 1."""
        self.assertEqual(self.cli.main(["build", "--kind", "teleport", "--n", "3"]), 1)
        self.assertEqual(self.cli.main(["build", "--kind", "qft-uni", "--n", "3"]), 1)
        self.assertEqual(self.cli.main(["simulate", "--circuit", "/nonexistent/circuit.json"]), 1)


if __name__ == '__main__':
    unittest.main()
