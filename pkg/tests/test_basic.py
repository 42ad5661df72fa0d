"""Basic tests for settings and package imports."""

import os
import unittest
import sys
from pathlib import Path
from unittest import mock

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.config.settings import settings
from src.errors import ConfigurationError, QftLineError


class TestSettings(unittest.TestCase):
    """Test configuration settings."""

    def test_settings_exist(self):
        """Test that settings can be imported and have expected attributes."""
        self.assertIsNotNone(settings.LOG_LEVEL)
        self.assertGreater(settings.MAX_DENSE_QUBITS, settings.MAX_UNITARY_QUBITS)
        self.assertIsInstance(settings.REPORT_COLUMNS, list)
        self.assertIsInstance(settings.BUILDER_KINDS, list)

    def test_report_columns(self):
        """Test the fixed CSV column order."""
        self.assertEqual(
            settings.REPORT_COLUMNS,
            ["builder", "n", "epsilon", "k", "width_qubits", "clbits", "depth", "size",
             "measurements", "measured_error", "bound"],
        )

    def test_output_paths(self):
        """Test output directory generation."""
        self.assertEqual(settings.circuits_dir.parent, settings.reports_dir.parent)
        self.assertEqual(settings.reports_dir.name, "reports")

    def test_tolerances(self):
        """Test the tolerance dictionary."""
        tolerances = settings.get_tolerances()
        self.assertEqual(set(tolerances), {"norm", "state"})
        self.assertTrue(all(t > 0 for t in tolerances.values()))


class TestSeedResolution(unittest.TestCase):
    """Test the explicit seed and QFTLINE_SEED fallback."""

    def test_explicit_seed_wins(self):
        """Test that an explicit seed ignores the environment."""
        with mock.patch.dict(os.environ, {"QFTLINE_SEED": "99"}):
            self.assertEqual(settings.resolve_seed(7), 7)

    def test_environment_fallback(self):
        """Test that QFTLINE_SEED is used when no seed is given."""
        with mock.patch.dict(os.environ, {"QFTLINE_SEED": "42"}):
            self.assertEqual(settings.resolve_seed(None), 42)

    def test_missing_seed(self):
        """Test that a required seed raises when unset."""
        with mock.patch.dict(os.environ, {"QFTLINE_SEED": ""}), \
                mock.patch.object(type(settings), "QFTLINE_SEED", None):
            with self.assertRaises(ConfigurationError):
                settings.resolve_seed(None)
            self.assertIsNone(settings.resolve_seed(None, required=False))

    def test_bad_seed(self):
        """Test that a non-integer QFTLINE_SEED is rejected."""
        with mock.patch.dict(os.environ, {"QFTLINE_SEED": "abc"}):
            with self.assertRaises(ConfigurationError):
                settings.resolve_seed(None)
        self.assertTrue(issubclass(ConfigurationError, QftLineError))


class TestImports(unittest.TestCase):
    """Test that the subpackages can be imported."""

    def test_import_packages(self):
        """Test that every subpackage can be imported."""
        try:
            from src.analysis import error_budget
            from src.builders import build_circuit
            from src.circuit import Circuit
            from src.simulation import run
        except ImportError as e:
            self.fail(f"Failed to import package: {e}")
        self.assertTrue(callable(build_circuit))


if __name__ == '__main__':
    unittest.main()
