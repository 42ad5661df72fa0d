"""Tests for the block QFT and the Fourier-state phase computation."""

import sys
import unittest
from pathlib import Path

import numpy as np

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.analysis.bounds import qfs_error, xi_table
from src.analysis.oracles import dft_oracle
from src.analysis.verification import VerificationReport, suite_qfs
from src.builders.qfs import QfsParams, build_qfs, build_qfs_classical, kept_pairs
from src.builders.small_qft import build_small_qft
from src.circuit.ir import GateKind, RegisterMap
from src.circuit.schedule import audit_connectivity, depth_report
from src.errors import BuilderError
from src.simulation.states import prepare_basis, register_value
from src.simulation.statevector import SimOptions, basis_indices, run, unitary


def _diagonal(circuit, n):
    registers = RegisterMap.canonical(n)
    qubits = list(registers.positions("A")) + list(registers.positions("B"))
    matrix = unitary(circuit, qubits)
    return matrix, np.diag(matrix[basis_indices(qubits)])


class TestSmallQft(unittest.TestCase):
    """Test the exact block QFT."""

    def test_matches_dft(self):
        """Test the dense action against the DFT for several block sizes."""
        for size in (1, 2, 3, 4):
            matrix = unitary(build_small_qft(size))
            np.testing.assert_allclose(matrix, dft_oracle(size), atol=1e-10)

    def test_adjoint(self):
        """Test the inverse block QFT."""
        matrix = unitary(build_small_qft(3, adjoint=True))
        np.testing.assert_allclose(matrix, dft_oracle(3, sign=-1), atol=1e-10)

    def test_hops_over_foreign_qubits(self):
        """Test a block spread over every other position."""
        circuit = build_small_qft(3, slots=[0, 2, 4])
        self.assertFalse(audit_connectivity(circuit))
        matrix = unitary(circuit, [0, 2, 4])
        np.testing.assert_allclose(matrix[basis_indices([0, 2, 4])], dft_oracle(3), atol=1e-10)

    def test_invalid_block(self):
        """Test parameter validation."""
        with self.assertRaises(BuilderError):
            build_small_qft(0)
        with self.assertRaises(BuilderError):
            build_small_qft(3, slots=[0, 1])


class TestQfs(unittest.TestCase):
    """Test the meshed controlled-phase network."""

    def test_exact_phases(self):
        """Test that the exact network is diag(omega^(a b))."""
        n = 3
        matrix, diag = _diagonal(build_qfs(QfsParams(n=n, exact=True)), n)
        values = np.arange(2 ** (2 * n))
        a, b = values % 2 ** n, values >> n
        np.testing.assert_allclose(diag, np.exp(2j * np.pi * a * b / 2 ** n), atol=1e-10)
        self.assertAlmostEqual(np.linalg.norm(matrix) ** 2, float(2 ** (2 * n)))

    def test_truncated_phases(self):
        """Test that truncation leaves exactly the closed-form defect."""
        n, k_max = 4, 2
        _, exact = _diagonal(build_qfs(QfsParams(n=n, exact=True)), n)
        _, truncated = _diagonal(build_qfs(QfsParams(n=n, k_max=k_max)), n)
        values = np.arange(2 ** (2 * n))
        defect = xi_table(n, k_max)[values % 2 ** n, values >> n]
        np.testing.assert_allclose(truncated, exact * np.exp(-2j * np.pi * defect), atol=1e-10)
        self.assertAlmostEqual(float(np.max(np.abs(exact - truncated))), qfs_error(n, k_max), places=10)

    def test_adjoint_inverts(self):
        """Test that QFS^dagger undoes QFS."""
        n = 3
        _, forward = _diagonal(build_qfs(QfsParams(n=n, exact=True)), n)
        _, backward = _diagonal(build_qfs(QfsParams(n=n, exact=True, adjoint=True)), n)
        np.testing.assert_allclose(forward * backward, np.ones_like(forward), atol=1e-10)

    def test_gate_count_and_connectivity(self):
        """Test one controlled phase per kept pair on nearest neighbours."""
        circuit = build_qfs(QfsParams(n=3, exact=True))
        self.assertEqual(circuit.count(GateKind.CP), 6)
        self.assertEqual(len(kept_pairs(3, 3)), 6)
        self.assertEqual(len(kept_pairs(4, 2)), 7)
        self.assertFalse(audit_connectivity(circuit))
        self.assertEqual(circuit.width, 6)

    def test_linear_depth(self):
        """Test that depth grows at most linearly with n."""
        depths = [depth_report(build_qfs(QfsParams(n=n, exact=True))).depth for n in (4, 8, 16)]
        self.assertEqual(depths, sorted(depths))
        self.assertLessEqual(depths[2], 3 * depths[1])

    def test_invalid_truncation(self):
        """Test k_max validation."""
        with self.assertRaises(BuilderError):
            build_qfs(QfsParams(n=3, k_max=4))
        with self.assertRaises(BuilderError):
            build_qfs(QfsParams(n=0))

    def test_suite(self):
        """Test the dense acceptance suite at desk scale."""
        report = VerificationReport(builder="qfs")
        suite_qfs(report, max_n=4)
        self.assertTrue(report.passed, [r.name for r in report.failures])


class TestClassicalQfs(unittest.TestCase):
    """Test phases driven by a classical integer."""

    def test_phases_on_basis_states(self):
        """Test omega^(c k) on every basis value of B."""
        n, c = 3, 5
        circuit = build_qfs_classical(n, c)
        self.assertEqual(circuit.preset_clbits, {0: 1, 1: 0, 2: 1})
        b = circuit.registers.positions("B")
        for k in range(2 ** n):
            final, _ = run(circuit, prepare_basis(circuit.registers, B=k), SimOptions(seed=0))
            self.assertEqual(register_value(final, b), k)
            index = int(np.argmax(np.abs(final.amplitudes)))
            phase = final.amplitudes[index]
            self.assertAlmostEqual(phase, np.exp(2j * np.pi * c * k / 2 ** n), places=10)

    def test_negative_sign(self):
        """Test the conjugate phases."""
        circuit = build_qfs_classical(2, 3, sign=-1)
        final, _ = run(circuit, prepare_basis(circuit.registers, B=1), SimOptions(seed=0))
        index = int(np.argmax(np.abs(final.amplitudes)))
        self.assertAlmostEqual(final.amplitudes[index], np.exp(-2j * np.pi * 3 / 4), places=10)
        with self.assertRaises(BuilderError):
            build_qfs_classical(2, 4)

    def test_depth_is_linear(self):
        """Test that the classically driven phases take one layer per bit and no two-qubit gates."""
        for n in (3, 5, 8):
            circuit = build_qfs_classical(n, 1)
            self.assertEqual(depth_report(circuit).depth, n)
            self.assertTrue(all(len(op.qubits) == 1 for op in circuit.ops))


if __name__ == '__main__':
    unittest.main()
