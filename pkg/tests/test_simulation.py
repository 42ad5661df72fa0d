"""Tests for the statevector simulator and state helpers."""

import sys
import unittest
from pathlib import Path
from unittest import mock

import numpy as np

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.circuit.ir import Circuit, ClassicalExpr, RegisterMap
from src.config.settings import settings
from src.errors import SimulationError
from src.simulation.reversible import evaluate, is_reversible, pack, unpack
from src.simulation.states import (
    as_matrix,
    fourier_state,
    fourier_vector,
    from_matrix,
    prepare_basis,
    register_distribution,
    register_value,
    shot_to_dict,
    state_distance,
)
from src.simulation.statevector import SimMode, SimOptions, StateVector, basis_indices, run, run_shots, unitary


def _bell() -> Circuit:
    circuit = Circuit(width=2)
    circuit.h(0).cx(0, 1)
    return circuit


class TestStateVector(unittest.TestCase):
    """Test basic amplitude handling."""

    def test_basis_bit_order(self):
        """Test that position p is bit p of the basis index."""
        circuit = Circuit(width=3)
        circuit.x(2)
        final, _ = run(circuit, options=SimOptions(seed=0))
        self.assertAlmostEqual(abs(final.amplitudes[4]), 1.0)

    def test_bell_state(self):
        """Test H then CX."""
        final, _ = run(_bell(), options=SimOptions(seed=0))
        expected = np.zeros(4, dtype=complex)
        expected[[0, 3]] = 1 / np.sqrt(2)
        np.testing.assert_allclose(final.amplitudes, expected, atol=1e-12)

    def test_controlled_phase(self):
        """Test CP(k=2) on |11>."""
        circuit = Circuit(width=2)
        circuit.cp(0, 1, 2)
        final, _ = run(circuit, StateVector.basis(2, 3), SimOptions(seed=0))
        self.assertAlmostEqual(final.amplitudes[3], 1j)

    def test_input_validation(self):
        """Test that wrong widths and unnormalized inputs are rejected."""
        with self.assertRaises(SimulationError):
            run(_bell(), StateVector.zero(3))
        with self.assertRaises(SimulationError):
            run(_bell(), StateVector(np.array([1.0, 1.0, 0.0, 0.0])))
        with self.assertRaises(SimulationError):
            SimOptions(mode="quantum")


class TestSampledMode(unittest.TestCase):
    """Test measurement with a seeded RNG."""

    def test_measurement_is_seeded(self):
        """Test that the same seed gives the same outcome."""
        circuit = _bell()
        circuit.measure(0)
        outcomes = [record.bits[0] for _, record in run_shots(circuit, None, [5, 5, 5])]
        self.assertEqual(len(set(outcomes)), 1)
        outcomes = {record.bits[0] for _, record in run_shots(circuit, None, range(40))}
        self.assertEqual(outcomes, {0, 1})

    def test_collapse_and_feed_forward(self):
        """Test that a conditioned X undoes a random outcome."""
        circuit = Circuit(width=1)
        circuit.h(0)
        bit = circuit.measure(0)
        circuit.x(0, cond=ClassicalExpr.of([bit]))
        for seed in range(8):
            final, record = run(circuit, options=SimOptions(seed=seed))
            self.assertAlmostEqual(abs(final.amplitudes[0]), 1.0)
            self.assertEqual(record.writers[bit], 1)

    def test_options_are_not_mutated(self):
        """Test that the fallback seed lands in the record, not in the caller's options."""
        circuit = _bell()
        circuit.measure(0)
        options = SimOptions()
        with mock.patch.object(settings, "resolve_seed", return_value=17):
            _, record = run(circuit, options=options)
        self.assertEqual(record.seed, 17)
        self.assertIsNone(options.seed)

    def test_reset(self):
        """Test that reset returns a qubit to |0>."""
        circuit = Circuit(width=1)
        circuit.h(0).reset(0)
        final, _ = run(circuit, options=SimOptions(seed=3))
        self.assertAlmostEqual(abs(final.amplitudes[0]), 1.0)

    def test_preset_bits(self):
        """Test that preset bits appear in the record and drive conditions."""
        circuit = Circuit(width=1)
        bits = circuit.add_clbits(1)
        circuit.preset(bits, 1)
        circuit.x(0, cond=ClassicalExpr.of(bits))
        final, record = run(circuit, options=SimOptions(seed=0))
        self.assertEqual(record.writers[0], -1)
        self.assertAlmostEqual(abs(final.amplitudes[1]), 1.0)


class TestDeferredMode(unittest.TestCase):
    """Test coherent measurement records."""

    def test_feed_forward_output_is_outcome_independent(self):
        """Test that a corrected X measurement leaves the same state on the partner."""
        circuit = Circuit(width=2)
        circuit.h(0).cx(0, 1)
        bit = circuit.measure_x(0)
        circuit.z(1, cond=ClassicalExpr.of([bit]))
        circuit.x(0, cond=ClassicalExpr.of([bit]))
        deferred, record = run(circuit, options=SimOptions(mode=SimMode.DEFERRED))
        self.assertEqual(record.symbolic, {0: 0})
        # partner qubit factors out of the coherent record
        self.assertEqual(np.linalg.matrix_rank(as_matrix(deferred, [1]), tol=1e-9), 1)
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        for seed in range(4):
            sampled, _ = run(circuit, options=SimOptions(seed=seed))
            np.testing.assert_allclose(as_matrix(sampled, [1])[:, 0], plus, atol=1e-12)

    def test_reused_record_moves_to_environment(self):
        """Test that reusing a measured-and-reset qubit widens the state."""
        circuit = Circuit(width=1)
        circuit.h(0)
        bit = circuit.measure(0)
        circuit.x(0, cond=ClassicalExpr.of([bit]))
        circuit.h(0)
        final, record = run(circuit, options=SimOptions(mode=SimMode.DEFERRED))
        self.assertEqual(final.width, 2)
        self.assertEqual(record.symbolic[bit], 1)

    def test_unsupported_operations(self):
        """Test the deferred-mode restrictions."""
        circuit = Circuit(width=1)
        circuit.h(0)
        circuit.measure(0)
        circuit.h(0)
        with self.assertRaises(SimulationError):
            run(circuit, options=SimOptions(mode=SimMode.DEFERRED))
        circuit = Circuit(width=1)
        circuit.reset(0)
        with self.assertRaises(SimulationError):
            run(circuit, options=SimOptions(mode=SimMode.DEFERRED))

    def test_unitary_columns(self):
        """Test the dense action of a CX on basis inputs."""
        circuit = Circuit(width=2)
        circuit.cx(0, 1)
        matrix = unitary(circuit)
        expected = np.eye(4)[:, [0, 3, 2, 1]]
        np.testing.assert_allclose(matrix, expected, atol=1e-12)
        column = unitary(circuit, [0])
        self.assertEqual(column.shape, (4, 2))
        self.assertAlmostEqual(abs(column[3, 1]), 1.0)


class TestStates(unittest.TestCase):
    """Test register-level helpers."""

    def setUp(self):
        self.registers = RegisterMap.canonical(2)

    def test_prepare_basis(self):
        """Test register values on the meshed layout."""
        state = prepare_basis(self.registers, A=2, B=1)
        self.assertEqual(register_value(state, self.registers.positions("A")), 2)
        self.assertEqual(register_value(state, self.registers.positions("B")), 1)
        with self.assertRaises(SimulationError):
            prepare_basis(self.registers, A=4)

    def test_fourier_state(self):
        """Test the Fourier state amplitudes and uniform marginal."""
        vector = fourier_vector(1, 2)
        np.testing.assert_allclose(vector, [0.5, 0.5j, -0.5, -0.5j], atol=1e-12)
        state = fourier_state(1, "B", self.registers)
        np.testing.assert_allclose(register_distribution(state, self.registers.positions("B")), [0.25] * 4)
        with self.assertRaises(SimulationError):
            register_value(state, self.registers.positions("B"))

    def test_matrix_round_trip(self):
        """Test that as_matrix and from_matrix are inverse."""
        rng = np.random.default_rng(4)
        amplitudes = rng.normal(size=16) + 1j * rng.normal(size=16)
        state = StateVector(amplitudes / np.linalg.norm(amplitudes), 4)
        positions = [2, 0]
        back = from_matrix(as_matrix(state, positions), positions, 4)
        np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-12)

    def test_basis_indices(self):
        """Test the placement of register values."""
        np.testing.assert_array_equal(basis_indices([1, 3]), [0, 2, 8, 10])

    def test_phase_aligned_distance(self):
        """Test that a global phase is ignored."""
        u = fourier_vector(3, 3)
        distance = state_distance(u, 1j * u)
        self.assertAlmostEqual(distance.phase_aligned, 0.0, places=7)
        self.assertAlmostEqual(distance.fidelity, 1.0)
        self.assertGreater(distance.two_norm, 1.0)

    def test_shot_export(self):
        """Test the JSON-ready shot document."""
        circuit = _bell()
        circuit.measure(1)
        final, record = run(circuit, options=SimOptions(seed=2))
        doc = shot_to_dict(record, final, top=2)
        self.assertEqual(doc["seed"], 2)
        self.assertEqual(len(doc["amplitudes"]), 1)
        self.assertIn("0", doc["record"]["bits"])


class TestReversible(unittest.TestCase):
    """Test the classical evaluator."""

    def test_toffoli_and_swap(self):
        """Test bitwise evaluation."""
        circuit = Circuit(width=4)
        circuit.ccx(0, 1, 2).swap(2, 3).x(0)
        index = pack({(0, 1): 3})
        out = evaluate(circuit, index)
        self.assertEqual(unpack(out, [0, 1, 2, 3]), 0b1010)
        self.assertTrue(is_reversible(circuit))

    def test_rejects_quantum_gates(self):
        """Test that H is not classical."""
        circuit = Circuit(width=1)
        circuit.h(0)
        self.assertFalse(is_reversible(circuit))
        with self.assertRaises(SimulationError):
            evaluate(circuit, 0)


if __name__ == '__main__':
    unittest.main()
