"""Tests for the uniform and general QFT constructions."""

import sys
import unittest
from pathlib import Path

import numpy as np

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.analysis.bounds import qfs_mean_error
from src.analysis.reports import fit_log_scaling
from src.analysis.oracles import sample_uniform_state
from src.analysis.verification import VerificationReport, suite_variants, transform_error
from src.builders.qft import QftVariant, build_qft_general, build_qft_uni, draw_offsets
from src.circuit.ir import GateKind, RegisterMap
from src.circuit.schedule import audit_connectivity, depth_report
from src.errors import BuilderError
from src.simulation.states import embed, restrict, state_distance
from src.simulation.statevector import SimOptions, run


def _random_vector(size, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    vector = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return vector / np.linalg.norm(vector)


def _uniform_input(circuit, n, seed):
    registers = RegisterMap({"A": circuit.metadata["input_register"]})
    return sample_uniform_state(n, registers, seed, width=circuit.width)


class TestQftUni(unittest.TestCase):
    """Test the uniform-input construction."""

    def test_forward_layout(self):
        """Test width, connectivity and the register swap."""
        circuit = build_qft_uni(4, 0.25)
        self.assertEqual(circuit.width, 8)
        self.assertEqual(audit_connectivity(circuit), [])
        canonical = RegisterMap.canonical(4)
        self.assertEqual(list(circuit.metadata["input_register"]), list(canonical.positions("A")))
        self.assertEqual(list(circuit.metadata["output_register"]), list(canonical.positions("B")))
        self.assertEqual(circuit.registers.positions("A"), canonical.positions("B"))
        self.assertEqual(circuit.metadata["flag_clbits"], [])

    def test_forward_error(self):
        """Test the distance to the exact QFT on uniform inputs."""
        circuit = build_qft_uni(4, 0.25)
        for seed in range(3):
            self.assertLessEqual(transform_error(circuit, _uniform_input(circuit, 4, seed), seed), 0.25)

    def test_backward_error(self):
        """Test that the backward direction moves B onto A."""
        circuit = build_qft_uni(4, 0.25, QftVariant(direction="backward"))
        self.assertEqual(circuit.width, 8)
        self.assertEqual(audit_connectivity(circuit), [])
        canonical = RegisterMap.canonical(4)
        self.assertEqual(list(circuit.metadata["input_register"]), list(canonical.positions("B")))
        self.assertLessEqual(transform_error(circuit, _uniform_input(circuit, 4, 1), 1), 0.25)

    def test_measure_early_uses_measurements(self):
        """Test that the measure-early variants measure mid-circuit and stay accurate."""
        for direction in ("forward", "backward"):
            circuit = build_qft_uni(4, 0.25, QftVariant(direction=direction, mcm_opt="measure-early"))
            self.assertEqual(circuit.count(GateKind.M), 4)
            self.assertEqual(circuit.width, 8)
            for seed in range(3):
                self.assertLessEqual(transform_error(circuit, _uniform_input(circuit, 4, seed), seed), 0.25)

    def test_postselect_flags(self):
        """Test that the flag register reads zero after an exact estimation."""
        circuit = build_qft_uni(4, 0.25, QftVariant(mcm_opt="postselect-flag"))
        flags = circuit.metadata["flag_clbits"]
        self.assertEqual(len(flags), 4)
        for seed in range(4):
            _, record = run(circuit, _uniform_input(circuit, 4, seed), SimOptions(seed=seed))
            self.assertEqual([record.bits[b] for b in flags], [0, 0, 0, 0])

    def test_variants_agree(self):
        """Test that every direction and measurement option gives the same output."""
        report = VerificationReport(builder="qft-uni")
        suite_variants(report, max_n=4, seeds=range(3))
        self.assertTrue(report.passed, msg=[f.to_dict() for f in report.failures])

    def test_forced_parameters_within_bound(self):
        """Test every direction and measurement option with approximate stages against the bound."""
        report = VerificationReport(builder="qft-uni")
        suite_variants(report, max_n=4, seeds=range(1))
        self.assertTrue(report.passed, msg=[f.to_dict() for f in report.failures])
        for k_max, k in ((2, 2), (4, 1), (2, 1)):
            forced = [r for r in report.results if f"k_max={k_max} k={k} " in r.name]
            self.assertEqual(len(forced), 6)
            self.assertTrue(all(r.passed for r in forced))
        bound = [r.bound for r in report.results if "k_max=2 k=2 " in r.name]
        self.assertAlmostEqual(bound[0], qfs_mean_error(4, 2))
        exact_tail = next(r for r in report.results if r.name.endswith("k_max=2 k=2 backward measure-early"))
        self.assertLess(exact_tail.measured["purified"], 1e-6)

    def test_measured_outputs_do_not_depend_on_outcomes(self):
        """Test that fifty seeds give one output for every measuring variant."""
        report = VerificationReport(builder="qft-uni")
        suite_variants(report, max_n=4, seeds=range(1))
        spreads = {r.name: r for r in report.results if r.name.endswith("outcome independence")}
        self.assertEqual(len(spreads), 3)
        for result in spreads.values():
            self.assertTrue(result.passed, msg=result.to_dict())

    def test_fixed_parameters_at_scale(self):
        """Test that forced parameters build a 2n-wide nearest-neighbour circuit."""
        circuit = build_qft_uni(16, 0.5, k_max=4, k=2)
        self.assertEqual(circuit.width, 32)
        self.assertEqual(circuit.metadata["budget"]["k"], 2)
        self.assertEqual(audit_connectivity(circuit), [])

    def test_depth_log_fit(self):
        """Test depth against log2(n / eps**2) over n = 4..10 with exact stages."""
        sizes = range(4, 11)
        depths = [depth_report(build_qft_uni(n, 0.25)).depth for n in sizes]
        fit = fit_log_scaling([n / 0.25 ** 2 for n in sizes], depths)
        self.assertLessEqual(fit.max_relative_residual, 0.15)
        self.assertEqual(depths, sorted(depths))

    def test_validation(self):
        """Test the missing epsilon and wrong kind errors."""
        with self.assertRaises(BuilderError):
            build_qft_uni(4)
        with self.assertRaises(BuilderError):
            build_qft_uni(4, 0.25, QftVariant(kind="general"))
        with self.assertRaises(BuilderError):
            QftVariant(mcm_opt="later").validate()


class TestQftGeneral(unittest.TestCase):
    """Test the randomized construction."""

    def test_offsets_are_seeded(self):
        """Test that the offsets depend only on the seed."""
        self.assertEqual(draw_offsets(5, 11), draw_offsets(5, 11))
        for seed in range(10):
            c1, c2 = draw_offsets(3, seed)
            self.assertTrue(0 <= c1 < 8 and 0 <= c2 < 8)

    def test_layout_and_metadata(self):
        """Test the width bound and the recorded offsets."""
        circuit, (c1, c2) = build_qft_general(3, 0.5, seed=4)
        self.assertLessEqual(circuit.width, 12)
        self.assertEqual(audit_connectivity(circuit), [])
        self.assertEqual((circuit.metadata["c1"], circuit.metadata["c2"]), (c1, c2))
        self.assertEqual(len(circuit.metadata["c1_clbits"]), 3)
        self.assertEqual(len(circuit.preset_clbits), 6)

    def test_basis_input_error(self):
        """Test the distance to the exact QFT on a basis state."""
        for seed in (0, 1):
            circuit, _ = build_qft_general(3, 0.5, seed=seed)
            vector = np.zeros(8, dtype=complex)
            vector[1] = 1.0
            initial = embed(vector, circuit.metadata["input_register"], circuit.width)
            self.assertLessEqual(transform_error(circuit, initial, seed), 0.5)

    def test_encode_stage(self):
        """Test that the ops before the inner transform map |j> to omega**(j*c1) |j + c2>."""
        n, size = 3, 8
        circuit, (c1, c2) = build_qft_general(n, 0.5, offsets=(5, 3))
        prefix = circuit.copy(with_ops=False).extend(circuit.ops[: circuit.metadata["encode_ops"]])
        a = circuit.metadata["input_register"]
        psi = _random_vector(size, 4)
        expected = np.zeros(size, dtype=complex)
        for j in range(size):
            expected[(j + c2) % size] += psi[j] * np.exp(2j * np.pi * j * c1 / size)
        for seed in range(3):
            final, _ = run(prefix, embed(psi, a, circuit.width), SimOptions(seed=seed))
            self.assertLess(state_distance(final, embed(expected, a, circuit.width)).phase_aligned, 1e-9)

    def test_zero_offsets_reproduce_the_uniform_transform(self):
        """Test that offsets (0, 0) give the same output as QFT_uni."""
        n = 3
        general, _ = build_qft_general(n, 0.25, offsets=(0, 0))
        uni = build_qft_uni(n, 0.25)
        psi = _random_vector(2 ** n, 9)
        outputs = []
        for circuit in (general, uni):
            meta = circuit.metadata
            final, _ = run(circuit, embed(psi, meta["input_register"], circuit.width), SimOptions(seed=2))
            outputs.append(restrict(final, list(meta["output_register"]) + list(meta["input_register"]))[:, 0])
        self.assertGreater(np.linalg.norm(outputs[1]), 0.99)
        self.assertLess(state_distance(outputs[0], outputs[1]).phase_aligned, 1e-9)

    def test_validation(self):
        """Test direction, layout and offset checks."""
        with self.assertRaises(BuilderError):
            build_qft_general(3, 0.5, offsets=(0, 0), variant=QftVariant(kind="general", direction="backward"))
        with self.assertRaises(BuilderError):
            build_qft_general(3, 0.5, offsets=(8, 0))
        with self.assertRaises(BuilderError):
            build_qft_general(3, 0.5, offsets=(0, 0), registers=RegisterMap.canonical(3))


if __name__ == '__main__':
    unittest.main()
