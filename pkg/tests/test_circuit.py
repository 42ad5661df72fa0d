"""Tests for the circuit IR, scheduling and JSON documents."""

import json
import sys
import tempfile
import unittest
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.circuit.ir import Circuit, ClassicalExpr, GateKind, Operation, RegisterMap
from src.circuit.schedule import audit_connectivity, depth_report, layerize
from src.circuit.serialization import deserialize, load_circuit, save_circuit, serialize
from src.errors import CircuitError, SerializationError


class TestOperation(unittest.TestCase):
    """Test operation validation."""

    def test_arity(self):
        """Test that gates reject the wrong number of qubits."""
        with self.assertRaises(CircuitError):
            Operation(GateKind.CX, (0,))
        with self.assertRaises(CircuitError):
            Operation(GateKind.CX, (1, 1))

    def test_phase_parameters(self):
        """Test that RK needs k and only phase gates take a sign."""
        with self.assertRaises(CircuitError):
            Operation(GateKind.RK, (0,))
        with self.assertRaises(CircuitError):
            Operation(GateKind.RK, (0,), k=2.5)
        with self.assertRaises(CircuitError):
            Operation(GateKind.H, (0,), sign=-1)
        op = Operation(GateKind.CP, (0, 1), k=3, sign=-1)
        self.assertAlmostEqual(op.angle, -2 * 3.141592653589793 / 8)
        self.assertEqual(op.inverse().sign, 1)

    def test_condition_only_on_single_qubit_gates(self):
        """Test that two-qubit gates cannot be classically conditioned."""
        with self.assertRaises(CircuitError):
            Operation(GateKind.CX, (0, 1), cond=ClassicalExpr.of([0]))

    def test_classical_expression(self):
        """Test parity evaluation and negation."""
        expr = ClassicalExpr.of([2, 0])
        self.assertEqual(expr.parity, (0, 2))
        self.assertTrue(expr.evaluate({0: 1, 2: 0}))
        self.assertFalse(expr.evaluate({0: 1, 2: 1}))
        self.assertTrue(ClassicalExpr.constant(True).evaluate({}))
        self.assertTrue(ClassicalExpr.of([0], neg=True).evaluate({0: 0}))


class TestCircuit(unittest.TestCase):
    """Test circuit construction."""

    def test_out_of_range(self):
        """Test that positions beyond the width are rejected."""
        circuit = Circuit(width=2)
        with self.assertRaises(CircuitError):
            circuit.h(2)

    def test_condition_before_write(self):
        """Test that a condition cannot read an unwritten bit."""
        circuit = Circuit(width=2, n_clbits=1)
        with self.assertRaises(CircuitError):
            circuit.x(0, cond=ClassicalExpr.of([0]))
        circuit.measure(1, 0)
        circuit.x(0, cond=ClassicalExpr.of([0]))
        self.assertEqual(len(circuit), 2)

    def test_preset_bits_count_as_written(self):
        """Test that preset classical inputs can be read immediately."""
        circuit = Circuit(width=1)
        bits = circuit.add_clbits(3)
        circuit.preset(bits, 5)
        self.assertEqual(circuit.preset_clbits, {0: 1, 1: 0, 2: 1})
        circuit.rk(0, 2, cond=ClassicalExpr.of([2]))

    def test_measure_x_is_h_then_m(self):
        """Test the canonical form of an X-basis measurement."""
        circuit = Circuit(width=1)
        bit = circuit.measure_x(0)
        self.assertEqual([op.gate for op in circuit], [GateKind.H, GateKind.M])
        self.assertEqual(bit, 0)

    def test_inverse(self):
        """Test that inversion reverses order and negates phases."""
        circuit = Circuit(width=2)
        circuit.h(0).cp(0, 1, 2).s(1)
        inverse = circuit.inverse()
        self.assertEqual([op.gate for op in inverse], [GateKind.S, GateKind.CP, GateKind.H])
        self.assertEqual([op.sign for op in inverse], [-1, -1, 1])

    def test_compose_offsets_clbits(self):
        """Test that composed circuits get fresh classical bits."""
        first = Circuit(width=2)
        first.measure(0)
        second = Circuit(width=1)
        second.measure(0)
        first.compose(second, {0: 1})
        self.assertEqual(first.n_clbits, 2)
        self.assertEqual(first.ops[-1].qubits, (1,))
        self.assertEqual(first.ops[-1].clbits, (1,))

    def test_shape_is_fixed_and_metadata_read_only(self):
        """Test that width, registers and metadata change only through copies or annotate."""
        circuit = Circuit(width=2, registers=RegisterMap({"A": [0]}), metadata={"builder": "x"})
        with self.assertRaises(AttributeError):
            circuit.width = 3
        with self.assertRaises(AttributeError):
            circuit.registers = RegisterMap()
        with self.assertRaises(TypeError):
            circuit.metadata["builder"] = "y"
        with self.assertRaises(TypeError):
            circuit.preset_clbits[0] = 1
        circuit.annotate(builder="y")
        relabeled = circuit.with_registers(RegisterMap({"B": [1]}))
        self.assertEqual(circuit.registers.positions("A"), (0,))
        self.assertEqual(relabeled.registers.positions("B"), (1,))
        self.assertEqual(relabeled.metadata["builder"], "y")
        with self.assertRaises(CircuitError):
            circuit.with_registers(RegisterMap({"A": [5]}))
        self.assertEqual(circuit.widened(4).width, 4)
        self.assertEqual(circuit.width, 2)

    def test_canonical_registers(self):
        """Test the meshed layout."""
        registers = RegisterMap.canonical(3)
        self.assertEqual(registers.positions("A"), (4, 2, 0))
        self.assertEqual(registers.positions("B"), (1, 3, 5))
        self.assertEqual(registers.width, 6)
        swapped = registers.relabeled({"A": "B", "B": "A"})
        self.assertEqual(swapped.positions("A"), (1, 3, 5))

    def test_register_validation(self):
        """Test that overlapping or unknown registers are rejected."""
        with self.assertRaises(CircuitError):
            RegisterMap({"A": [0, 1], "B": [1]})
        with self.assertRaises(CircuitError):
            RegisterMap({"Q": [0]})


class TestSchedule(unittest.TestCase):
    """Test layering and connectivity."""

    def test_parallel_gates_share_a_layer(self):
        """Test ASAP scheduling."""
        circuit = Circuit(width=4)
        circuit.h(0).h(1).cx(0, 1).cx(2, 3)
        layers = layerize(circuit)
        self.assertEqual(len(layers), 2)
        self.assertEqual(len(layers[0]), 3)

    def test_feed_forward_waits_for_measurement(self):
        """Test that a conditioned gate follows its measurement."""
        circuit = Circuit(width=3)
        circuit.h(0).h(0)
        bit = circuit.measure(0)
        circuit.x(2, cond=ClassicalExpr.of([bit]))
        self.assertEqual(depth_report(circuit).depth, 4)

    def test_connectivity(self):
        """Test the nearest-neighbour audit."""
        circuit = Circuit(width=4)
        circuit.cx(0, 1).ccx(1, 2, 3).cx(0, 3)
        violations = audit_connectivity(circuit)
        self.assertEqual(len(violations), 1)
        self.assertEqual(violations[0].distance, 3)
        self.assertEqual(depth_report(circuit).max_distance, 3)


class TestSerialization(unittest.TestCase):
    """Test circuit JSON documents."""

    def _sample(self) -> Circuit:
        circuit = Circuit(width=3, registers=RegisterMap({"A": [0], "B": [1, 2]}))
        bits = circuit.add_clbits(1)
        circuit.preset(bits, 1)
        circuit.h(0).rk(1, 3, sign=-1, cond=ClassicalExpr.of(bits))
        circuit.measure(2)
        circuit.x(2, cond=ClassicalExpr.of([1], neg=True))
        circuit.annotate(builder="sample")
        return circuit

    def test_round_trip(self):
        """Test that a document decodes to the same ops, registers and presets."""
        circuit = self._sample()
        decoded = deserialize(serialize(circuit))
        self.assertEqual(decoded.ops, circuit.ops)
        self.assertEqual(decoded.registers, circuit.registers)
        self.assertEqual(decoded.preset_clbits, {0: 1})
        self.assertEqual(decoded.metadata["builder"], "sample")

    def test_document_layout(self):
        """Test the version field and gate encoding."""
        doc = json.loads(serialize(self._sample()))
        self.assertEqual(doc["version"], 1)
        self.assertEqual(doc["ops"][1], {"g": "RK", "q": [1], "k": 3, "sign": -1, "cond": {"parity": [0], "neg": False}})

    def test_malformed_documents(self):
        """Test version, gate and reference errors."""
        doc = json.loads(serialize(self._sample()))
        for mutate in (
            lambda d: d.update(version=2),
            lambda d: d["ops"].append({"g": "TOFFOLI", "q": [0, 1, 2]}),
            lambda d: d["ops"].append({"g": "H", "q": [7]}),
            lambda d: d["ops"].append({"g": "RK", "q": [0], "k": 2.5}),
            lambda d: d["ops"].append({"g": "RK", "q": [0], "k": "3"}),
            lambda d: d["ops"].append({"g": "CP", "q": [0, 1], "k": 2, "sign": -1.5}),
        ):
            bad = json.loads(json.dumps(doc))
            mutate(bad)
            with self.assertRaises(SerializationError):
                deserialize(json.dumps(bad))
        with self.assertRaises(SerializationError):
            deserialize(b"not json")

    def test_save_and_load(self):
        """Test file round trip."""
        circuit = self._sample()
        with tempfile.TemporaryDirectory() as tmp:
            path = save_circuit(circuit, Path(tmp) / "nested" / "c.json")
            self.assertEqual(load_circuit(path).ops, circuit.ops)
            with self.assertRaises(SerializationError):
                load_circuit(Path(tmp) / "missing.json")


if __name__ == '__main__':
    unittest.main()
