"""Dense statevector simulation of dynamic circuits.

Basis index bit ``p`` corresponds to line position ``p``; internally the
amplitudes are viewed as a tensor with one axis per qubit, most significant
position first, optionally followed by a batch axis.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..circuit.ir import Circuit, GateKind, Operation
from ..config.settings import settings
from ..errors import SimulationError

logger = logging.getLogger(__name__)

_SQRT_HALF = 1.0 / np.sqrt(2.0)


class SimMode(Enum):
    SAMPLED = "sampled"
    DEFERRED = "deferred"


@dataclass
class SimOptions:
    """Simulator configuration.

    Args:
        mode: ``sampled`` collapses on each measurement with a seeded RNG;
            ``deferred`` keeps measured qubits coherent and turns classical
            conditions into quantum controls.
        seed: RNG seed (sampled mode). Falls back to ``QFTLINE_SEED``.
        tolerance: Allowed norm drift after each operation.
        check_norm: Verify the norm after every operation.
    """

    mode: SimMode = SimMode.SAMPLED
    seed: Optional[int] = None
    tolerance: float = settings.NORM_TOL
    check_norm: bool = True

    def __post_init__(self):
        if isinstance(self.mode, str):
            try:
                self.mode = SimMode(self.mode)
            except ValueError:
                raise SimulationError(f"unknown simulation mode {self.mode!r}")


@dataclass
class MeasRecord:
    """Classical outcomes of one run.

    ``bits`` maps classical bit to outcome and ``writers`` to the index of the
    op that wrote it (-1 for preset inputs). In deferred mode ``symbolic``
    maps each measured bit to the position that holds its coherent record.
    """

    seed: Optional[int] = None
    bits: Dict[int, int] = field(default_factory=dict)
    writers: Dict[int, int] = field(default_factory=dict)
    symbolic: Dict[int, int] = field(default_factory=dict)

    def value(self, clbits: Sequence[int]) -> int:
        """Integer formed by ``clbits`` (first bit least significant)."""
        return sum(self.bits[c] << i for i, c in enumerate(clbits))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "bits": {str(c): v for c, v in sorted(self.bits.items())},
            "writers": {str(c): v for c, v in sorted(self.writers.items())},
            "symbolic": {str(c): v for c, v in sorted(self.symbolic.items())},
        }


class StateVector:
    """Normalized amplitudes over ``width`` qubits."""

    def __init__(self, amplitudes: np.ndarray, width: Optional[int] = None):
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        size = amplitudes.shape[0]
        if width is None:
            width = int(size).bit_length() - 1
        if size != 2 ** width:
            raise SimulationError(f"state of length {size} does not match width {width}")
        self.amplitudes = amplitudes
        self.width = width

    @classmethod
    def zero(cls, width: int) -> "StateVector":
        return cls.basis(width, 0)

    @classmethod
    def basis(cls, width: int, index: int) -> "StateVector":
        if width > settings.MAX_DENSE_QUBITS:
            raise SimulationError(
                f"width {width} exceeds dense limit of {settings.MAX_DENSE_QUBITS} qubits"
            )
        if not 0 <= index < 2 ** width:
            raise SimulationError(f"basis index {index} out of range for width {width}")
        amplitudes = np.zeros(2 ** width, dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes, width)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.width)

    def widened(self, width: int) -> "StateVector":
        """Tensor extra |0> qubits onto the high positions."""
        if width < self.width:
            raise SimulationError("cannot narrow a state")
        amplitudes = np.zeros(2 ** width, dtype=complex)
        amplitudes[: 2 ** self.width] = self.amplitudes
        return StateVector(amplitudes, width)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def top(self, count: int = 8, threshold: float = 1e-12) -> List[Tuple[int, complex]]:
        """Largest-magnitude amplitudes as ``(index, amplitude)`` pairs."""
        probs = self.probabilities()
        order = np.argsort(-probs, kind="stable")[:count]
        return [(int(i), complex(self.amplitudes[i])) for i in order if probs[i] > threshold]

    def __repr__(self) -> str:
        return f"StateVector(width={self.width}, norm={self.norm:.12f})"


# -- gate kernels on tensors -------------------------------------------------


def _index(width: int, fixed: Dict[int, int]) -> Tuple:
    idx: List[Any] = [slice(None)] * width
    for pos, value in fixed.items():
        idx[width - 1 - pos] = value
    return tuple(idx)


def _swap(t: np.ndarray, width: int, first: Dict[int, int], second: Dict[int, int]) -> None:
    i, j = _index(width, first), _index(width, second)
    tmp = t[i].copy()
    t[i] = t[j]
    t[j] = tmp


def _phase(t: np.ndarray, width: int, fixed: Dict[int, int], factor: complex) -> None:
    t[_index(width, fixed)] *= factor


def _phase_factor(op: Operation) -> complex:
    if op.gate is GateKind.Z or op.gate is GateKind.CZ:
        return -1.0
    return complex(np.exp(1j * op.angle))


def apply_unitary(
    t: np.ndarray, width: int, op: Operation, controls: Optional[Dict[int, int]] = None
) -> None:
    """Apply the unitary part of ``op`` in place, optionally quantum-controlled."""
    c = dict(controls or {})
    q = op.qubits
    g = op.gate
    if g is GateKind.I:
        return
    if g is GateKind.H:
        i0, i1 = _index(width, {**c, q[0]: 0}), _index(width, {**c, q[0]: 1})
        a0, a1 = t[i0].copy(), t[i1].copy()
        t[i0] = (a0 + a1) * _SQRT_HALF
        t[i1] = (a0 - a1) * _SQRT_HALF
    elif g is GateKind.X:
        _swap(t, width, {**c, q[0]: 0}, {**c, q[0]: 1})
    elif g in (GateKind.Z, GateKind.S, GateKind.RK):
        _phase(t, width, {**c, q[0]: 1}, _phase_factor(op))
    elif g in (GateKind.CP, GateKind.CZ):
        _phase(t, width, {**c, q[0]: 1, q[1]: 1}, _phase_factor(op))
    elif g is GateKind.CX:
        _swap(t, width, {**c, q[0]: 1, q[1]: 0}, {**c, q[0]: 1, q[1]: 1})
    elif g is GateKind.SWAP:
        _swap(t, width, {**c, q[0]: 0, q[1]: 1}, {**c, q[0]: 1, q[1]: 0})
    elif g is GateKind.CCX:
        _swap(t, width, {**c, q[0]: 1, q[1]: 1, q[2]: 0}, {**c, q[0]: 1, q[1]: 1, q[2]: 1})
    else:
        raise SimulationError(f"{g.value} is not a unitary gate")


def _weight(t: np.ndarray, width: int, fixed: Dict[int, int]) -> float:
    return float(np.sum(np.abs(t[_index(width, fixed)]) ** 2))


# -- the run loop ------------------------------------------------------------


class _Engine:
    """Evolves one amplitude tensor through a circuit."""

    def __init__(self, tensor: np.ndarray, width: int, circuit: Circuit, options: SimOptions):
        self.t = tensor
        self.width = width
        self.circuit = circuit
        self.options = options
        self.batched = tensor.ndim > width
        self.record = MeasRecord(seed=options.seed)
        for bit, value in circuit.preset_clbits.items():
            self.record.bits[bit] = value
            self.record.writers[bit] = -1
        self.rng = None
        if options.mode is SimMode.SAMPLED:
            if self.batched:
                raise SimulationError("sampled mode runs a single state, not a batch")
            self.rng = np.random.Generator(np.random.PCG64(options.seed))
        # Deferred-mode bookkeeping: positions holding measurement records.
        self.frozen: Set[int] = set()
        self.pending_reset: Set[int] = set()

    # sampled mode

    def _measure(self, q: int) -> int:
        p1 = _weight(self.t, self.width, {q: 1})
        outcome = int(self.rng.random() < p1)
        prob = p1 if outcome else 1.0 - p1
        if prob <= 0.0:
            raise SimulationError(f"measurement of qubit {q} has a zero-probability outcome")
        self.t[_index(self.width, {q: 1 - outcome})] = 0.0
        self.t /= np.sqrt(prob)
        return outcome

    def _sampled(self, index: int, op: Operation) -> None:
        if op.cond is not None and not op.cond.evaluate(self.record.bits):
            return
        if op.gate is GateKind.M:
            outcome = self._measure(op.qubits[0])
            self.record.bits[op.clbits[0]] = outcome
            self.record.writers[op.clbits[0]] = index
        elif op.gate is GateKind.RESET:
            if self._measure(op.qubits[0]):
                _swap(self.t, self.width, {op.qubits[0]: 0}, {op.qubits[0]: 1})
        else:
            apply_unitary(self.t, self.width, op)

    # deferred mode

    def _extend(self) -> int:
        if self.width + 1 > settings.MAX_DENSE_QUBITS:
            raise SimulationError(
                "deferred mode ran out of room for measurement records "
                f"({settings.MAX_DENSE_QUBITS} qubits)"
            )
        self.t = np.stack([self.t, np.zeros_like(self.t)], axis=0)
        self.width += 1
        return self.width - 1

    def _release(self, q: int) -> None:
        """Move the record held by a reset qubit to a fresh environment qubit."""
        env = self._extend()
        apply_unitary(self.t, self.width, Operation(GateKind.SWAP, (q, env)))
        for bit, pos in list(self.record.symbolic.items()):
            if pos == q:
                self.record.symbolic[bit] = env
        self.pending_reset.discard(q)
        self.frozen.discard(q)
        self.frozen.add(env)

    def _check_frozen(self, op: Operation) -> None:
        for role, q in enumerate(op.qubits):
            if q not in self.frozen:
                continue
            keeps_value = op.gate.is_diagonal or (
                op.gate in (GateKind.CX, GateKind.CCX) and role < op.gate.n_qubits - 1
            )
            if not keeps_value:
                raise SimulationError(
                    f"{op.gate.value} changes measured qubit {q} before it is reset "
                    "(unsupported in deferred mode)"
                )

    def _condition_controls(self, op: Operation) -> Tuple[List[int], int]:
        records: Dict[int, int] = {}
        constant = int(op.cond.neg)
        for bit in op.cond.parity:
            if bit in self.record.symbolic:
                pos = self.record.symbolic[bit]
                records[pos] = records.get(pos, 0) ^ 1
            else:
                constant ^= self.record.bits[bit]
        return [pos for pos, odd in records.items() if odd], constant

    def _deferred(self, index: int, op: Operation) -> None:
        if op.cond is not None:
            self._deferred_conditioned(op)
            return
        if op.gate is GateKind.I:
            return
        q = op.qubits[0]
        if op.gate is GateKind.RESET:
            if q in self.frozen:
                self.pending_reset.add(q)
                return
            raise SimulationError(
                f"reset of unmeasured qubit {q} is not supported in deferred mode"
            )
        for p in op.qubits:
            if p in self.pending_reset:
                self._release(p)
        if op.gate is GateKind.M:
            self.frozen.add(q)
            self.record.symbolic[op.clbits[0]] = q
            self.record.writers[op.clbits[0]] = index
            return
        self._check_frozen(op)
        apply_unitary(self.t, self.width, op)

    def _deferred_conditioned(self, op: Operation) -> None:
        if op.gate not in (GateKind.X, GateKind.Z, GateKind.S, GateKind.RK):
            raise SimulationError(
                f"deferred mode cannot condition {op.gate.value} on measurement outcomes"
            )
        target = op.qubits[0]
        records, constant = self._condition_controls(op)
        if op.gate is GateKind.X and records == [target] and constant == 0:
            # X on a qubit conditioned on its own outcome resets it.
            self.pending_reset.add(target)
            return
        if target in self.pending_reset:
            self._release(target)
            records, constant = self._condition_controls(op)
        if target in records:
            raise SimulationError(
                f"conditioned {op.gate.value} targets measured qubit {target} (unsupported)"
            )
        if not records:
            if constant:
                self._check_frozen(op)
                apply_unitary(self.t, self.width, op)
            return
        self._check_frozen(op)
        head, rest = records[0], records[1:]
        for r in rest:
            apply_unitary(self.t, self.width, Operation(GateKind.CX, (r, head)))
        plain = Operation(op.gate, op.qubits, k=op.k, sign=op.sign)
        apply_unitary(self.t, self.width, plain, controls={head: 1 - constant})
        for r in reversed(rest):
            apply_unitary(self.t, self.width, Operation(GateKind.CX, (r, head)))

    def _check_norm(self, index: int, op: Operation) -> None:
        axes = tuple(range(self.width))
        norms = np.sqrt(np.sum(np.abs(self.t) ** 2, axis=axes))
        drift = float(np.max(np.abs(norms - 1.0))) if np.size(norms) else 0.0
        if drift > self.options.tolerance:
            raise SimulationError(f"norm drift {drift:.3e} after op {index} ({op.gate.value})")

    def run(self) -> None:
        deferred = self.options.mode is SimMode.DEFERRED
        for index, op in enumerate(self.circuit.ops):
            if deferred:
                self._deferred(index, op)
            else:
                self._sampled(index, op)
            if self.options.check_norm:
                self._check_norm(index, op)


def _tensor(amplitudes: np.ndarray, width: int) -> np.ndarray:
    batch = amplitudes.shape[1:]
    return amplitudes.reshape([2] * width + list(batch))


def run(
    circuit: Circuit, initial: Optional[StateVector] = None, options: Optional[SimOptions] = None
) -> Tuple[StateVector, MeasRecord]:
    """Simulate ``circuit`` from ``initial`` (default |0...0>).

    In deferred mode a qubit whose measurement record is reset and later
    reused has its record moved to a fresh qubit appended after the line,
    so the returned state may be wider than the circuit.

    Args:
        circuit: Circuit to run.
        initial: Normalized input state of the circuit's width.
        options: Mode, seed and tolerance.

    Returns:
        Final state and measurement record.
    """
    options = replace(options) if options is not None else SimOptions()
    if options.mode is SimMode.SAMPLED and options.seed is None:
        options.seed = settings.resolve_seed(None, required=False)
    if initial is None:
        initial = StateVector.zero(circuit.width)
    if initial.width != circuit.width:
        raise SimulationError(
            f"input state has {initial.width} qubits, circuit needs {circuit.width}"
        )
    if abs(initial.norm - 1.0) > max(options.tolerance, 1e-10):
        raise SimulationError(f"input state is not normalized (norm {initial.norm:.12f})")

    engine = _Engine(_tensor(initial.amplitudes.copy(), circuit.width), circuit.width, circuit, options)
    engine.run()
    final = StateVector(engine.t.reshape(-1), engine.width)
    logger.debug(
        f"Simulated {len(circuit)} ops in {options.mode.value} mode "
        f"({len(engine.record.bits)} classical bits)"
    )
    return final, engine.record


def run_shots(
    circuit: Circuit, initial: Optional[StateVector], seeds: Sequence[int]
) -> List[Tuple[StateVector, MeasRecord]]:
    """Independent sampled runs, one per seed."""
    return [
        run(circuit, initial, SimOptions(mode=SimMode.SAMPLED, seed=int(seed))) for seed in seeds
    ]


def unitary(circuit: Circuit, qubits: Optional[Sequence[int]] = None) -> np.ndarray:
    """Deferred-mode action of ``circuit`` on basis inputs of ``qubits``.

    All other positions start in |0>. Column ``i`` is the final state for the
    input whose bit ``l`` sits on ``qubits[l]``. With ``qubits`` omitted the
    full ``2**width`` square matrix is returned.
    """
    qubits = list(range(circuit.width)) if qubits is None else list(qubits)
    if circuit.width > settings.MAX_UNITARY_QUBITS:
        raise SimulationError(
            f"dense unitary limited to {settings.MAX_UNITARY_QUBITS} qubits, "
            f"circuit has {circuit.width}"
        )
    columns = 2 ** len(qubits)
    amplitudes = np.zeros((2 ** circuit.width, columns), dtype=complex)
    amplitudes[basis_indices(qubits), np.arange(columns)] = 1.0
    options = SimOptions(mode=SimMode.DEFERRED)
    engine = _Engine(_tensor(amplitudes, circuit.width), circuit.width, circuit, options)
    engine.run()
    return engine.t.reshape(2 ** engine.width, columns)


def basis_indices(positions: Sequence[int]) -> np.ndarray:
    """Full-register basis index of each value of the listed positions."""
    values = np.arange(2 ** len(positions))
    indices = np.zeros_like(values)
    for l, pos in enumerate(positions):
        indices |= ((values >> l) & 1) << pos
    return indices
