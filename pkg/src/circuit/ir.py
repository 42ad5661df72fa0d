"""Gate-level intermediate representation for dynamic circuits on a line of qubits."""

import logging
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import CircuitError

logger = logging.getLogger(__name__)

REGISTER_NAMES: Tuple[str, ...] = ("A", "B", "C1", "C2", "ANC")


class GateKind(Enum):
    """Supported operations. Names double as the serialized ``g`` field."""

    I = "I"  # idle layer
    H = "H"
    X = "X"
    Z = "Z"
    S = "S"
    RK = "RK"
    CP = "CP"
    CX = "CX"
    CZ = "CZ"
    SWAP = "SWAP"
    CCX = "CCX"
    M = "M"
    RESET = "RESET"

    @property
    def n_qubits(self) -> int:
        if self in (GateKind.CP, GateKind.CX, GateKind.CZ, GateKind.SWAP):
            return 2
        if self is GateKind.CCX:
            return 3
        return 1

    @property
    def is_unitary(self) -> bool:
        return self not in (GateKind.M, GateKind.RESET)

    @property
    def is_diagonal(self) -> bool:
        return self in (GateKind.Z, GateKind.S, GateKind.RK, GateKind.CP, GateKind.CZ)

    @property
    def has_k(self) -> bool:
        return self in (GateKind.RK, GateKind.CP)

    @property
    def has_sign(self) -> bool:
        return self in (GateKind.S, GateKind.RK, GateKind.CP)


# Single-qubit gates that may carry a classical condition.
CONDITIONABLE = (GateKind.H, GateKind.X, GateKind.Z, GateKind.S, GateKind.RK)


@dataclass(frozen=True)
class ClassicalExpr:
    """Parity of classical bits, optionally negated.

    An empty parity is the constant ``neg`` (so ``ClassicalExpr((), True)`` is
    always true).
    """

    parity: Tuple[int, ...] = ()
    neg: bool = False

    def __post_init__(self):
        object.__setattr__(self, "parity", tuple(int(c) for c in self.parity))
        if len(set(self.parity)) != len(self.parity):
            raise CircuitError(f"duplicate classical bit in condition: {self.parity}")

    @classmethod
    def constant(cls, value: bool) -> "ClassicalExpr":
        return cls((), bool(value))

    @classmethod
    def of(cls, bits: Iterable[int], neg: bool = False) -> "ClassicalExpr":
        return cls(tuple(sorted(int(b) for b in bits)), neg)

    def evaluate(self, bits: Mapping[int, int]) -> bool:
        value = int(self.neg)
        for c in self.parity:
            value ^= int(bits[c]) & 1
        return bool(value)


@dataclass(frozen=True)
class Operation:
    """One gate, measurement or reset on line positions.

    Args:
        gate: Operation kind.
        qubits: Line positions, in gate order (control(s) first).
        k: Dyadic exponent for RK/CP; the angle is ``sign * 2*pi / 2**k``.
        sign: +1 or -1 (S, RK and CP only).
        clbits: Classical bit written by a measurement.
        cond: Optional classical condition (single-qubit unitary gates only).
    """

    gate: GateKind
    qubits: Tuple[int, ...]
    k: Optional[int] = None
    sign: int = 1
    clbits: Tuple[int, ...] = ()
    cond: Optional[ClassicalExpr] = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "clbits", tuple(int(c) for c in self.clbits))
        if len(self.qubits) != self.gate.n_qubits:
            raise CircuitError(
                f"{self.gate.value} acts on {self.gate.n_qubits} qubit(s), got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.gate.value} qubits must be distinct, got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit position in {self.qubits}")
        if self.gate.has_k:
            if self.k is None or isinstance(self.k, bool) or int(self.k) != self.k or int(self.k) < 1:
                raise CircuitError(f"{self.gate.value} requires an integer k >= 1, got {self.k}")
            object.__setattr__(self, "k", int(self.k))
        elif self.k is not None:
            raise CircuitError(f"{self.gate.value} takes no k")
        if self.sign not in (1, -1):
            raise CircuitError(f"sign must be +1 or -1, got {self.sign}")
        if self.sign == -1 and not self.gate.has_sign:
            raise CircuitError(f"{self.gate.value} takes no sign")
        if self.gate is GateKind.M:
            if len(self.clbits) != 1:
                raise CircuitError("a measurement writes exactly one classical bit")
        elif self.clbits:
            raise CircuitError(f"{self.gate.value} writes no classical bits")
        if self.cond is not None and self.gate not in CONDITIONABLE:
            raise CircuitError(f"{self.gate.value} cannot be classically conditioned")

    @property
    def angle(self) -> float:
        """Phase angle of S/RK/CP in radians."""
        if self.gate.has_k:
            return self.sign * 2.0 * np.pi / (2 ** self.k)
        if self.gate is GateKind.S:
            return self.sign * np.pi / 2.0
        return 0.0

    @property
    def is_measurement(self) -> bool:
        return self.gate is GateKind.M

    @property
    def is_conditioned(self) -> bool:
        return self.cond is not None

    def span(self) -> int:
        """Largest gap between consecutive sorted positions (0 for 1-qubit ops)."""
        if len(self.qubits) < 2:
            return 0
        ordered = sorted(self.qubits)
        return max(b - a for a, b in zip(ordered, ordered[1:]))

    def inverse(self) -> "Operation":
        if not self.gate.is_unitary:
            raise CircuitError(f"{self.gate.value} has no inverse")
        if self.gate.has_sign:
            return Operation(self.gate, self.qubits, k=self.k, sign=-self.sign, cond=self.cond)
        return self

    def remapped(self, mapping: Mapping[int, int], clbit_offset: int = 0) -> "Operation":
        cond = None
        if self.cond is not None:
            cond = ClassicalExpr(tuple(c + clbit_offset for c in self.cond.parity), self.cond.neg)
        return Operation(
            self.gate,
            tuple(mapping[q] for q in self.qubits),
            k=self.k,
            sign=self.sign,
            clbits=tuple(c + clbit_offset for c in self.clbits),
            cond=cond,
        )


class RegisterMap:
    """Logical registers (A, B, C1, C2, ANC) laid out on line positions.

    Bit ``l`` of a register sits at ``positions(name)[l]``; the integer held by
    a register is ``sum(2**l * bit_l)``.
    """

    def __init__(self, registers: Optional[Mapping[str, Sequence[int]]] = None):
        self._registers: Dict[str, Tuple[int, ...]] = {name: () for name in REGISTER_NAMES}
        for name, positions in (registers or {}).items():
            if name not in REGISTER_NAMES:
                raise CircuitError(f"unknown register {name!r}; expected one of {REGISTER_NAMES}")
            self._registers[name] = tuple(int(p) for p in positions)
        used = [p for positions in self._registers.values() for p in positions]
        if len(set(used)) != len(used):
            raise CircuitError("register positions must be distinct")
        if any(p < 0 for p in used):
            raise CircuitError("register positions must be non-negative")

    @classmethod
    def canonical(cls, n: int) -> "RegisterMap":
        """Meshed A/B layout ``[A_{n-1}, B_0, A_{n-2}, B_1, ..., A_0, B_{n-1}]``."""
        if n < 1:
            raise CircuitError(f"register size must be >= 1, got {n}")
        a = [2 * (n - 1 - l) for l in range(n)]
        b = [2 * m + 1 for m in range(n)]
        return cls({"A": a, "B": b})

    def positions(self, name: str) -> Tuple[int, ...]:
        if name not in self._registers:
            raise CircuitError(f"unknown register {name!r}")
        return self._registers[name]

    def size(self, name: str) -> int:
        return len(self._registers[name])

    @property
    def width(self) -> int:
        used = [p for positions in self._registers.values() for p in positions]
        return max(used) + 1 if used else 0

    def with_register(self, name: str, positions: Sequence[int]) -> "RegisterMap":
        registers = dict(self._registers)
        registers[name] = tuple(positions)
        return RegisterMap(registers)

    def relabeled(self, mapping: Mapping[str, str]) -> "RegisterMap":
        """Swap register names, e.g. ``{"A": "B", "B": "A"}``."""
        registers = {name: self._registers[mapping.get(name, name)] for name in REGISTER_NAMES}
        return RegisterMap(registers)

    def to_dict(self) -> Dict[str, List[int]]:
        return {name: list(self._registers[name]) for name in REGISTER_NAMES}

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, RegisterMap) and self._registers == other._registers

    def __repr__(self) -> str:
        used = {k: list(v) for k, v in self._registers.items() if v}
        return f"RegisterMap({used})"


class Circuit:
    """Ordered operations on ``width`` line qubits and ``n_clbits`` classical bits.

    ``preset_clbits`` are classical inputs fixed before the first operation
    (the general construction stores its random offsets there). Width and
    register map are fixed at construction; ``metadata`` and
    ``preset_clbits`` are read-only views, written through :meth:`annotate`
    and :meth:`preset`. Use :meth:`with_registers` or :meth:`widened` for a
    modified copy.
    """

    def __init__(
        self,
        width: int,
        n_clbits: int = 0,
        registers: Optional[RegisterMap] = None,
        metadata: Optional[Mapping[str, Any]] = None,
        preset_clbits: Optional[Mapping[int, int]] = None,
    ):
        if width < 0 or n_clbits < 0:
            raise CircuitError("width and n_clbits must be non-negative")
        self._width = int(width)
        self.n_clbits = int(n_clbits)
        self._registers = registers if registers is not None else RegisterMap()
        if self._registers.width > self._width:
            raise CircuitError(
                f"register map needs {self._registers.width} positions, circuit has {self._width}"
            )
        self._metadata: Dict[str, Any] = dict(metadata or {})
        self._presets: Dict[int, int] = {}
        for bit, value in (preset_clbits or {}).items():
            if not 0 <= bit < self.n_clbits or value not in (0, 1):
                raise CircuitError(f"invalid preset classical bit {bit}={value}")
            self._presets[int(bit)] = int(value)
        self._ops: List[Operation] = []
        self._written = set(self._presets)

    def __repr__(self) -> str:
        return f"Circuit(width={self._width}, n_clbits={self.n_clbits}, ops={len(self._ops)}, registers={self._registers!r})"

    @property
    def width(self) -> int:
        return self._width

    @property
    def registers(self) -> RegisterMap:
        return self._registers

    @property
    def metadata(self) -> Mapping[str, Any]:
        return MappingProxyType(self._metadata)

    @property
    def preset_clbits(self) -> Mapping[int, int]:
        return MappingProxyType(self._presets)

    def annotate(self, **entries: Any) -> "Circuit":
        """Record builder metadata entries."""
        self._metadata.update(entries)
        return self

    def with_registers(self, registers: RegisterMap) -> "Circuit":
        """Copy of the circuit with another register map on the same line."""
        if registers.width > self._width:
            raise CircuitError(f"register map needs {registers.width} positions, circuit has {self._width}")
        out = self.copy()
        out._registers = registers
        return out

    @property
    def ops(self) -> Tuple[Operation, ...]:
        return tuple(self._ops)

    def __len__(self) -> int:
        return len(self._ops)

    def __iter__(self):
        return iter(self._ops)

    def add_clbits(self, count: int) -> List[int]:
        """Allocate ``count`` fresh classical bits and return their indices."""
        start = self.n_clbits
        self.n_clbits += count
        return list(range(start, start + count))

    def preset(self, bits: Sequence[int], value: int) -> None:
        """Fix classical input bits to the binary digits of ``value`` (LSB first)."""
        for l, bit in enumerate(bits):
            if not 0 <= bit < self.n_clbits:
                raise CircuitError(f"classical bit {bit} out of range")
            self._presets[bit] = (value >> l) & 1
            self._written.add(bit)

    def validate(self, op: Operation) -> None:
        for q in op.qubits:
            if q >= self.width:
                raise CircuitError(f"qubit {q} out of range for width {self.width}")
        for c in op.clbits:
            if c >= self.n_clbits:
                raise CircuitError(f"classical bit {c} out of range ({self.n_clbits} allocated)")
        if op.cond is not None:
            for c in op.cond.parity:
                if c >= self.n_clbits:
                    raise CircuitError(f"condition bit {c} out of range")
                if c not in self._written:
                    raise CircuitError(f"condition reads classical bit {c} before it is written")

    def append(self, op: Operation) -> "Circuit":
        self.validate(op)
        self._ops.append(op)
        self._written.update(op.clbits)
        return self

    def extend(self, ops: Iterable[Operation]) -> "Circuit":
        for op in ops:
            self.append(op)
        return self

    def h(self, q: int, cond: Optional[ClassicalExpr] = None) -> "Circuit":
        return self.append(Operation(GateKind.H, (q,), cond=cond))

    def x(self, q: int, cond: Optional[ClassicalExpr] = None) -> "Circuit":
        return self.append(Operation(GateKind.X, (q,), cond=cond))

    def z(self, q: int, cond: Optional[ClassicalExpr] = None) -> "Circuit":
        return self.append(Operation(GateKind.Z, (q,), cond=cond))

    def s(self, q: int, sign: int = 1, cond: Optional[ClassicalExpr] = None) -> "Circuit":
        return self.append(Operation(GateKind.S, (q,), sign=sign, cond=cond))

    def rk(self, q: int, k: int, sign: int = 1, cond: Optional[ClassicalExpr] = None) -> "Circuit":
        return self.append(Operation(GateKind.RK, (q,), k=k, sign=sign, cond=cond))

    def cp(self, a: int, b: int, k: int, sign: int = 1) -> "Circuit":
        return self.append(Operation(GateKind.CP, (a, b), k=k, sign=sign))

    def cx(self, control: int, target: int) -> "Circuit":
        return self.append(Operation(GateKind.CX, (control, target)))

    def cz(self, a: int, b: int) -> "Circuit":
        return self.append(Operation(GateKind.CZ, (a, b)))

    def swap(self, a: int, b: int) -> "Circuit":
        return self.append(Operation(GateKind.SWAP, (a, b)))

    def ccx(self, c1: int, c2: int, target: int) -> "Circuit":
        return self.append(Operation(GateKind.CCX, (c1, c2, target)))

    def idle(self, q: int) -> "Circuit":
        """One layer of waiting on ``q``; acts as the identity."""
        return self.append(Operation(GateKind.I, (q,)))

    def measure(self, q: int, clbit: Optional[int] = None) -> int:
        """Z-basis measurement; allocates a fresh bit unless one is given."""
        if clbit is None:
            clbit = self.add_clbits(1)[0]
        self.append(Operation(GateKind.M, (q,), clbits=(clbit,)))
        return clbit

    def measure_x(self, q: int, clbit: Optional[int] = None) -> int:
        """X-basis measurement, stored in canonical form as H then M."""
        self.h(q)
        return self.measure(q, clbit)

    def reset(self, q: int) -> "Circuit":
        return self.append(Operation(GateKind.RESET, (q,)))

    def compose(self, other: "Circuit", qubit_map: Optional[Mapping[int, int]] = None) -> "Circuit":
        """Append ``other``'s ops, renumbering its classical bits after ours."""
        mapping = qubit_map if qubit_map is not None else {q: q for q in range(other.width)}
        offset = self.n_clbits
        self.add_clbits(other.n_clbits)
        for bit, value in other.preset_clbits.items():
            self._presets[bit + offset] = value
            self._written.add(bit + offset)
        for op in other.ops:
            self.append(op.remapped(mapping, offset))
        return self

    def inverse(self) -> "Circuit":
        """Adjoint circuit; only defined for measurement-free, unconditioned circuits."""
        inv = self.copy(with_ops=False)
        for op in reversed(self._ops):
            if op.cond is not None:
                raise CircuitError("cannot invert a classically conditioned operation")
            inv.append(op.inverse())
        return inv

    def copy(self, with_ops: bool = True) -> "Circuit":
        out = Circuit(
            width=self.width,
            n_clbits=self.n_clbits,
            registers=self.registers,
            metadata=dict(self.metadata),
            preset_clbits=dict(self.preset_clbits),
        )
        if with_ops:
            out._ops = list(self._ops)
            out._written = set(self._written)
        return out

    def widened(self, width: int) -> "Circuit":
        """Same ops on a longer line (extra positions stay idle)."""
        if width < self.width:
            raise CircuitError(f"cannot shrink a circuit from {self.width} to {width} qubits")
        out = self.copy()
        out._width = width
        return out

    def count(self, gate: GateKind) -> int:
        return sum(1 for op in self._ops if op.gate is gate)

    @property
    def has_measurements(self) -> bool:
        return any(op.gate in (GateKind.M, GateKind.RESET) for op in self._ops)


def append(circuit: Circuit, operation: Operation) -> Circuit:
    """Append ``operation`` to ``circuit`` after validating it."""
    return circuit.append(operation)
