"""In-place carry-lookahead adder with long-range gadgets on a line."""

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from ..circuit.ir import Circuit, GateKind, RegisterMap
from ..errors import BuilderError
from .layout import LineRouter, adder_registers
from .longrange import between, emit_longrange_ccx, emit_longrange_cx

logger = logging.getLogger(__name__)

Gate = Tuple  # ("x", q) | ("cx", c, t) | ("ccx", c1, c2, t) over symbolic qubits


@dataclass
class AdderParams:
    """Parameters of the adder.

    Args:
        n: Register size.
        operand: ``None`` for a quantum operand register, otherwise the
            classical constant ``c`` with ``0 <= c < 2**n``.
        adjoint: Subtract instead of add.
        gadgets: Realize non-adjacent gates with long-range gadgets; without
            them operands are brought together by SWAPs.
    """

    n: int
    operand: Optional[int] = None
    adjoint: bool = False
    gadgets: bool = True

    @property
    def quantum(self) -> bool:
        return self.operand is None

    def validate(self) -> None:
        if self.n < 1:
            raise BuilderError(f"adder size must be >= 1, got {self.n}")
        if self.operand is not None and not 0 <= self.operand < 2 ** self.n:
            raise BuilderError(f"classical operand {self.operand} does not fit in {self.n} bits")


def _p(t: int, x: int) -> Hashable:
    return ("b", x) if t == 0 else ("p", t, x)


def carry_network(m: int) -> List[Gate]:
    """Logarithmic-depth carries ``z_1..z_m`` of operand ``a`` and target ``b``.

    Leaves ``b_i`` holding ``a_i xor b_i`` for ``i < m``; the propagate
    ancillas of the higher rounds are uncomputed.
    """
    gates: List[Gate] = []
    for i in range(m):
        gates.append(("ccx", ("a", i), ("b", i), ("z", i + 1)))
    for i in range(m):
        gates.append(("cx", ("a", i), ("b", i)))
    if m < 1:
        return gates
    log_m = m.bit_length() - 1

    p_rounds: List[Gate] = []
    for t in range(1, log_m):
        for x in range(1, m // 2 ** t):
            p_rounds.append(("ccx", _p(t - 1, 2 * x), _p(t - 1, 2 * x + 1), _p(t, x)))
    gates.extend(p_rounds)
    for t in range(1, log_m + 1):
        for x in range(m // 2 ** t):
            gates.append(
                ("ccx", _p(t - 1, 2 * x + 1), ("z", 2 ** t * x + 2 ** (t - 1)), ("z", 2 ** t * (x + 1)))
            )
    c_top = max((t for t in range(1, log_m + 1) if 3 * 2 ** t <= 2 * m), default=0)
    for t in range(c_top, 0, -1):
        for x in range(1, (m - 2 ** (t - 1)) // 2 ** t + 1):
            gates.append(("ccx", _p(t - 1, 2 * x), ("z", 2 ** t * x), ("z", 2 ** t * x + 2 ** (t - 1))))
    gates.extend(reversed(p_rounds))
    return gates


def adder_gates(n: int) -> List[Gate]:
    """Logical gate list of ``|b>|a> -> |b + a mod 2**n>|a>`` with clean carries."""
    m = n - 1
    carry = carry_network(m)
    gates: List[Gate] = list(carry)
    gates.append(("cx", ("a", m), ("b", m)))
    gates.extend(("cx", ("z", i), ("b", i)) for i in range(1, n))
    gates.extend(("x", ("b", i)) for i in range(m))
    gates.extend(("cx", ("a", i), ("b", i)) for i in range(m))
    gates.extend(reversed(carry))
    gates.extend(("x", ("b", i)) for i in range(m))
    return gates


def specialize(gates: Sequence[Gate], constant: int) -> List[Gate]:
    """Fold a classical operand ``a = constant`` into the gate list."""
    out: List[Gate] = []
    for gate in gates:
        kind, qubits = gate[0], gate[1:]
        operand = [q for q in qubits[:-1] if q[0] == "a"]
        if not operand:
            out.append(gate)
            continue
        if not (constant >> operand[0][1]) & 1:
            continue
        rest = [q for q in qubits if q[0] != "a"]
        out.append(("x", rest[0]) if kind == "cx" else ("cx", rest[0], rest[1]))
    return out


class GateEmitter:
    """Places symbolic adder gates on line positions.

    Gates whose operands are separated by gadget ancillas go through the
    long-range gadgets; the rest are routed with SWAPs.
    """

    def __init__(
        self,
        router: LineRouter,
        positions: Dict[Hashable, int],
        ancillas: Sequence[int] = (),
    ):
        self.router = router
        self.positions = positions
        self.ancillas = list(ancillas)

    def _where(self, q: Hashable) -> int:
        try:
            return self.positions[q]
        except KeyError:
            raise BuilderError(f"no line position for adder qubit {q}")

    def emit(self, gate: Gate) -> None:
        kind, qubits = gate[0], [self._where(q) for q in gate[1:]]
        if kind == "x":
            self.router.circuit.x(qubits[0])
        elif kind == "cx":
            chain = between(qubits[0], qubits[1], self.ancillas)
            if chain:
                emit_longrange_cx(self.router, qubits[0], qubits[1], chain)
            else:
                self.router.gate2(GateKind.CX, qubits[0], qubits[1])
        elif kind == "ccx":
            if self.ancillas:
                emit_longrange_ccx(self.router, *qubits, self.ancillas)
            else:
                self.router.ccx(*qubits)
        else:
            raise BuilderError(f"unknown adder gate {kind}")

    def emit_all(self, gates: Sequence[Gate]) -> None:
        for gate in gates:
            self.emit(gate)


def adder_positions(
    target: Sequence[int],
    operand: Optional[Sequence[int]],
    carries: Dict[int, int],
    props: Dict[Tuple[int, int], int],
) -> Dict[Hashable, int]:
    positions: Dict[Hashable, int] = {("b", i): p for i, p in enumerate(target)}
    if operand is not None:
        positions.update({("a", i): p for i, p in enumerate(operand)})
    positions.update({("z", i): p for i, p in carries.items()})
    positions.update({("p",) + key: p for key, p in props.items()})
    return positions


def emit_adder(
    router: LineRouter,
    n: int,
    positions: Dict[Hashable, int],
    ancillas: Sequence[int] = (),
    constant: Optional[int] = None,
    adjoint: bool = False,
) -> None:
    """Add the operand (quantum, or ``constant``) into the target; subtract with ``adjoint``."""
    gates = adder_gates(n)
    if constant is not None:
        gates = specialize(gates, constant)
    if adjoint:
        flips = [("x", ("b", i)) for i in range(n)]
        gates = flips + gates + flips
    GateEmitter(router, positions, ancillas).emit_all(gates)


def build_adder(params: AdderParams, registers: Optional[RegisterMap] = None) -> Circuit:
    """Standalone adder on its slice layout.

    Args:
        params: Size, operand and flags.
        registers: Must equal the default slice layout when given.

    Returns:
        Circuit with A = target, B = quantum operand (empty for a classical
        one) and ANC = carry, propagate and gadget ancillas.
    """
    params.validate()
    n = params.n
    layout, info = adder_registers(n, params.quantum, params.gadgets)
    if registers is not None and registers != layout:
        raise BuilderError(f"adder layout mismatch: expected {layout}, got {registers}")
    circuit = Circuit(
        width=info["width"],
        registers=layout,
        metadata={
            "builder": "add",
            "n": n,
            "operand": "quantum" if params.quantum else "classical",
            "constant": params.operand,
            "adjoint": params.adjoint,
            "gadgets": params.gadgets,
            "teleport_qubits": len(info["ancillas"]),
        },
    )
    positions = adder_positions(
        layout.positions("A"),
        layout.positions("B") if params.quantum else None,
        info["carries"],
        info["props"],
    )
    emit_adder(LineRouter(circuit), n, positions, info["ancillas"], params.operand, params.adjoint)
    logger.info(
        f"Built adder n={n} ({circuit.metadata['operand']} operand): "
        f"{circuit.width} qubits, {len(circuit)} ops"
    )
    return circuit


def build_classical_adder(n: int, constant: int, adjoint: bool = False, gadgets: bool = True) -> Circuit:
    """Adder of a classical constant; the operand register disappears."""
    return build_adder(AdderParams(n=n, operand=constant, adjoint=adjoint, gadgets=gadgets))
