"""Line layouts and nearest-neighbour routing helpers shared by the builders."""

import logging
from typing import Dict, Hashable, List, Sequence, Tuple

from ..circuit.ir import Circuit, GateKind, Operation, RegisterMap
from ..errors import BuilderError

logger = logging.getLogger(__name__)

Swaps = List[Tuple[int, int]]


def canonical_slots(registers: RegisterMap, n: int) -> List[int]:
    """Positions of the meshed A/B line in logical order.

    Logical slot ``2y`` holds ``A_{n-1-y}`` and slot ``2y+1`` holds ``B_y``.
    Other qubits may sit between slots; they are hopped over.
    """
    a = registers.positions("A")
    b = registers.positions("B")
    if len(a) != n or len(b) != n:
        raise BuilderError(f"expected A and B registers of {n} qubits, got {len(a)} and {len(b)}")
    slots = []
    for y in range(n):
        slots.extend([a[n - 1 - y], b[y]])
    if any(p >= q for p, q in zip(slots, slots[1:])):
        raise BuilderError(
            "registers are not meshed as [A_{n-1}, B_0, A_{n-2}, B_1, ..., A_0, B_{n-1}]"
        )
    return slots


def _track(position: int, swaps: Swaps) -> int:
    for p, q in swaps:
        if position == p:
            position = q
        elif position == q:
            position = p
    return position


class LineRouter:
    """Emits gates on a line, moving operands next to each other with SWAPs.

    A gate whose operands are not contiguous is realized by swapping one
    operand along the line until it touches the others, applying the gate and
    swapping back, so every qubit ends where it started. With ``hop=False``
    gates are emitted on their original positions instead.
    """

    def __init__(self, circuit: Circuit, hop: bool = True):
        self.circuit = circuit
        self.hop = hop

    def move_next_to(self, mover: int, group: Sequence[int]) -> Tuple[int, Swaps]:
        """Swap ``mover`` towards the contiguous ``group`` until it touches it."""
        lo, hi = min(group), max(group)
        swaps: Swaps = []
        position = mover
        while position < lo - 1:
            swaps.append((position, position + 1))
            self.circuit.swap(position, position + 1)
            position += 1
        while position > hi + 1:
            swaps.append((position, position - 1))
            self.circuit.swap(position, position - 1)
            position -= 1
        return position, swaps

    def undo(self, swaps: Swaps) -> None:
        for p, q in reversed(swaps):
            self.circuit.swap(p, q)

    def gate2(self, gate: GateKind, a: int, b: int, **kwargs) -> None:
        """Two-qubit gate on positions ``a`` and ``b`` (control first)."""
        if not self.hop or abs(a - b) == 1:
            self.circuit.append(Operation(gate, (a, b), **kwargs))
            return
        moved, swaps = self.move_next_to(a, [b])
        self.circuit.append(Operation(gate, (moved, b), **kwargs))
        self.undo(swaps)

    def exchange(self, a: int, b: int) -> None:
        """Exchange the states at ``a`` and ``b``; qubits between them stay put."""
        self.gate2(GateKind.SWAP, a, b)

    def ccx(self, c1: int, c2: int, target: int) -> None:
        if not self.hop or sorted((c1, c2, target)) == list(range(min(c1, c2, target), min(c1, c2, target) + 3)):
            self.circuit.ccx(c1, c2, target)
            return
        first, swaps1 = self.move_next_to(c1, [target])
        second = _track(c2, swaps1)
        second, swaps2 = self.move_next_to(second, [first, target])
        self.circuit.ccx(first, second, target)
        self.undo(swaps2)
        self.undo(swaps1)


def route(router: LineRouter, slots: Sequence[int], current: List[Hashable], target: Sequence[Hashable]) -> List[Hashable]:
    """Permute the contents of ``slots`` from ``current`` into ``target`` order.

    Uses odd-even transposition rounds of neighbour exchanges, so the depth
    is at most ``len(slots)`` exchange layers. Returns the final arrangement.
    """
    rank = {token: i for i, token in enumerate(target)}
    if set(rank) != set(current) or len(rank) != len(current):
        raise BuilderError("routing target is not a permutation of the current arrangement")
    arrangement = list(current)
    for round_index in range(len(arrangement) + 1):
        if all(rank[arrangement[i]] == i for i in range(len(arrangement))):
            break
        for p in range(round_index % 2, len(arrangement) - 1, 2):
            if rank[arrangement[p]] > rank[arrangement[p + 1]]:
                router.exchange(slots[p], slots[p + 1])
                arrangement[p], arrangement[p + 1] = arrangement[p + 1], arrangement[p]
    return arrangement


def emit_inverse(circuit: Circuit, emit, *args, **kwargs) -> None:
    """Append the adjoint of whatever ``emit(scratch, ...)`` produces."""
    scratch = Circuit(width=circuit.width)
    emit(scratch, *args, **kwargs)
    for op in reversed(scratch.ops):
        circuit.append(op.inverse())


def adder_registers(
    n: int, quantum: bool, gadgets: bool = True
) -> Tuple[RegisterMap, Dict[str, object]]:
    """Slice layout of the standalone adder.

    Slice ``i`` holds ``[y_i, b_i, c_i, z_{i+1}, P]``: a gadget ancilla
    (from slice 1 on, only with gadgets), target bit, operand bit (quantum
    operand only), carry bit (``i <= n-2``) and a propagate ancilla in the
    slices that host one.
    """
    if n < 1:
        raise BuilderError(f"adder size must be >= 1, got {n}")
    m = n - 1
    prop_slices = {s: key for key, s in propagate_slots(m).items()}
    position = 0
    target: List[int] = []
    operand: List[int] = []
    carries: Dict[int, int] = {}
    props: Dict[Tuple[int, int], int] = {}
    ancillas: List[int] = []
    for i in range(n):
        if gadgets and i >= 1:
            ancillas.append(position)
            position += 1
        target.append(position)
        position += 1
        if quantum:
            operand.append(position)
            position += 1
        if i <= n - 2:
            carries[i + 1] = position
            position += 1
        if i in prop_slices:
            props[prop_slices[i]] = position
            position += 1
    workspace = sorted(list(carries.values()) + list(props.values()) + ancillas)
    registers = RegisterMap({"A": target, "B": operand, "ANC": workspace})
    return registers, {"carries": carries, "props": props, "ancillas": ancillas, "width": position}


def propagate_slots(m: int) -> Dict[Tuple[int, int], int]:
    """Slice hosting each propagate ancilla ``P_t[x]`` of an ``m``-carry network."""
    slots = {}
    if m < 2:
        return slots
    log_m = m.bit_length() - 1
    for t in range(1, log_m):
        for x in range(1, m // 2 ** t):
            slots[(t, x)] = 2 ** (t - 1) * (2 * x + 1)
    return slots


def general_registers(n: int) -> Tuple[RegisterMap, Dict[str, object]]:
    """Line for the randomized construction.

    Slice ``l`` (left to right ``l = n-1 .. 0``) is ``[A_l, W_l, Q_l?, B_{n-1-l}]``
    with a carry slot ``W`` and, where either adder needs one, a propagate
    slot ``Q``. A and B stay meshed with the workspace between them.
    """
    if n < 1:
        raise BuilderError(f"register size must be >= 1, got {n}")
    m = n - 1
    needs = set(propagate_slots(m).values())
    q_slices = needs | {n - 1 - s for s in needs}
    position = 0
    a: Dict[int, int] = {}
    b: Dict[int, int] = {}
    w: Dict[int, int] = {}
    q: Dict[int, int] = {}
    for l in range(n - 1, -1, -1):
        a[l] = position
        w[l] = position + 1
        position += 2
        if l in q_slices:
            q[l] = position
            position += 1
        b[n - 1 - l] = position
        position += 1
    workspace = sorted(list(w.values()) + list(q.values()))
    registers = RegisterMap(
        {"A": [a[l] for l in range(n)], "B": [b[l] for l in range(n)], "ANC": workspace}
    )
    return registers, {"carry_slots": w, "prop_slots": q, "width": position}
