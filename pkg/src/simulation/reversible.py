"""Bit-level evaluation of classical reversible circuits (X, CX, CCX, SWAP)."""

from typing import Mapping, Sequence

import numpy as np

from ..circuit.ir import Circuit, GateKind
from ..errors import SimulationError

REVERSIBLE_GATES = (GateKind.I, GateKind.X, GateKind.CX, GateKind.CCX, GateKind.SWAP)


def pack(values: Mapping[Sequence[int], int]) -> int:
    """Line basis index holding each integer on its positions (LSB first)."""
    index = 0
    for positions, value in values.items():
        for l, pos in enumerate(positions):
            index |= ((value >> l) & 1) << pos
    return index


def unpack(index: int, positions: Sequence[int]) -> int:
    return sum(((index >> pos) & 1) << l for l, pos in enumerate(positions))


def evaluate(circuit: Circuit, index: int) -> int:
    """Image of the basis state ``index`` under a classical reversible circuit."""
    bits = np.array([(index >> p) & 1 for p in range(circuit.width)], dtype=np.uint8)
    for op in circuit.ops:
        if op.gate not in REVERSIBLE_GATES or op.cond is not None:
            raise SimulationError(f"{op.gate.value} is not a classical reversible gate")
        q = op.qubits
        if op.gate is GateKind.I:
            continue
        if op.gate is GateKind.X:
            bits[q[0]] ^= 1
        elif op.gate is GateKind.CX:
            bits[q[1]] ^= bits[q[0]]
        elif op.gate is GateKind.CCX:
            bits[q[2]] ^= bits[q[0]] & bits[q[1]]
        else:
            bits[q[0]], bits[q[1]] = bits[q[1]], bits[q[0]]
    return int(sum(int(b) << p for p, b in enumerate(bits)))


def is_reversible(circuit: Circuit) -> bool:
    return all(op.gate in REVERSIBLE_GATES and op.cond is None for op in circuit.ops)
