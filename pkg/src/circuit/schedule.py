"""ASAP layer scheduling, connectivity audit and depth accounting."""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Tuple

from .ir import Circuit, GateKind, Operation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """A multi-qubit operation whose positions are not contiguous."""

    index: int
    gate: str
    qubits: Tuple[int, ...]
    distance: int


@dataclass(frozen=True)
class DepthReport:
    """Resource summary of a circuit."""

    width: int
    n_layers: int
    n_gates: int
    n_measurements: int
    n_conditioned_gates: int
    max_distance: int
    n_clbits: int = 0

    @property
    def depth(self) -> int:
        return self.n_layers

    @property
    def size(self) -> int:
        return self.n_gates

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


def layer_indices(circuit: Circuit) -> List[int]:
    """Layer (1-based) assigned to each op by the greedy ASAP schedule.

    An op lands one layer after the latest of: the last op on any of its
    qubits, and the measurement that wrote any bit of its condition. A
    measurement also waits for earlier reads and writes of its classical bit.
    Preset classical bits are available before layer 1.
    """
    qubit_layer: Dict[int, int] = {}
    write_layer: Dict[int, int] = {c: 0 for c in circuit.preset_clbits}
    read_layer: Dict[int, int] = {}
    layers: List[int] = []

    for op in circuit.ops:
        ready = max((qubit_layer.get(q, 0) for q in op.qubits), default=0)
        if op.cond is not None:
            ready = max([ready] + [write_layer.get(c, 0) for c in op.cond.parity])
        for c in op.clbits:
            ready = max(ready, write_layer.get(c, 0), read_layer.get(c, 0))
        layer = ready + 1
        for q in op.qubits:
            qubit_layer[q] = layer
        if op.cond is not None:
            for c in op.cond.parity:
                read_layer[c] = max(read_layer.get(c, 0), layer)
        for c in op.clbits:
            write_layer[c] = layer
        layers.append(layer)
    return layers


def layerize(circuit: Circuit) -> List[List[Operation]]:
    """Group ops into layers; ops within a layer keep program order."""
    indices = layer_indices(circuit)
    schedule: List[List[Operation]] = [[] for _ in range(max(indices, default=0))]
    for op, layer in zip(circuit.ops, indices):
        schedule[layer - 1].append(op)
    return schedule


def audit_connectivity(circuit: Circuit) -> List[Violation]:
    """List every multi-qubit op that is not on contiguous line positions.

    An empty list means the audit passed.
    """
    violations = []
    for index, op in enumerate(circuit.ops):
        distance = op.span()
        if distance > 1:
            violations.append(Violation(index, op.gate.value, op.qubits, distance))
    if violations:
        logger.debug(f"Connectivity audit found {len(violations)} violation(s)")
    return violations


def depth_report(circuit: Circuit) -> DepthReport:
    """Width, depth, size and measurement counts of ``circuit``."""
    indices = layer_indices(circuit)
    return DepthReport(
        width=circuit.width,
        n_layers=max(indices, default=0),
        n_gates=len(circuit) - circuit.count(GateKind.I),
        n_measurements=circuit.count(GateKind.M),
        n_conditioned_gates=sum(1 for op in circuit.ops if op.cond is not None),
        max_distance=max((op.span() for op in circuit.ops), default=0),
        n_clbits=circuit.n_clbits,
    )
