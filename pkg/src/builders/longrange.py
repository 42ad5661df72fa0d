"""Constant-depth long-range CX and CCX gadgets built from measurements and feed-forward."""

import logging
from typing import List, Optional, Sequence, Tuple

from ..circuit.ir import Circuit, ClassicalExpr, GateKind, RegisterMap
from ..errors import BuilderError
from .layout import LineRouter

logger = logging.getLogger(__name__)

# Layers of the long-range CX gadget at every distance of two or more.
LONGRANGE_DEPTH = 9

# Layer in which the cat copy becomes usable, counted from the first gadget layer.
COPY_READY_LAYER = 5


def between(a: int, b: int, ancillas: Sequence[int]) -> List[int]:
    """Ancilla positions strictly between ``a`` and ``b``, ordered from ``a`` towards ``b``."""
    inside = [p for p in ancillas if min(a, b) < p < max(a, b)]
    return sorted(inside, reverse=a > b)


def _reset(circuit: Circuit, q: int, bit: int) -> None:
    circuit.x(q, cond=ClassicalExpr.of([bit]))


def emit_cat_copy(router: LineRouter, source: int, chain: Sequence[int]) -> Tuple[int, List[int]]:
    """Copy ``source`` in the computational basis onto ``chain[-1]``.

    Bell pairs are fused onto the source with one CX layer; fused qubits are
    measured in Z (their parity fixes the copy with one conditioned X) and
    the intermediate copies are measured in X. Every measured ancilla is
    reset at once. Returns the copy position and the X-measurement bits
    whose parity the eventual disentangling correction must include.

    A single ancilla takes the copy with one CX, padded with idles so the
    copy is ready after ``COPY_READY_LAYER`` layers like with a longer chain.
    """
    circuit = router.circuit
    chain = list(chain)
    if not chain:
        raise BuilderError("cat copy needs at least one ancilla")
    if len(chain) == 1:
        only = chain[0]
        circuit.idle(only).idle(only)
        router.gate2(GateKind.CX, source, only)
        circuit.idle(only).idle(only)
        return only, []

    leftover = chain[0] if len(chain) % 2 else None
    body = chain[1:] if leftover is not None else chain
    pairs = [(body[i], body[i + 1]) for i in range(0, len(body), 2)]
    if leftover is not None:
        router.gate2(GateKind.CX, source, leftover)
    for first, _ in pairs:
        circuit.h(first)
    for first, second in pairs:
        router.gate2(GateKind.CX, first, second)

    fusers = [leftover if leftover is not None else source] + [second for _, second in pairs[:-1]]
    for u, (first, _) in zip(fusers, pairs):
        router.gate2(GateKind.CX, u, first)
    z_bits = [circuit.measure(first) for first, _ in pairs]
    x_bits = []
    x_measured = []
    for u in fusers:
        if u != source:
            x_bits.append(circuit.measure_x(u))
            x_measured.append(u)
    copy = pairs[-1][1]
    circuit.x(copy, cond=ClassicalExpr.of(z_bits))
    for (first, _), bit in zip(pairs, z_bits):
        _reset(circuit, first, bit)
    for u, bit in zip(x_measured, x_bits):
        _reset(circuit, u, bit)
    return copy, x_bits


def emit_cat_disentangle(router: LineRouter, source: int, copy: int, x_bits: Sequence[int]) -> None:
    """Measure the copy in X, fix the source phase and reset the copy."""
    circuit = router.circuit
    bit = circuit.measure_x(copy)
    circuit.z(source, cond=ClassicalExpr.of(list(x_bits) + [bit]))
    _reset(circuit, copy, bit)


def emit_longrange_cx(router: LineRouter, control: int, target: int, chain: Sequence[int]) -> None:
    """CX from ``control`` to ``target`` through the ``|0>`` ancillas in ``chain``.

    ``chain`` lists the ancillas between the two qubits ordered from the
    control side. Without ancillas the router places the gate directly.
    """
    chain = list(chain)
    if not chain:
        router.gate2(GateKind.CX, control, target)
        return
    copy, x_bits = emit_cat_copy(router, control, chain)
    router.gate2(GateKind.CX, copy, target)
    emit_cat_disentangle(router, control, copy, x_bits)


def emit_longrange_ccx(
    router: LineRouter, c1: int, c2: int, target: int, ancillas: Sequence[int]
) -> None:
    """Toffoli whose operands may be separated by gadget ancillas.

    Far controls are copied next to the target (or next to the nearer
    control when the target sits at an end); when the target itself is far,
    the AND of the controls is formed in the first ancilla towards it and
    sent over with a long-range CX before being uncomputed.
    """
    copies: List[Tuple[int, int, List[int]]] = []

    def near(a: int, b: int) -> bool:
        return not between(a, b, ancillas)

    def bring(source: int, towards: int) -> int:
        if near(source, towards):
            return source
        copy, x_bits = emit_cat_copy(router, source, between(source, towards, ancillas))
        copies.append((source, copy, x_bits))
        return copy

    if min(c1, c2) < target < max(c1, c2):
        first, second = bring(c1, target), bring(c2, target)
        router.ccx(first, second, target)
    else:
        c_near, c_far = sorted((c1, c2), key=lambda c: abs(c - target))
        if near(c_near, target):
            router.ccx(bring(c_far, target), c_near, target)
        else:
            operand = bring(c_far, c_near)
            path = between(c_near, target, ancillas)
            work, rest = path[0], path[1:]
            router.ccx(operand, c_near, work)
            emit_longrange_cx(router, work, target, rest)
            router.ccx(operand, c_near, work)
    for source, copy, x_bits in reversed(copies):
        emit_cat_disentangle(router, source, copy, x_bits)


def build_longrange_cx(control: int, target: int, ancillas: Optional[Sequence[int]] = None) -> Circuit:
    """Standalone long-range CX with every position strictly between as an ancilla.

    Args:
        control: Control position.
        target: Target position, at distance >= 2 from the control.
        ancillas: Ancilla positions; defaults to all positions in between.

    Returns:
        Circuit with registers A = [control], B = [target], ANC = the chain.
    """
    if abs(control - target) < 2 or min(control, target) < 0:
        raise BuilderError(f"long-range CX needs distance >= 2, got {control} -> {target}")
    chain = between(control, target, ancillas if ancillas is not None else range(max(control, target)))
    if len(chain) != abs(control - target) - 1:
        raise BuilderError("every position between control and target must be an ancilla")
    registers = RegisterMap({"A": [control], "B": [target], "ANC": sorted(chain)})
    circuit = Circuit(
        width=max(control, target) + 1,
        registers=registers,
        metadata={
            "builder": "longrange-cx",
            "control": control,
            "target": target,
            "distance": abs(control - target),
            "depth_constant": LONGRANGE_DEPTH,
        },
    )
    emit_longrange_cx(LineRouter(circuit), control, target, chain)
    logger.info(f"Built long-range CX {control} -> {target} over {len(chain)} ancilla(s)")
    return circuit
