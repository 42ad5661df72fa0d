"""Exact QFT on a small block of line qubits."""

import logging
from typing import List, Optional, Sequence

from ..circuit.ir import Circuit, GateKind, RegisterMap
from ..errors import BuilderError
from .layout import LineRouter, emit_inverse

logger = logging.getLogger(__name__)


def emit_small_qft(router: LineRouter, slots: Sequence[int]) -> None:
    """QFT of the integer held by ``slots`` (first slot least significant).

    The most significant remaining qubit gets an H and then travels down the
    block, picking up one controlled phase per neighbour it passes, so the
    output bit ``t`` ends on ``slots[t]`` and no final reversal is needed.
    """
    w = len(slots)
    for head in range(w):
        top = w - 1
        router.circuit.h(slots[top])
        for step, position in enumerate(range(top, head, -1)):
            router.gate2(GateKind.CP, slots[position - 1], slots[position], k=step + 2)
            router.exchange(slots[position - 1], slots[position])


def emit_small_qft_adjoint(router: LineRouter, slots: Sequence[int]) -> None:
    emit_inverse(router.circuit, lambda c: emit_small_qft(LineRouter(c, router.hop), slots))


def build_small_qft(
    size: int, base: int = 0, adjoint: bool = False, slots: Optional[Sequence[int]] = None
) -> Circuit:
    """Exact QFT mod ``2**size`` (or its adjoint) on a block of the line.

    Args:
        size: Number of block qubits (``2k`` inside the estimation circuit).
        base: First position of a contiguous block.
        adjoint: Build the inverse transform.
        slots: Explicit block positions (least significant first); other
            qubits between them are hopped over.

    Returns:
        Circuit whose register A is the block.
    """
    if size < 1:
        raise BuilderError(f"block size must be >= 1, got {size}")
    block: List[int] = list(slots) if slots is not None else list(range(base, base + size))
    if len(block) != size:
        raise BuilderError(f"expected {size} block positions, got {len(block)}")
    if base < 0 or min(block) < 0:
        raise BuilderError("block exceeds the line")
    circuit = Circuit(
        width=max(block) + 1,
        registers=RegisterMap({"A": block}),
        metadata={"builder": "small-qft", "size": size, "base": min(block), "adjoint": adjoint},
    )
    router = LineRouter(circuit)
    if adjoint:
        emit_small_qft_adjoint(router, block)
    else:
        emit_small_qft(router, block)
    return circuit
