"""Fourier-state phase computation (QFS) on a meshed A/B line."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

from ..circuit.ir import Circuit, ClassicalExpr, GateKind, RegisterMap
from ..errors import BuilderError
from .layout import LineRouter, canonical_slots, emit_inverse

logger = logging.getLogger(__name__)


@dataclass
class QfsParams:
    """Parameters of the QFS builder.

    Args:
        n: Register size.
        k_max: Largest kept rotation order (``k_max = n`` is exact).
        exact: Shortcut for ``k_max = n``.
        adjoint: Build QFS^dagger instead.
        classical_control: Classical bits holding the integer that replaces
            register A (phases are then emitted on B only).
        classical_value: Value preset into ``classical_control``.
    """

    n: int
    k_max: Optional[int] = None
    exact: bool = False
    adjoint: bool = False
    classical_control: Optional[Sequence[int]] = None
    classical_value: int = 0

    def resolved_k_max(self) -> int:
        k_max = self.n if (self.exact or self.k_max is None) else int(self.k_max)
        if not 1 <= k_max <= self.n:
            raise BuilderError(f"k_max must lie in [1, {self.n}], got {k_max}")
        return k_max


def kept_pairs(n: int, k_max: int) -> Set[Tuple[int, int]]:
    """Pairs ``(l, m)`` whose rotation ``CP(k = n - l - m)`` is kept."""
    return {(l, m) for l in range(n) for m in range(n) if l + m <= n - 1 and n - l - m <= k_max}


def emit_qfs(router: LineRouter, slots: Sequence[int], n: int, k_max: int) -> None:
    """Controlled phases between A and B by brickwork exchange rounds.

    A qubits travel left and B qubits right; each kept pair gets its phase
    when the two meet, and the exchanges are undone once every kept pair
    has met, restoring the meshed order.
    """
    arrangement: List[Tuple[str, int]] = []
    for y in range(n):
        arrangement.extend([("A", n - 1 - y), ("B", y)])
    pending = kept_pairs(n, k_max)

    def phase(p: int) -> None:
        left, right = arrangement[p], arrangement[p + 1]
        if left[0] == right[0]:
            return
        l, m = (left[1], right[1]) if left[0] == "A" else (right[1], left[1])
        if (l, m) in pending:
            router.gate2(GateKind.CP, slots[p], slots[p + 1], k=n - l - m)
            pending.discard((l, m))

    for p in range(0, 2 * n - 1, 2):
        phase(p)
    exchanges: List[int] = []
    round_index = 0
    while pending:
        if round_index > 2 * n:
            raise BuilderError(f"QFS routing did not cover all pairs for n={n}, k_max={k_max}")
        for p in range(1 - round_index % 2, 2 * n - 1, 2):
            if arrangement[p][0] == "B" and arrangement[p + 1][0] == "A":
                phase(p)
                router.exchange(slots[p], slots[p + 1])
                arrangement[p], arrangement[p + 1] = arrangement[p + 1], arrangement[p]
                exchanges.append(p)
        round_index += 1
    for p in reversed(exchanges):
        router.exchange(slots[p], slots[p + 1])
    logger.debug(f"QFS n={n} k_max={k_max}: {round_index} exchange rounds")


def emit_qfs_classical(
    circuit: Circuit,
    clbits: Sequence[int],
    targets: Sequence[int],
    sign: int = 1,
) -> None:
    """Phase ``omega**(sign * c * k)`` on register ``targets`` for the classical integer ``c``.

    ``c`` is read from ``clbits`` (least significant first). Every rotation
    is a single-qubit RK conditioned on one classical bit.

    Depth is ``n``, not logarithmic: target ``m`` receives ``n - m``
    conditioned rotations in sequence. The general QFT uses it for its
    classically known offsets.
    """
    n = len(targets)
    if len(clbits) != n:
        raise BuilderError(f"classical control needs {n} bits, got {len(clbits)}")
    for l in range(n):
        for m in range(n - l):
            circuit.rk(targets[m], k=n - l - m, sign=sign, cond=ClassicalExpr.of([clbits[l]]))


def build_qfs(params: QfsParams, registers: Optional[RegisterMap] = None) -> Circuit:
    """QFS (or its adjoint) on the canonical mesh of ``2n`` qubits.

    Args:
        params: Size, truncation and flags.
        registers: Layout; defaults to ``RegisterMap.canonical(n)``.

    Returns:
        The circuit, with truncation parameters in its metadata.
    """
    n = params.n
    if n < 1:
        raise BuilderError(f"n must be >= 1, got {n}")
    registers = registers or RegisterMap.canonical(n)
    k_max = params.resolved_k_max()
    metadata = {
        "builder": "qfs",
        "n": n,
        "k_max": k_max,
        "exact": k_max == n,
        "adjoint": params.adjoint,
    }
    if params.classical_control is not None:
        clbits = list(params.classical_control)
        circuit = Circuit(
            width=registers.width,
            n_clbits=max(clbits) + 1 if clbits else 0,
            registers=registers,
            metadata={**metadata, "classical_control": clbits},
        )
        circuit.preset(clbits, params.classical_value)
        emit_qfs_classical(circuit, clbits, registers.positions("B"), -1 if params.adjoint else 1)
        return circuit

    slots = canonical_slots(registers, n)
    circuit = Circuit(width=registers.width, registers=registers, metadata=metadata)
    if params.adjoint:
        emit_inverse(circuit, lambda c: emit_qfs(LineRouter(c), slots, n, k_max))
    else:
        emit_qfs(LineRouter(circuit), slots, n, k_max)
    logger.info(f"Built QFS n={n} k_max={k_max}: {len(circuit)} ops")
    return circuit


def build_qfs_classical(n: int, value: int, sign: int = 1) -> Circuit:
    """Phases ``omega**(sign * value * k)`` on B from a classical integer preset into ``n`` bits."""
    if not 0 <= value < 2 ** n:
        raise BuilderError(f"classical value {value} does not fit in {n} bits")
    return build_qfs(
        QfsParams(n=n, adjoint=sign < 0, classical_control=list(range(n)), classical_value=value)
    )
