"""Fourier phase estimation (FPE) from parallel block QFTs."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..analysis.bounds import Window, window_plan
from ..circuit.ir import Circuit, ClassicalExpr, GateKind, RegisterMap
from ..errors import BuilderError, InvalidParameterError
from .layout import LineRouter, canonical_slots, route
from .small_qft import emit_small_qft, emit_small_qft_adjoint

logger = logging.getLogger(__name__)


@dataclass
class FpeParams:
    """Parameters of the estimation circuit.

    Args:
        n: Register size.
        k: Block size; windows span ``2k`` qubits of B. Either ``2k``
            divides ``n`` or ``2k >= n`` (one exact window).
        conjugate: Build the variant for ``|phi(-j)>`` inputs (block QFTs
            and their adjoints exchanged).
    """

    n: int
    k: int
    conjugate: bool = False

    def validate(self) -> None:
        if self.n < 1 or self.k < 1:
            raise BuilderError(f"invalid FPE parameters n={self.n}, k={self.k}")
        if 2 * self.k < self.n and self.n % (2 * self.k):
            raise InvalidParameterError(f"FPE needs 2k | n, got n={self.n}, k={self.k}")


def _window_tokens(size: int) -> Tuple[List[Tuple[str, int]], List[Tuple[str, int]], List[Tuple[str, int]]]:
    canonical, grouped, paired = [], [], []
    for t in range(size):
        canonical.extend([("a", t), ("b", t)])
    grouped = [("a", t) for t in range(size)] + [("b", t) for t in range(size)]
    for t in range(size):
        paired.extend([("a", size - 1 - t), ("b", t)])
    return canonical, grouped, paired


def window_slots(slots: Sequence[int], n: int, window: Window) -> List[int]:
    """Line positions of the window: ``2*size`` logical slots starting at B index ``lo``."""
    lo = window.b_low(n)
    return list(slots[2 * lo : 2 * lo + 2 * window.size])


def emit_window(
    router: LineRouter,
    slots: Sequence[int],
    n: int,
    window: Window,
    conjugate: bool = False,
    measured: Optional[Dict[int, int]] = None,
) -> None:
    """Estimate the bits of one window and copy the erased ones into A.

    Inside the window ``a_t`` is ``A_{n-1-lo-t}`` and ``b_t`` is ``B_{lo+t}``;
    estimate bit ``t`` is bit ``s + t`` of j and belongs to ``a_{size-1-t}``.
    With ``measured`` (A bit index to classical bit) the copy is replaced by
    Z corrections on the estimate qubits conditioned on measured A outcomes.
    """
    size = window.size
    span = window_slots(slots, n, window)
    canonical, grouped, paired = _window_tokens(size)
    estimate = span[size:]
    forward, backward = (emit_small_qft, emit_small_qft_adjoint)
    if conjugate:
        forward, backward = backward, forward

    arrangement = route(router, span, canonical, grouped)
    backward(router, estimate)
    if measured is None:
        arrangement = route(router, span, arrangement, paired)
        for t in window.erase:
            # paired order puts b_t at 2t+1 next to a_{size-1-t} at 2t
            router.gate2(GateKind.CX, span[2 * t + 1], span[2 * t])
        arrangement = route(router, span, arrangement, grouped)
    else:
        for t in window.erase:
            bit = measured[window.s + t]
            router.circuit.z(estimate[t], cond=ClassicalExpr.of([bit]))
    forward(router, estimate)
    route(router, span, arrangement, canonical)


def emit_fpe(
    router: LineRouter,
    slots: Sequence[int],
    n: int,
    k: int,
    conjugate: bool = False,
    measured: Optional[Dict[int, int]] = None,
) -> List[Window]:
    """Both passes of the estimation circuit on the meshed line ``slots``."""
    windows = window_plan(n, k)
    for pass_index in (1, 2):
        for window in windows:
            if window.pass_index == pass_index:
                emit_window(router, slots, n, window, conjugate, measured)
    return windows


def build_fpe(params: FpeParams, registers: Optional[RegisterMap] = None) -> Circuit:
    """Estimation circuit ``|b>_A |phi(j)>_B -> |b xor j>_A |phi(j)>_B`` (approximately).

    Args:
        params: Size, block size and conjugate flag.
        registers: Meshed layout; defaults to ``RegisterMap.canonical(n)``.

    Returns:
        Circuit with the window plan recorded in its metadata.
    """
    params.validate()
    n, k = params.n, params.k
    registers = registers or RegisterMap.canonical(n)
    slots = canonical_slots(registers, n)
    circuit = Circuit(width=registers.width, registers=registers)
    windows = emit_fpe(LineRouter(circuit), slots, n, k, params.conjugate)
    circuit.annotate(
        builder="fpe",
        n=n,
        k=k,
        conjugate=params.conjugate,
        exact=len(windows) == 1,
        windows=[[w.s, w.size, w.pass_index] for w in windows],
    )
    logger.info(f"Built FPE n={n} k={k}: {len(windows)} window(s), {len(circuit)} ops")
    return circuit
