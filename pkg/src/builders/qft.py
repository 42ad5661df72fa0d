"""Approximate QFT on a line: uniform-input construction and its randomized general form."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..analysis.bounds import ErrorBudget, error_budget
from ..circuit.ir import Circuit, ClassicalExpr, RegisterMap
from ..config.settings import settings
from ..errors import BuilderError, QftLineError
from .adder import adder_positions, emit_adder
from .fpe import emit_fpe
from .layout import LineRouter, canonical_slots, emit_inverse, general_registers, propagate_slots
from .qfs import emit_qfs, emit_qfs_classical

logger = logging.getLogger(__name__)

KINDS = ("uni", "general")
DIRECTIONS = ("forward", "backward")
MCM_OPTIONS = ("none", "measure-early", "postselect-flag")


@dataclass
class QftVariant:
    """Which QFT construction to build.

    Args:
        kind: ``uni`` (uniform inputs) or ``general`` (randomized wrapper).
        direction: ``forward`` ends with the estimation stage; ``backward``
            is the adjoint of the conjugate construction and ends with QFS.
        mcm_opt: ``none``, ``measure-early`` (mid-circuit measurements
            replace the erasing stage) or ``postselect-flag`` (measure the
            freed register into flag bits).
        epsilon: Error target; builders fall back to it when not given one.
        seed: Seed for the random offsets of the general construction.
    """

    kind: str = "uni"
    direction: str = "forward"
    mcm_opt: str = "none"
    epsilon: Optional[float] = None
    seed: Optional[int] = None

    def validate(self) -> None:
        for value, allowed, name in (
            (self.kind, KINDS, "kind"),
            (self.direction, DIRECTIONS, "direction"),
            (self.mcm_opt, MCM_OPTIONS, "mcm_opt"),
        ):
            if value not in allowed:
                raise BuilderError(f"unknown {name} {value!r}; expected one of {allowed}")


def _a_slot(slots: Sequence[int], n: int, l: int) -> int:
    return slots[2 * (n - 1 - l)]


def _b_slot(slots: Sequence[int], l: int) -> int:
    return slots[2 * l + 1]


def _measure_and_reset(circuit: Circuit, positions: Sequence[int], x_basis: bool = False) -> List[int]:
    bits = [circuit.measure_x(q) if x_basis else circuit.measure(q) for q in positions]
    for q, bit in zip(positions, bits):
        circuit.x(q, cond=ClassicalExpr.of([bit]))
    return bits


def emit_qft_uni_forward(
    circuit: Circuit, slots: Sequence[int], n: int, budget: ErrorBudget, mcm_opt: str = "none"
) -> List[int]:
    """H on B, QFS and the estimation stage; the transform lands on B.

    Returns the flag bits for ``postselect-flag`` (empty otherwise).
    """
    router = LineRouter(circuit)
    a = [_a_slot(slots, n, l) for l in range(n)]
    for l in range(n):
        circuit.h(_b_slot(slots, l))
    emit_qfs(router, slots, n, budget.k_max)
    if mcm_opt == "measure-early":
        bits = _measure_and_reset(circuit, a, x_basis=True)
        emit_fpe(router, slots, n, budget.k, measured=dict(enumerate(bits)))
        return []
    emit_fpe(router, slots, n, budget.k)
    if mcm_opt == "postselect-flag":
        return _measure_and_reset(circuit, a)
    return []


def _emit_conjugate_construction(circuit: Circuit, slots: Sequence[int], n: int, budget: ErrorBudget) -> None:
    router = LineRouter(circuit)
    for l in range(n):
        circuit.h(_b_slot(slots, l))
    emit_inverse(circuit, lambda c: emit_qfs(LineRouter(c), slots, n, budget.k_max))
    emit_fpe(router, slots, n, budget.k, conjugate=True)


def emit_qft_uni_backward(
    circuit: Circuit, slots: Sequence[int], n: int, budget: ErrorBudget, mcm_opt: str = "none"
) -> List[int]:
    """Adjoint of (H on B, QFS^dagger, conjugate estimation); the transform moves B onto A.

    With ``measure-early`` the trailing QFS and H layer are replaced by a Z
    measurement of B followed by exact classically controlled phases on A.
    """
    a = [_a_slot(slots, n, l) for l in range(n)]
    b = [_b_slot(slots, l) for l in range(n)]
    if mcm_opt != "measure-early":
        emit_inverse(circuit, _emit_conjugate_construction, slots, n, budget)
        if mcm_opt == "postselect-flag":
            return _measure_and_reset(circuit, b)
        return []
    emit_inverse(circuit, lambda c: emit_fpe(LineRouter(c), slots, n, budget.k, conjugate=True))
    bits = [circuit.measure(q) for q in b]
    for l in range(n):
        for m in range(n - l):
            circuit.rk(a[l], k=n - l - m, cond=ClassicalExpr.of([bits[m]]))
    for q, bit in zip(b, bits):
        circuit.x(q, cond=ClassicalExpr.of([bit]))
    return []


def _resolve_epsilon(epsilon: Optional[float], variant: QftVariant) -> float:
    value = epsilon if epsilon is not None else variant.epsilon
    if value is None:
        raise BuilderError("an error target epsilon is required")
    return float(value)


def build_qft_uni(
    n: int,
    epsilon: Optional[float] = None,
    variant: Optional[QftVariant] = None,
    registers: Optional[RegisterMap] = None,
    k_max: Optional[int] = None,
    k: Optional[int] = None,
    p: Optional[float] = None,
) -> Circuit:
    """QFT for inputs whose amplitudes are spread uniformly over the register.

    Args:
        n: Register size.
        epsilon: Error target split evenly between QFS and the estimation.
        variant: Direction and measurement options (kind must be ``uni``).
        registers: Meshed layout; defaults to ``RegisterMap.canonical(n)``.
        k_max: Override for the kept rotation order.
        k: Override for the estimation block size.
        p: Uniformity parameter of the input set.

    Returns:
        Circuit of width ``2n``. ``metadata["input_register"]`` and
        ``metadata["output_register"]`` give the transform's line positions.
    """
    variant = variant or QftVariant()
    variant.validate()
    if variant.kind != "uni":
        raise BuilderError("build_qft_uni builds the uniform kind only")
    try:
        budget = error_budget(n, _resolve_epsilon(epsilon, variant), p, k_max, k)
        registers = registers or RegisterMap.canonical(n)
        slots = canonical_slots(registers, n)
    except QftLineError as e:
        logger.error(f"Error preparing QFT_uni n={n}: {e}")
        raise

    circuit = Circuit(width=registers.width, registers=registers)
    a, b = list(registers.positions("A")), list(registers.positions("B"))
    if variant.direction == "forward":
        flags = emit_qft_uni_forward(circuit, slots, n, budget, variant.mcm_opt)
        inputs, outputs = a, b
        circuit = circuit.with_registers(registers.relabeled({"A": "B", "B": "A"}))
    else:
        flags = emit_qft_uni_backward(circuit, slots, n, budget, variant.mcm_opt)
        inputs, outputs = b, a
    circuit.annotate(
        builder="qft-uni",
        n=n,
        epsilon=budget.epsilon,
        direction=variant.direction,
        mcm_opt=variant.mcm_opt,
        budget=budget.to_dict(),
        input_register=inputs,
        output_register=outputs,
        flag_clbits=flags,
    )
    logger.info(
        f"Built QFT_uni n={n} eps={budget.epsilon} ({variant.direction}, {variant.mcm_opt}): "
        f"k_max={budget.k_max}, k={budget.k}, {len(circuit)} ops"
    )
    return circuit


def draw_offsets(n: int, seed: int) -> Tuple[int, int]:
    """Uniform ``(c1, c2)`` in ``[0, 2**n)`` from a seeded PCG64 stream."""
    rng = np.random.Generator(np.random.PCG64(seed))
    c1, c2 = rng.integers(0, 2 ** n, size=2)
    return int(c1), int(c2)


def _general_adder_layout(
    n: int, target: Dict[int, int], carry_slots: Dict[int, int], prop_slots: Dict[int, int], mirrored: bool
) -> Dict:
    """Positions of an adder whose target bit ``i`` lives in slice ``i`` (or ``n-1-i`` when mirrored)."""

    def slice_of(i: int) -> int:
        return n - 1 - i if mirrored else i

    carries = {i + 1: carry_slots[slice_of(i)] for i in range(n - 1)}
    props = {key: prop_slots[slice_of(s)] for key, s in propagate_slots(n - 1).items()}
    return adder_positions([target[i] for i in range(n)], None, carries, props)


def build_qft_general(
    n: int,
    epsilon: Optional[float] = None,
    seed: Optional[int] = None,
    registers: Optional[RegisterMap] = None,
    variant: Optional[QftVariant] = None,
    k_max: Optional[int] = None,
    k: Optional[int] = None,
    p: Optional[float] = None,
    offsets: Optional[Tuple[int, int]] = None,
) -> Tuple[Circuit, Tuple[int, int]]:
    """QFT for arbitrary inputs by randomizing them into the uniform regime.

    The input ``|j>`` is encoded as ``omega**(j*c1) |j + c2>``, transformed by
    QFT_uni, and the offsets are removed from the Fourier state with
    classically controlled phases and a classical-constant adder.

    Args:
        n: Register size.
        epsilon: Error target of the inner QFT_uni.
        seed: Seed for ``(c1, c2)``; falls back to ``QFTLINE_SEED``.
        registers: Must equal ``general_registers(n)`` when given.
        variant: Forward variant options for the inner QFT_uni.
        k_max, k, p: Overrides passed to the error budget.
        offsets: Use these ``(c1, c2)`` instead of drawing them.

    Returns:
        The circuit and the offsets ``(c1, c2)``.
    """
    variant = variant or QftVariant(kind="general")
    variant.validate()
    if variant.direction != "forward":
        raise BuilderError("the general construction wraps the forward QFT_uni only")
    layout, info = general_registers(n)
    if registers is not None and registers != layout:
        raise BuilderError(f"general QFT layout mismatch: expected {layout}, got {registers}")
    try:
        budget = error_budget(n, _resolve_epsilon(epsilon, variant), p, k_max, k)
        if offsets is None:
            offsets = draw_offsets(n, settings.resolve_seed(seed if seed is not None else variant.seed))
    except QftLineError as e:
        logger.error(f"Error preparing general QFT n={n}: {e}")
        raise
    c1, c2 = (int(c) for c in offsets)
    if not (0 <= c1 < 2 ** n and 0 <= c2 < 2 ** n):
        raise BuilderError(f"offsets ({c1}, {c2}) do not fit in {n} bits")

    circuit = Circuit(width=info["width"], registers=layout)
    c1_bits, c2_bits = circuit.add_clbits(n), circuit.add_clbits(n)
    circuit.preset(c1_bits, c1)
    circuit.preset(c2_bits, c2)
    a, b = list(layout.positions("A")), list(layout.positions("B"))
    router = LineRouter(circuit)
    a_adder = _general_adder_layout(n, dict(enumerate(a)), info["carry_slots"], info["prop_slots"], False)
    b_adder = _general_adder_layout(n, dict(enumerate(b)), info["carry_slots"], info["prop_slots"], True)

    emit_qfs_classical(circuit, c1_bits, a)
    emit_adder(router, n, a_adder, ancillas=b, constant=c2)
    encode_ops = len(circuit)
    flags = emit_qft_uni_forward(circuit, canonical_slots(layout, n), n, budget, variant.mcm_opt)
    emit_qfs_classical(circuit, c2_bits, b, sign=-1)
    emit_adder(router, n, b_adder, ancillas=a, constant=c1)

    circuit = circuit.with_registers(layout.relabeled({"A": "B", "B": "A"}))
    circuit.annotate(
        builder="qft-general",
        n=n,
        epsilon=budget.epsilon,
        direction="forward",
        mcm_opt=variant.mcm_opt,
        budget=budget.to_dict(),
        c1=c1,
        c2=c2,
        c1_clbits=c1_bits,
        c2_clbits=c2_bits,
        encode_ops=encode_ops,
        input_register=a,
        output_register=b,
        flag_clbits=flags,
    )
    logger.info(f"Built general QFT n={n} with offsets c1={c1}, c2={c2}: {circuit.width} qubits, {len(circuit)} ops")
    return circuit, (c1, c2)
