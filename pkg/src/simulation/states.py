"""Register-level state preparation, extraction and comparison."""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from ..circuit.ir import RegisterMap
from ..errors import SimulationError
from .statevector import MeasRecord, StateVector, basis_indices

logger = logging.getLogger(__name__)


def prepare_basis(registers: RegisterMap, width: Optional[int] = None, **values: int) -> StateVector:
    """Computational basis state with each named register holding its integer.

    Example: ``prepare_basis(regs, A=5, B=0)``.
    """
    width = registers.width if width is None else width
    index = 0
    for name, value in values.items():
        positions = registers.positions(name)
        if not 0 <= int(value) < 2 ** len(positions):
            raise SimulationError(
                f"value {value} does not fit register {name} of {len(positions)} qubit(s)"
            )
        for l, pos in enumerate(positions):
            index |= ((int(value) >> l) & 1) << pos
    return StateVector.basis(width, index)


def fourier_vector(j: int, n: int, sign: int = 1) -> np.ndarray:
    """Amplitudes of |phi(sign*j)> over register values 0..2**n - 1."""
    size = 2 ** n
    if not 0 <= j < size:
        raise SimulationError(f"Fourier index {j} out of range for {n} qubit(s)")
    k = np.arange(size)
    return np.exp(2j * np.pi * sign * ((j * k) % size) / size) / np.sqrt(size)


def embed(vector: np.ndarray, positions: Sequence[int], width: int) -> StateVector:
    """Place a joint vector over ``positions`` into a ``width``-qubit state (rest |0>)."""
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    if vector.shape[0] != 2 ** len(positions):
        raise SimulationError(
            f"vector of length {vector.shape[0]} does not match {len(positions)} position(s)"
        )
    if positions and max(positions) >= width:
        raise SimulationError(f"positions exceed width {width}")
    amplitudes = np.zeros(2 ** width, dtype=complex)
    amplitudes[basis_indices(positions)] = vector
    return StateVector(amplitudes, width)


def fourier_state(
    j: int, register: str, registers: RegisterMap, width: Optional[int] = None, sign: int = 1
) -> StateVector:
    """|phi(j)> on ``register`` and |0> on every other position."""
    positions = registers.positions(register)
    width = registers.width if width is None else width
    return embed(fourier_vector(j, len(positions), sign), positions, width)


def as_matrix(state: StateVector, positions: Sequence[int]) -> np.ndarray:
    """Amplitudes as a ``(2**m, 2**rest)`` matrix.

    Rows index the value of ``positions`` (first position least significant),
    columns the remaining positions in increasing order.
    """
    width = state.width
    rest = [p for p in range(width) if p not in set(positions)]
    tensor = state.amplitudes.reshape([2] * width) if width else state.amplitudes
    axes = [width - 1 - p for p in reversed(list(positions))]
    axes += [width - 1 - p for p in reversed(rest)]
    return np.transpose(tensor, axes).reshape(2 ** len(positions), 2 ** len(rest))


def register_distribution(state: StateVector, positions: Sequence[int]) -> np.ndarray:
    """Marginal distribution of the integer held by ``positions``."""
    return np.sum(np.abs(as_matrix(state, positions)) ** 2, axis=1)


def reduced_density(state: StateVector, positions: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of ``positions``."""
    matrix = as_matrix(state, positions)
    return matrix @ matrix.conj().T


def register_value(state: StateVector, positions: Sequence[int], tol: float = 1e-9) -> int:
    """Value of a register that is in a computational basis state."""
    probs = register_distribution(state, positions)
    value = int(np.argmax(probs))
    if abs(probs[value] - 1.0) > tol:
        raise SimulationError(
            f"register is not in a basis state (max probability {probs[value]:.6f})"
        )
    return value


def restrict(state: StateVector, positions: Sequence[int], width: Optional[int] = None) -> np.ndarray:
    """Component with every position outside ``positions`` (below ``width``) in |0>.

    Positions at or beyond ``width`` (e.g. deferred-mode records) are kept as
    columns, so the result has shape ``(2**m, 2**extra)``.
    """
    width = state.width if width is None else width
    matrix = as_matrix(state, positions)
    others = [p for p in range(state.width) if p not in set(positions)]
    inner = [i for i, p in enumerate(others) if p < width]
    if not inner:
        return matrix
    cols = np.arange(matrix.shape[1])
    mask = np.ones(matrix.shape[1], dtype=bool)
    for i in inner:
        mask &= ((cols >> i) & 1) == 0
    return matrix[:, mask]


@dataclass(frozen=True)
class StateDistance:
    two_norm: float
    fidelity: float
    phase_aligned: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def state_distance(u, v) -> StateDistance:
    """Two-norm, fidelity and global-phase-minimized two-norm between states."""
    a = u.amplitudes if isinstance(u, StateVector) else np.asarray(u, dtype=complex).reshape(-1)
    b = v.amplitudes if isinstance(v, StateVector) else np.asarray(v, dtype=complex).reshape(-1)
    if a.shape != b.shape:
        raise SimulationError(f"cannot compare states of length {a.shape[0]} and {b.shape[0]}")
    overlap = np.vdot(a, b)
    two_norm = float(np.linalg.norm(a - b))
    aligned_sq = float(np.linalg.norm(a) ** 2 + np.linalg.norm(b) ** 2 - 2 * abs(overlap))
    return StateDistance(
        two_norm=two_norm,
        fidelity=float(abs(overlap) ** 2),
        phase_aligned=float(np.sqrt(max(aligned_sq, 0.0))),
    )


def shot_to_dict(record: MeasRecord, state: Optional[StateVector] = None, top: int = 0) -> Dict:
    """JSON-ready shot export ``{seed, record, amplitudes?}``."""
    doc = {"seed": record.seed, "record": record.to_dict()}
    if state is not None and top:
        doc["amplitudes"] = [
            {"index": i, "re": a.real, "im": a.imag} for i, a in state.top(top)
        ]
    return doc


def from_matrix(matrix: np.ndarray, positions: Sequence[int], width: int) -> StateVector:
    """Inverse of :func:`as_matrix`."""
    rest = [p for p in range(width) if p not in set(positions)]
    order = list(reversed(list(positions))) + list(reversed(rest))
    tensor = np.asarray(matrix, dtype=complex).reshape([2] * width)
    # axis i of ``tensor`` belongs to position order[i]; move it to axis width-1-p
    target = [width - 1 - p for p in order]
    out = np.moveaxis(tensor, list(range(width)), target)
    return StateVector(out.reshape(-1), width)
