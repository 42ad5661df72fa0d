"""Reference transforms, input-state samplers and operator distances."""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np

from ..circuit.ir import Circuit, RegisterMap
from ..config.settings import settings
from ..errors import AnalysisError, SimulationError
from ..simulation.states import as_matrix, embed, from_matrix
from ..simulation.statevector import StateVector, unitary

logger = logging.getLogger(__name__)


def dft_oracle(n: int, sign: int = 1) -> np.ndarray:
    """``2**n x 2**n`` matrix with entries ``omega**(sign*j*k) / sqrt(N)``."""
    if n > settings.MAX_ORACLE_QUBITS:
        raise AnalysisError(
            f"dense DFT limited to n <= {settings.MAX_ORACLE_QUBITS}, got n={n}"
        )
    size = 2 ** n
    k = np.arange(size)
    return np.exp(2j * np.pi * sign * (np.outer(k, k) % size) / size) / np.sqrt(size)


def ideal_transform(
    state: StateVector,
    input_positions: Sequence[int],
    output_positions: Sequence[int],
    sign: int = 1,
) -> StateVector:
    """Exact QFT moving the value on ``input_positions`` to ``output_positions``.

    The output positions must be |0> in ``state``; the input positions are
    |0> afterwards. Every other qubit (environment included) is untouched.
    """
    n = len(input_positions)
    if len(output_positions) != n:
        raise AnalysisError("input and output registers must have equal size")
    positions = list(input_positions) + list(output_positions)
    matrix = as_matrix(state, positions)
    size = 2 ** n
    body = matrix[:size]
    if np.linalg.norm(matrix[size:]) > 1e-9:
        raise AnalysisError("output register of the reference input is not |0>")
    result = np.zeros_like(matrix)
    result[np.arange(size) * size] = dft_oracle(n, sign) @ body
    return from_matrix(result, positions, state.width)


def random_two_qubit_unitary(rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def brick_unitary(qubits: int, seed: int, layers: Optional[int] = None) -> np.ndarray:
    """Dense product of seeded random two-qubit unitaries in a brick pattern."""
    rng = np.random.Generator(np.random.PCG64(seed))
    dim = 2 ** qubits
    total = np.eye(dim, dtype=complex)
    if qubits < 2:
        if qubits == 1:
            z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            q, r = np.linalg.qr(z)
            total = q * (np.diag(r) / np.abs(np.diag(r)))
        return total
    for layer in range(layers or qubits):
        for low in range(layer % 2, qubits - 1, 2):
            gate = random_two_qubit_unitary(rng)
            # gate acts on bits (low, low+1); reshape as (high, pair, lowbits)
            full = total.reshape(2 ** (qubits - low - 2), 4, 2 ** low, dim)
            total = np.einsum("ab,xbyc->xayc", gate, full).reshape(dim, dim)
    return total


def _uniform_weights(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    size = 2 ** n
    weights = np.full(size, 1.0 / size)
    if p <= 1.0:
        return weights
    heavy = min(size - 1, max(1, int(size // (2 * p))))
    chosen = rng.choice(size, size=heavy, replace=False)
    weights[:] = (1.0 - heavy * p / size) / (size - heavy)
    weights[chosen] = p / size
    return weights


def sample_uniform_state(
    n: int,
    registers: RegisterMap,
    seed: int,
    env_qubits: Optional[int] = None,
    p: float = 1.0,
    width: Optional[int] = None,
    identity_env: bool = False,
) -> StateVector:
    """Input ``sum_j sqrt(w_j) |j>_A |0>_B (U_E|j>)_E`` with orthonormal environment states.

    Environment qubits occupy the positions right after ``width`` (default
    the register map's width). With ``p == 1`` all weights are ``1/N``;
    larger ``p`` puts weight ``p/N`` on a seeded subset and spreads the rest
    evenly, so the reduced state of A stays diagonal with entries <= p/N.
    """
    env = n if env_qubits is None else env_qubits
    if env < n:
        raise AnalysisError(f"need at least {n} environment qubits, got {env}")
    if p < 1.0:
        raise AnalysisError(f"p must be >= 1, got {p}")
    base = registers.width if width is None else width
    rng = np.random.Generator(np.random.PCG64(seed))
    weights = _uniform_weights(n, p, rng)
    u_env = np.eye(2 ** env, dtype=complex) if identity_env else brick_unitary(env, seed + 1)
    size = 2 ** n
    # joint[j, e] over (A bits, environment bits)
    joint = (u_env[:, :size] * np.sqrt(weights)[None, :]).T
    positions = list(registers.positions("A")) + list(range(base, base + env))
    return embed(joint.reshape(-1, order="F"), positions, base + env)


@dataclass(frozen=True)
class SpectralDistance:
    """Operator distances between two isometries on a declared input subspace."""

    raw: float
    phase_aligned: float
    entangled: float
    entangled_phase_aligned: float
    phase: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _spectral(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix, 2))


def golden_section_minimize(cost: Callable[[float], float], lo: float, hi: float, steps: int = 60) -> float:
    """Golden-section search for the minimizer of a unimodal ``cost`` on ``[lo, hi]``.

    Each step shrinks the bracket by the inverse golden ratio and reuses one
    interior evaluation, so ``steps`` iterations cost ``steps + 2`` calls.
    """
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = hi - ratio * (hi - lo), lo + ratio * (hi - lo)
    fa, fb = cost(a), cost(b)
    for _ in range(steps):
        if fa < fb:
            hi, b, fb = b, a, fa
            a = hi - ratio * (hi - lo)
            fa = cost(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + ratio * (hi - lo)
            fb = cost(b)
    return (lo + hi) / 2.0


def isometry(operator: Union[Circuit, np.ndarray], input_positions: Optional[Sequence[int]] = None) -> np.ndarray:
    """Columns spanning the action of ``operator`` on an input subspace.

    A circuit is run in deferred mode on every basis value of
    ``input_positions`` with all other positions in |0>; a matrix is
    returned as is.

    Raises:
        AnalysisError: A circuit without input positions, or one the
            deferred simulator cannot evaluate.
    """
    if not isinstance(operator, Circuit):
        return np.asarray(operator, dtype=complex)
    if input_positions is None:
        raise AnalysisError("a circuit operand needs its input positions")
    try:
        return unitary(operator, input_positions)
    except SimulationError as e:
        logger.error(f"Error evaluating circuit for the distance: {e}")
        raise AnalysisError(f"circuit not deferrable: {e}") from e


def distance_spectral(
    u: Union[Circuit, np.ndarray],
    v: Union[Circuit, np.ndarray],
    input_positions: Optional[Sequence[int]] = None,
) -> SpectralDistance:
    """Spectral and maximally-entangled distances between ``u`` and ``v``.

    Matrices are ``(dim_out, dim_in)`` with the images of the input subspace
    basis as columns; circuits are converted by :func:`isometry` over
    ``input_positions``. The phase-aligned value minimizes
    ``||exp(i*phi) u - v||`` over the global phase.
    """
    u = isometry(u, input_positions)
    v = isometry(v, input_positions)
    if u.shape != v.shape:
        raise AnalysisError(f"dimension mismatch: {u.shape} vs {v.shape}")
    dim = u.shape[1]
    trace = np.vdot(u, v)
    start = float(np.angle(trace)) if abs(trace) > 1e-15 else 0.0

    def cost(phi: float) -> float:
        return _spectral(np.exp(1j * phi) * u - v)

    # coarse grid picks the basin; golden-section search refines it
    grid = start + np.linspace(-np.pi, np.pi, 33)[:-1]
    best = min(grid, key=cost)
    phase = golden_section_minimize(cost, best - 2 * np.pi / 32, best + 2 * np.pi / 32)
    aligned = min(cost(phase), cost(start), cost(best))
    frob = float(np.linalg.norm(u - v))
    ent_aligned_sq = (np.linalg.norm(u) ** 2 + np.linalg.norm(v) ** 2 - 2 * abs(trace)) / dim
    return SpectralDistance(
        raw=_spectral(u - v),
        phase_aligned=float(aligned),
        entangled=frob / math.sqrt(dim),
        entangled_phase_aligned=float(math.sqrt(max(0.0, ent_aligned_sq))),
        phase=float(phase),
    )


def purified_distance(
    operator: Union[Circuit, np.ndarray],
    reference: np.ndarray,
    input_positions: Optional[Sequence[int]],
    output_positions: Sequence[int],
) -> float:
    """Entangled-input distance to ``reference`` with the best environment state.

    Every position outside ``output_positions``, including deferred-mode
    measurement records, counts as environment. With ``w`` the overlap of
    the Choi states maximized over the environment, the result is
    ``sqrt(2 - 2*||w||)``; it never exceeds the phase-aligned entangled
    distance, and measuring or resetting environment qubits leaves it unchanged.

    Args:
        operator: Circuit (run in deferred mode) or isometry columns.
        reference: ``(2**m, dim_in)`` target columns over the output register.
        input_positions: Input register; needed for circuits.
        output_positions: Output register positions in the operator's columns.

    Returns:
        The distance, in ``[0, sqrt(2)]``.
    """
    columns = isometry(operator, input_positions)
    reference = np.asarray(reference, dtype=complex)
    if reference.shape != (2 ** len(output_positions), columns.shape[1]):
        raise AnalysisError(f"reference shape {reference.shape} does not match the operator")
    width = columns.shape[0].bit_length() - 1
    overlap = 0.0
    for j in range(columns.shape[1]):
        block = as_matrix(StateVector(columns[:, j].copy(), width), output_positions)
        overlap = overlap + reference[:, j].conj() @ block
    norm = float(np.linalg.norm(overlap)) / columns.shape[1]
    return float(math.sqrt(max(0.0, 2.0 - 2.0 * norm)))
