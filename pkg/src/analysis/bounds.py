"""Closed-form error quantities for truncated phase rotations and block phase estimation."""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import settings
from ..errors import AnalysisError, InvalidParameterError

logger = logging.getLogger(__name__)


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 < epsilon < 1.0:
        raise AnalysisError(f"epsilon must lie in (0, 1), got {epsilon}")


def choose_eps_prime(epsilon: float) -> float:
    """Rotation tolerance whose truncation error ``2*sin(2*pi*eps')`` equals ``epsilon``."""
    _check_epsilon(epsilon)
    return math.asin(epsilon / 2.0) / (2.0 * math.pi)


def choose_k_max(n: int, eps_prime: float) -> int:
    """Largest kept rotation order ``max(1, ceil(log2(n / eps')))``, capped at ``n``."""
    if n < 1:
        raise AnalysisError(f"n must be >= 1, got {n}")
    if eps_prime <= 0:
        raise AnalysisError(f"eps' must be positive, got {eps_prime}")
    if 2.0 ** (-n) > eps_prime:
        logger.warning(
            f"2^-n = {2.0 ** (-n):.3e} exceeds eps' = {eps_prime:.3e}; "
            "the truncation bound assumes 2^-n <= eps'"
        )
    k_max = max(1, math.ceil(math.log2(n / eps_prime)))
    return min(k_max, n)


def qfs_bound(eps_prime: float) -> float:
    return 2.0 * math.sin(2.0 * math.pi * eps_prime)


def _bits(n: int) -> np.ndarray:
    values = np.arange(2 ** n)
    return ((values[:, None] >> np.arange(n)[None, :]) & 1).astype(float)


def xi(j: int, k_bits: int, n: int, k_max: int) -> float:
    """Phase defect (in turns) left out by keeping only rotations of order <= k_max."""
    total = 0.0
    for l in range(n):
        if not (j >> l) & 1:
            continue
        for m in range(0, n - l - k_max):
            if (k_bits >> m) & 1:
                total += 2.0 ** (l + m - n)
    return total


def xi_table(n: int, k_max: int) -> np.ndarray:
    """``xi(j, k)`` for all pairs as a ``2**n x 2**n`` array."""
    if not 1 <= k_max <= n:
        raise AnalysisError(f"k_max must lie in [1, {n}], got {k_max}")
    weights = np.zeros((n, n))
    for l in range(n):
        for m in range(n):
            if l + m <= n - k_max - 1:
                weights[l, m] = 2.0 ** (l + m - n)
    bits = _bits(n)
    return bits @ weights @ bits.T


def xi_bound(n: int, k_max: int) -> float:
    return 2.0 ** (-k_max) * (n - k_max - 1) + 2.0 ** (-n)


def qfs_error(n: int, k_max: int) -> float:
    """Operator-norm error ``max |1 - exp(-2*pi*i*xi)|`` of the truncated QFS."""
    table = xi_table(n, k_max)
    return float(np.max(np.abs(1.0 - np.exp(-2j * np.pi * table))))


def qfs_mean_error(n: int, k_max: int) -> float:
    """Root-mean-square of ``|1 - exp(-2*pi*i*xi)|`` over all ``(j, k)``.

    This is the truncation error seen by a maximally entangled input.
    """
    table = xi_table(n, k_max)
    return float(np.sqrt(np.mean(np.abs(1.0 - np.exp(-2j * np.pi * table)) ** 2)))


def wrap_distance(x: int, modulus: int) -> int:
    """Distance of ``x`` to the nearest multiple of ``modulus``."""
    r = x % modulus
    return r if r <= modulus / 2 else (-x) % modulus


# -- block phase estimation ------------------------------------------------


@dataclass(frozen=True)
class Window:
    """One block QFT window of the estimation circuit.

    The window estimates bits ``[s, s + size)`` of j. ``erase`` lists the
    window-relative estimate bits copied into A.
    """

    s: int
    size: int
    pass_index: int
    exact: bool

    @property
    def erase(self) -> Tuple[int, ...]:
        if self.exact:
            return tuple(range(self.size))
        half = self.size // 2
        return tuple(range(half, self.size))

    def b_low(self, n: int) -> int:
        """Lowest B-register index covered by the window."""
        return n - self.s - self.size


def window_plan(n: int, k: int) -> List[Window]:
    """Windows of both passes for block size ``k``.

    One exact window covers the lowest ``2k`` bits; the remaining bits are
    covered by ``2k``-bit windows whose top halves are erased, alternating
    between the two passes. A block with ``2k >= n`` gives a single exact
    window.

    Raises:
        InvalidParameterError: If ``2k < n`` and ``2k`` does not divide ``n``.
    """
    if n < 1 or k < 1:
        raise AnalysisError(f"invalid block size k={k} for n={n}")
    if 2 * k >= n:
        return [Window(0, n, 1, True)]
    if n % (2 * k):
        raise InvalidParameterError(f"block size 2k={2 * k} does not divide n={n}")
    windows = [Window(0, 2 * k, 1, True)]
    for i in range(n // k - 2):
        windows.append(Window(k * (i + 1), 2 * k, 2 if i % 2 == 0 else 1, False))
    return windows


def admissible_blocks(n: int) -> List[int]:
    """Block sizes accepted by :func:`window_plan`, up to the single exact window."""
    return [k for k in range(1, (n + 1) // 2 + 1) if 2 * k >= n or n % (2 * k) == 0]


def gamma(j: int, s: int, x: int, size: int) -> complex:
    """Amplitude of estimate ``x`` when a ``size``-bit window reads ``j / 2**s``."""
    w = 2 ** size
    scale = 2 ** s
    u = j - x * scale
    if u % (scale * w) == 0:
        return 1.0 + 0.0j
    if u % scale == 0:
        return 0.0j
    turns_total = (u % (scale * w)) / scale
    theta = 2.0 * np.pi * turns_total
    return complex((1.0 - np.exp(1j * theta)) / (w * (1.0 - np.exp(1j * theta / w))))


def window_leakage(j: int, window: Window) -> float:
    """Probability that the erased estimate bits of ``window`` are wrong."""
    if window.exact:
        return 0.0
    w = 2 ** window.size
    value = (j >> window.s) % w
    half = window.size // 2
    top = value >> half
    kept = sum(abs(gamma(j, window.s, (top << half) | low, window.size)) ** 2 for low in range(2 ** half))
    return float(max(0.0, 1.0 - kept))


def _block(j: int, lo: int, k: int) -> int:
    return (j >> lo) & (2 ** k - 1)


def _tolerance_blocks(n: int, k: int) -> List[int]:
    """Low bit of every block whose value decides bad-set membership."""
    windows = window_plan(n, k)
    if len(windows) == 1:
        return []
    e = windows[0].size
    return [e - k + k * i for i in range((n - e) // k + 1)]


def is_bad(j: int, n: int, k: int) -> bool:
    limit = 2.0 ** (k / 2.0)
    return any(wrap_distance(_block(j, lo, k), 2 ** k) <= limit for lo in _tolerance_blocks(n, k))


@dataclass
class BlockProfile:
    """Per-window decomposition of the estimation error for one ``j``."""

    j: int
    n: int
    k: int
    blocks: List[int]
    fractions: List[float]
    leakages: List[float]
    windows: List[Window] = field(repr=False)
    epsilon: float = 0.0
    pass_epsilons: Dict[int, float] = field(default_factory=dict)
    in_bad_set: bool = False

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["windows"] = [asdict(w) for w in self.windows]
        return out


def epsilon_j(j: int, n: int, k: int) -> BlockProfile:
    """Window leakages and product-form total error for input ``j``."""
    if not 0 <= j < 2 ** n:
        raise AnalysisError(f"j={j} out of range for n={n}")
    windows = window_plan(n, k)
    leakages = [window_leakage(j, w) for w in windows]
    keep = {1: 1.0, 2: 1.0}
    for w, eps in zip(windows, leakages):
        keep[w.pass_index] *= 1.0 - eps
    total = 1.0 - keep[1] * keep[2]
    return BlockProfile(
        j=j,
        n=n,
        k=k,
        blocks=[_block(j, lo, k) for lo in range(0, n - n % k, k)],
        fractions=[(j % (2 ** w.s)) / (2 ** w.s) for w in windows],
        leakages=leakages,
        windows=windows,
        epsilon=float(min(1.0, max(0.0, total))),
        pass_epsilons={p: 1.0 - keep[p] for p in (1, 2)},
        in_bad_set=is_bad(j, n, k),
    )


def _window_projector(vector: np.ndarray, n: int, window: Window, j: int) -> np.ndarray:
    size = window.size
    w = 2 ** size
    lo = window.b_low(n)
    blocks = vector.reshape(2 ** (n - lo - size), w, 2 ** lo)
    r = np.arange(w)
    dft = np.exp(2j * np.pi * np.outer(r, r) / w) / np.sqrt(w)
    estimate = np.einsum("xr,arb->axb", dft.conj(), blocks)
    value = (j >> window.s) % w
    erase = window.erase
    mask = np.ones(w, dtype=bool)
    for t in erase:
        mask &= ((r >> t) & 1) == ((value >> t) & 1)
    estimate[:, ~mask, :] = 0.0
    return np.einsum("rx,axb->arb", dft, estimate).reshape(-1)


def fpe_overlap(j: int, n: int, k: int) -> complex:
    """Exact amplitude of the ideal output in the block estimation of ``j``.

    Each pass acts on the Fourier state as a product of commuting window
    projectors, so the amplitude is ``<phi(j)| P2 P1 |phi(j)>``. It equals
    ``1 - epsilon_j`` when at most one pass has inexact windows.
    """
    if n > settings.MAX_ORACLE_QUBITS + 4:
        raise AnalysisError(f"n={n} too large for a dense overlap computation")
    size = 2 ** n
    phi = np.exp(2j * np.pi * ((j * np.arange(size)) % size) / size) / np.sqrt(size)
    vector = phi.copy()
    for pass_index in (1, 2):
        for window in window_plan(n, k):
            if window.pass_index == pass_index:
                vector = _window_projector(vector, n, window, j)
    return complex(np.vdot(phi, vector))


def fpe_error_prediction(n: int, k: int, exact: bool = True) -> float:
    """Phase-aligned error of block estimation on a uniform entangled input.

    With ``exact`` the mean overlap from :func:`fpe_overlap` is used;
    otherwise the product form ``sqrt((2/N) * sum_j eps_j)``.
    """
    size = 2 ** n
    if exact:
        mean = sum(fpe_overlap(j, n, k) for j in range(size)) / size
        return float(math.sqrt(max(0.0, 2.0 - 2.0 * abs(mean))))
    total = sum(epsilon_j(j, n, k).epsilon for j in range(size))
    return float(math.sqrt(2.0 * total / size))


def fpe_overlap_prediction(n: int, k: int, p: float = 1.0) -> float:
    """Upper estimate ``sqrt((2p/N) * sum_j eps_j)`` for inputs with weights at most ``p/N``."""
    if p < 1:
        raise AnalysisError(f"uniformity parameter p must be >= 1, got {p}")
    return float(math.sqrt(p)) * fpe_error_prediction(n, k, exact=False)


def fpe_mean_error(n: int, k: int) -> float:
    """Root-mean-square of ``||F|j, phi(j)> - |0, phi(j)>||`` over all ``j``, without phase alignment."""
    if 2 * k >= n:
        return 0.0
    size = 2 ** n
    total = sum(2.0 - 2.0 * fpe_overlap(j, n, k).real for j in range(size))
    return float(math.sqrt(max(0.0, total / size)))


def entangled_error_bound(n: int, k_max: int, k: int) -> float:
    """Bound on the entangled-input distance of QFT_uni built with fixed ``k_max`` and ``k``.

    The Frobenius norm obeys the triangle inequality and is unitarily
    invariant, so the truncation and estimation errors add. The bound
    holds for either direction and for every measurement option, since
    measuring or resetting left-over qubits only acts on the environment.
    """
    return qfs_mean_error(n, k_max) + fpe_mean_error(n, k)


@dataclass
class BadSet:
    """Inputs whose block values sit too close to a block boundary."""

    n: int
    k: int
    members: np.ndarray
    bound: float

    @property
    def size(self) -> int:
        return int(self.members.shape[0])

    def __contains__(self, j: int) -> bool:
        index = np.searchsorted(self.members, j)
        return bool(index < self.size and self.members[index] == j)

    def __len__(self) -> int:
        return self.size


def bad_set_bound(n: int, k: int) -> float:
    return n * 2.0 ** n / (k * 2.0 ** (k / 2.0 - 1.0))


def bad_set(n: int, k: int) -> BadSet:
    """Exact enumeration of the bad set and its cardinality bound."""
    if n > 20:
        raise AnalysisError(f"bad-set enumeration is limited to n <= 20, got {n}")
    values = np.arange(2 ** n, dtype=np.int64)
    bad = np.zeros(values.shape[0], dtype=bool)
    modulus = 2 ** k
    limit = 2.0 ** (k / 2.0)
    for lo in _tolerance_blocks(n, k):
        block = (values >> lo) & (modulus - 1)
        wrapped = np.where(block <= modulus / 2, block, (-block) % modulus)
        bad |= wrapped <= limit
    return BadSet(n=n, k=k, members=values[bad], bound=bad_set_bound(n, k))


def fpe_bound(n: int, k: int, p: float = 1.0) -> float:
    return math.sqrt(6.0 * n * p / (k * 2.0 ** (k / 2.0)))


@dataclass(frozen=True)
class BlockChoice:
    theoretical: int
    clamped: int


def choose_block_k(n: int, epsilon: float, p: float = 1.0) -> BlockChoice:
    """Block size ``ceil(2*log2(6*n*p/eps**2))`` and its desk-scale clamp.

    The clamp is the largest ``k' <= theoretical`` with ``2k' | n``; once
    ``2k' >= n`` the estimation is exact and a single window of ``n`` bits is
    used. Odd ``n`` has no admissible block below that threshold and falls
    back to the single exact window.
    """
    _check_epsilon(epsilon)
    if p < 1:
        raise AnalysisError(f"p must be >= 1, got {p}")
    theoretical = max(1, math.ceil(2.0 * math.log2(6.0 * n * p / epsilon ** 2)))
    if 2 * theoretical >= n or n % 2:
        return BlockChoice(theoretical, (n + 1) // 2)
    clamped = max(c for c in range(1, theoretical + 1) if n % (2 * c) == 0)
    return BlockChoice(theoretical, clamped)


@dataclass
class ErrorBudget:
    """Error split between the phase-rotation and estimation stages."""

    n: int
    epsilon: float
    p: float
    eps_qfs: float
    eps_fpe: float
    eps_prime: float
    k_max: int
    k_theoretical: int
    k: int
    qfs_bound: float
    fpe_bound: float

    @property
    def composite(self) -> float:
        return self.eps_qfs + self.eps_fpe

    @property
    def qfs_exact(self) -> bool:
        return self.k_max >= self.n

    @property
    def fpe_exact(self) -> bool:
        return 2 * self.k >= self.n

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["composite"] = self.composite
        return out


def error_budget(
    n: int,
    epsilon: float,
    p: Optional[float] = None,
    k_max: Optional[int] = None,
    k: Optional[int] = None,
) -> ErrorBudget:
    """Split ``epsilon`` evenly and derive the circuit parameters.

    Args:
        n: Register size.
        epsilon: Total error target in (0, 1).
        p: Uniformity parameter of the input set (default from settings).
        k_max: Override for the kept rotation order.
        k: Override for the estimation block size.

    Returns:
        The budget with chosen and theoretical parameters.
    """
    _check_epsilon(epsilon)
    p = settings.DEFAULT_P if p is None else p
    eps_qfs = eps_fpe = epsilon / 2.0
    eps_prime = choose_eps_prime(eps_qfs)
    chosen_k_max = choose_k_max(n, eps_prime) if k_max is None else int(k_max)
    if not 1 <= chosen_k_max <= n:
        raise AnalysisError(f"k_max must lie in [1, {n}], got {chosen_k_max}")
    choice = choose_block_k(n, eps_fpe, p)
    chosen_k = choice.clamped if k is None else int(k)
    if chosen_k < 1:
        raise AnalysisError(f"block size must be >= 1, got {chosen_k}")
    if 2 * chosen_k < n and n % (2 * chosen_k):
        raise InvalidParameterError(f"block size 2k={2 * chosen_k} does not divide n={n}")
    budget = ErrorBudget(
        n=n,
        epsilon=epsilon,
        p=p,
        eps_qfs=eps_qfs,
        eps_fpe=eps_fpe,
        eps_prime=eps_prime,
        k_max=chosen_k_max,
        k_theoretical=choice.theoretical,
        k=chosen_k,
        qfs_bound=qfs_bound(eps_prime),
        fpe_bound=fpe_bound(n, choice.theoretical, p),
    )
    logger.info(
        f"Error budget n={n} eps={epsilon}: k_max={budget.k_max}, "
        f"k={budget.k} (theoretical {budget.k_theoretical})"
    )
    return budget
