"""Builder lookup by kind, shared by the command line and the report sweeps."""

import logging
from typing import Optional

from ..circuit.ir import Circuit
from ..config.settings import settings
from ..errors import BuilderError, QftLineError
from .adder import AdderParams, build_adder
from .fpe import FpeParams, build_fpe
from .longrange import build_longrange_cx
from .qfs import QfsParams, build_qfs
from .qft import QftVariant, build_qft_general, build_qft_uni
from .small_qft import build_small_qft

logger = logging.getLogger(__name__)

KINDS = tuple(settings.BUILDER_KINDS)


def build_circuit(
    kind: str,
    n: int,
    epsilon: Optional[float] = None,
    k: Optional[int] = None,
    k_max: Optional[int] = None,
    exact: bool = False,
    adjoint: bool = False,
    constant: Optional[int] = None,
    seed: Optional[int] = None,
    variant: Optional[QftVariant] = None,
    gadgets: bool = True,
) -> Circuit:
    """Build one circuit of ``kind`` at size ``n``.

    ``n`` is the register size, except for ``small-qft`` (block size) and
    ``longrange-cx`` (control-target distance). The estimation block size
    ``k`` defaults to one for a standalone ``fpe`` on even ``n`` and to the
    single exact window on odd ``n``.

    Raises:
        BuilderError: Unknown kind or a missing required option.
    """
    try:
        if kind == "qfs":
            return build_qfs(QfsParams(n=n, k_max=k_max, exact=exact, adjoint=adjoint))
        if kind == "small-qft":
            return build_small_qft(n, adjoint=adjoint)
        if kind == "fpe":
            return build_fpe(FpeParams(n=n, k=k or (1 if n % 2 == 0 else (n + 1) // 2), conjugate=adjoint))
        if kind == "longrange-cx":
            return build_longrange_cx(0, n)
        if kind == "add":
            return build_adder(AdderParams(n=n, operand=constant, adjoint=adjoint, gadgets=gadgets))
        if kind == "qft-uni":
            return build_qft_uni(n, epsilon, variant, k_max=k_max, k=k)
        if kind == "qft-general":
            circuit, _ = build_qft_general(n, epsilon, seed=seed, variant=variant, k_max=k_max, k=k)
            return circuit
    except QftLineError as e:
        logger.error(f"Error building {kind} n={n}: {e}")
        raise
    raise BuilderError(f"unknown builder kind {kind!r}; expected one of {KINDS}")
