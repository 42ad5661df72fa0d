"""Resource sweeps, CSV reports and logarithmic scaling fits."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..builders.catalog import build_circuit
from ..circuit.ir import Circuit, GateKind, RegisterMap
from ..circuit.schedule import depth_report
from ..config.settings import settings
from ..errors import AnalysisError, QftLineError
from .bounds import error_budget, fpe_bound, qfs_error
from .oracles import sample_uniform_state
from .verification import transform_error

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit ``depth = slope * log2(x) + intercept``."""

    slope: float
    intercept: float
    relative_residuals: List[float]

    @property
    def max_relative_residual(self) -> float:
        return max((abs(r) for r in self.relative_residuals), default=0.0)

    def predict(self, x: float) -> float:
        return self.slope * math.log2(x) + self.intercept


def fit_log_scaling(xs: Sequence[float], depths: Sequence[float]) -> ScalingFit:
    """Fit depths against ``log2`` of the sweep variable.

    Args:
        xs: Positive sweep values (``n`` or ``n / eps**2``).
        depths: Measured depths, one per value.

    Returns:
        Fit with residuals relative to the predicted depth.
    """
    if len(xs) != len(depths) or len(xs) < 2:
        raise AnalysisError("a scaling fit needs at least two (x, depth) pairs")
    logs = np.log2(np.asarray(xs, dtype=float))
    values = np.asarray(depths, dtype=float)
    slope, intercept = np.polyfit(logs, values, 1)
    predicted = slope * logs + intercept
    residuals = (values - predicted) / np.where(predicted == 0, 1.0, predicted)
    return ScalingFit(float(slope), float(intercept), [float(r) for r in residuals])


def _bound(kind: str, circuit: Circuit) -> float:
    meta = circuit.metadata
    if kind in ("qft-uni", "qft-general"):
        return float(meta["epsilon"])
    if kind == "qfs":
        return qfs_error(meta["n"], meta["k_max"])
    if kind == "fpe" and not meta["exact"]:
        return fpe_bound(meta["n"], meta["k"])
    return float("nan")


def _measured_error(kind: str, circuit: Circuit, n: int, seed: int) -> float:
    if kind not in ("qft-uni", "qft-general") or circuit.width + n > settings.MAX_DENSE_QUBITS - 4:
        return float("nan")
    registers = RegisterMap({"A": circuit.metadata["input_register"]})
    return transform_error(circuit, sample_uniform_state(n, registers, seed, width=circuit.width), seed)


def report_row(kind: str, n: int, epsilon: Optional[float], circuit: Circuit, measured_error: float = float("nan")) -> Dict:
    """One CSV row for ``circuit``."""
    depth = depth_report(circuit)
    meta = circuit.metadata
    k = meta.get("budget", {}).get("k", meta.get("k"))
    return {
        "builder": kind,
        "n": n,
        "epsilon": float("nan") if epsilon is None else epsilon,
        "k": k,
        "width_qubits": circuit.width,
        "clbits": circuit.n_clbits,
        "depth": depth.depth,
        "size": depth.size,
        "measurements": circuit.count(GateKind.M),
        "measured_error": measured_error,
        "bound": _bound(kind, circuit),
    }


def sweep(
    kind: str,
    n_values: Sequence[int],
    epsilon: Optional[float] = None,
    measure: bool = False,
    seed: int = 0,
    quiet: bool = False,
    **options,
) -> pd.DataFrame:
    """Build ``kind`` at every ``n`` and tabulate its resources.

    Args:
        kind: Builder kind.
        n_values: Sizes to sweep.
        epsilon: Error target for the QFT kinds.
        measure: Simulate small instances against the DFT oracle.
        seed: Seed for sampled inputs and random offsets.
        quiet: Hide the progress bar.
        **options: Further builder options (``k``, ``k_max``, ...).

    Returns:
        DataFrame with the report columns, sorted by ``n``.
    """
    rows = []
    for n in tqdm(sorted(n_values), desc=f"{kind} sweep", disable=quiet):
        try:
            circuit = build_circuit(kind, n, epsilon=epsilon, seed=seed, **options)
        except QftLineError as e:
            logger.error(f"Error building {kind} at n={n}: {e}")
            raise
        measured = _measured_error(kind, circuit, n, seed) if measure else float("nan")
        rows.append(report_row(kind, n, epsilon, circuit, measured))
    return pd.DataFrame(rows, columns=settings.REPORT_COLUMNS)


def resource_table(
    n_values: Sequence[int], epsilon: float, quiet: bool = False, seed: int = 0
) -> pd.DataFrame:
    """Depth and width of every subroutine at each ``n``, in one table."""
    frames = []
    for kind in ("qfs", "fpe", "add", "qft-uni", "qft-general"):
        if kind in ("qfs", "fpe"):
            # standalone stages use the parameters the error budget picks for the full transform
            budgets = {n: error_budget(n, epsilon) for n in n_values}
            rows = [
                report_row(
                    kind,
                    n,
                    epsilon,
                    build_circuit(kind, n, k_max=budgets[n].k_max, k=budgets[n].k),
                )
                for n in tqdm(sorted(n_values), desc=f"{kind} sweep", disable=quiet)
            ]
            frames.append(pd.DataFrame(rows, columns=settings.REPORT_COLUMNS))
        else:
            frames.append(sweep(kind, n_values, epsilon, seed=seed, quiet=quiet))
    table = pd.concat(frames, ignore_index=True)
    return table.sort_values(["builder", "n"], kind="stable").reset_index(drop=True)


def write_report(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write ``table`` as UTF-8 CSV (or JSON records for a ``.json`` path)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".json":
        table.to_json(path, orient="records", indent=2)
    else:
        table.to_csv(path, index=False, encoding="utf-8")
    logger.info(f"Report with {len(table)} rows written to {path}")
    return path
