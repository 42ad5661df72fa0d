"""Configuration settings for qftline."""

import os
from pathlib import Path
from typing import Dict, List, Optional
from dotenv import load_dotenv

from ..errors import ConfigurationError

# Load environment variables from .env file
load_dotenv()


class Settings:
    """Application settings loaded from environment variables."""

    # Reproducibility
    QFTLINE_SEED: Optional[str] = os.getenv("QFTLINE_SEED")

    # Logging
    LOG_LEVEL: str = os.getenv("QFTLINE_LOG_LEVEL", "INFO")

    # Numerical tolerances
    NORM_TOL: float = float(os.getenv("QFTLINE_NORM_TOL", "1e-10"))
    STATE_TOL: float = float(os.getenv("QFTLINE_STATE_TOL", "1e-9"))

    # Dense representation limits
    MAX_DENSE_QUBITS: int = int(os.getenv("QFTLINE_MAX_DENSE_QUBITS", "22"))
    MAX_ORACLE_QUBITS: int = int(os.getenv("QFTLINE_MAX_ORACLE_QUBITS", "12"))
    MAX_UNITARY_QUBITS: int = int(os.getenv("QFTLINE_MAX_UNITARY_QUBITS", "11"))

    # Error analysis
    DEFAULT_P: float = float(os.getenv("QFTLINE_DEFAULT_P", "1"))

    # Sampling
    SHOTS: int = int(os.getenv("QFTLINE_SHOTS", "4096"))

    # Output
    OUTPUT_DIR: str = os.getenv("QFTLINE_OUTPUT_DIR", "output")

    # Report layout
    REPORT_COLUMNS: List[str] = [
        "builder",
        "n",
        "epsilon",
        "k",
        "width_qubits",
        "clbits",
        "depth",
        "size",
        "measurements",
        "measured_error",
        "bound",
    ]
    BUILDER_KINDS: List[str] = [
        "qfs",
        "small-qft",
        "fpe",
        "longrange-cx",
        "add",
        "qft-uni",
        "qft-general",
    ]

    @property
    def circuits_dir(self) -> Path:
        """Directory for serialized circuits."""
        return Path(self.OUTPUT_DIR) / "circuits"

    @property
    def reports_dir(self) -> Path:
        """Directory for CSV/JSON reports."""
        return Path(self.OUTPUT_DIR) / "reports"

    def resolve_seed(self, seed: Optional[int] = None, required: bool = True) -> Optional[int]:
        """Return the explicit seed, else the QFTLINE_SEED fallback.

        Args:
            seed: Seed given on the command line or by the caller.
            required: Raise when neither source provides a seed.

        Returns:
            The seed to use, or None when not required and unset.
        """
        if seed is not None:
            return int(seed)
        env_seed = os.getenv("QFTLINE_SEED", self.QFTLINE_SEED)
        if env_seed not in (None, ""):
            try:
                return int(env_seed)
            except ValueError as e:
                raise ConfigurationError(f"QFTLINE_SEED is not an integer: {env_seed!r}") from e
        if required:
            raise ConfigurationError("a seed is required: pass --seed or set QFTLINE_SEED")
        return None

    def get_tolerances(self) -> Dict[str, float]:
        """Get the numerical tolerances used by simulation and verification."""
        return {
            "norm": self.NORM_TOL,
            "state": self.STATE_TOL,
        }


# Global settings instance
settings = Settings()
