"""Closed-form error analysis, reference oracles and verification."""

from .bounds import (
    BadSet,
    BlockChoice,
    BlockProfile,
    ErrorBudget,
    Window,
    admissible_blocks,
    bad_set,
    choose_block_k,
    choose_eps_prime,
    choose_k_max,
    entangled_error_bound,
    epsilon_j,
    error_budget,
    fpe_bound,
    fpe_error_prediction,
    fpe_mean_error,
    fpe_overlap_prediction,
    fpe_overlap,
    qfs_bound,
    qfs_error,
    qfs_mean_error,
    window_plan,
    wrap_distance,
    xi,
)
from .oracles import (
    SpectralDistance,
    dft_oracle,
    distance_spectral,
    ideal_transform,
    isometry,
    purified_distance,
    sample_uniform_state,
)

__all__ = [
    "BadSet",
    "BlockChoice",
    "BlockProfile",
    "ErrorBudget",
    "Window",
    "admissible_blocks",
    "bad_set",
    "choose_block_k",
    "choose_eps_prime",
    "choose_k_max",
    "entangled_error_bound",
    "epsilon_j",
    "error_budget",
    "fpe_bound",
    "fpe_error_prediction",
    "fpe_mean_error",
    "fpe_overlap_prediction",
    "fpe_overlap",
    "qfs_bound",
    "qfs_error",
    "qfs_mean_error",
    "window_plan",
    "wrap_distance",
    "xi",
    "SpectralDistance",
    "dft_oracle",
    "distance_spectral",
    "isometry",
    "purified_distance",
    "ideal_transform",
    "sample_uniform_state",
]
