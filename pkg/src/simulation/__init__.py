"""Dense statevector simulation with sampled and deferred measurements."""

from .reversible import evaluate, is_reversible, pack, unpack
from .statevector import (
    MeasRecord,
    SimMode,
    SimOptions,
    StateVector,
    basis_indices,
    run,
    run_shots,
    unitary,
)
from .states import (
    StateDistance,
    as_matrix,
    embed,
    fourier_state,
    fourier_vector,
    from_matrix,
    prepare_basis,
    reduced_density,
    register_distribution,
    register_value,
    restrict,
    shot_to_dict,
    state_distance,
)

__all__ = [
    "evaluate",
    "is_reversible",
    "pack",
    "unpack",
    "MeasRecord",
    "SimMode",
    "SimOptions",
    "StateVector",
    "basis_indices",
    "run",
    "run_shots",
    "unitary",
    "StateDistance",
    "as_matrix",
    "embed",
    "fourier_state",
    "fourier_vector",
    "from_matrix",
    "prepare_basis",
    "reduced_density",
    "register_distribution",
    "register_value",
    "restrict",
    "shot_to_dict",
    "state_distance",
]
