"""Circuit builders for the line-connectivity QFT and its subroutines."""

from .adder import AdderParams, build_adder, build_classical_adder
from .catalog import KINDS, build_circuit
from .fpe import FpeParams, build_fpe
from .layout import LineRouter, adder_registers, canonical_slots, general_registers
from .longrange import LONGRANGE_DEPTH, build_longrange_cx
from .qfs import QfsParams, build_qfs, build_qfs_classical
from .qft import QftVariant, build_qft_general, build_qft_uni
from .small_qft import build_small_qft

__all__ = [
    "AdderParams",
    "build_adder",
    "build_classical_adder",
    "KINDS",
    "build_circuit",
    "FpeParams",
    "build_fpe",
    "LineRouter",
    "adder_registers",
    "canonical_slots",
    "general_registers",
    "LONGRANGE_DEPTH",
    "build_longrange_cx",
    "QfsParams",
    "build_qfs",
    "build_qfs_classical",
    "QftVariant",
    "build_qft_general",
    "build_qft_uni",
    "build_small_qft",
]
