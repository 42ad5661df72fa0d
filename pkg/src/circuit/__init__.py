"""Circuit intermediate representation, scheduling and serialization."""

from .ir import (
    REGISTER_NAMES,
    Circuit,
    ClassicalExpr,
    GateKind,
    Operation,
    RegisterMap,
    append,
)
from .schedule import DepthReport, Violation, audit_connectivity, depth_report, layerize
from .serialization import deserialize, load_circuit, save_circuit, serialize

__all__ = [
    "REGISTER_NAMES",
    "Circuit",
    "ClassicalExpr",
    "GateKind",
    "Operation",
    "RegisterMap",
    "append",
    "DepthReport",
    "Violation",
    "audit_connectivity",
    "depth_report",
    "layerize",
    "serialize",
    "deserialize",
    "save_circuit",
    "load_circuit",
]
