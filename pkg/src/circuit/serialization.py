"""Circuit JSON documents (format version 1)."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import numpy as np

from ..errors import CircuitError, SerializationError
from .ir import REGISTER_NAMES, Circuit, ClassicalExpr, GateKind, Operation, RegisterMap

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def _plain(value: Any) -> Any:
    """Convert numpy scalars and tuples in metadata to JSON types."""
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def op_to_dict(op: Operation) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"g": op.gate.value, "q": list(op.qubits)}
    if op.gate.has_k:
        doc["k"] = op.k
    if op.gate.has_sign:
        doc["sign"] = op.sign
    if op.gate is GateKind.M:
        doc["c"] = list(op.clbits)
    if op.cond is not None:
        doc["cond"] = {"parity": list(op.cond.parity), "neg": op.cond.neg}
    return doc


def _integer_field(doc: Dict[str, Any], key: str, default: Any = None) -> Any:
    value = doc.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not (isinstance(value, int) or (isinstance(value, float) and value.is_integer())):
        raise SerializationError(f"field {key!r} must be an integer, got {value!r}")
    return int(value)


def op_from_dict(doc: Dict[str, Any]) -> Operation:
    try:
        gate = GateKind(doc["g"])
    except ValueError:
        raise SerializationError(f"unknown gate kind {doc.get('g')!r}")
    except (KeyError, TypeError):
        raise SerializationError(f"operation without a gate kind: {doc!r}")
    cond = None
    if "cond" in doc:
        cond_doc = doc["cond"]
        cond = ClassicalExpr(tuple(cond_doc.get("parity", [])), bool(cond_doc.get("neg", False)))
    return Operation(
        gate,
        tuple(doc.get("q", [])),
        k=_integer_field(doc, "k"),
        sign=_integer_field(doc, "sign", 1),
        clbits=tuple(doc.get("c", [])),
        cond=cond,
    )


def to_document(circuit: Circuit) -> Dict[str, Any]:
    metadata = _plain(circuit.metadata)
    if circuit.preset_clbits:
        metadata["preset_clbits"] = {str(b): v for b, v in sorted(circuit.preset_clbits.items())}
    return {
        "version": FORMAT_VERSION,
        "width": circuit.width,
        "n_clbits": circuit.n_clbits,
        "registers": circuit.registers.to_dict(),
        "metadata": metadata,
        "ops": [op_to_dict(op) for op in circuit.ops],
    }


def from_document(doc: Dict[str, Any]) -> Circuit:
    if not isinstance(doc, dict):
        raise SerializationError("circuit document must be a JSON object")
    if doc.get("version") != FORMAT_VERSION:
        raise SerializationError(
            f"unsupported circuit format version {doc.get('version')!r}, expected {FORMAT_VERSION}"
        )
    try:
        registers = RegisterMap(
            {name: doc.get("registers", {}).get(name, []) for name in REGISTER_NAMES}
        )
        metadata = dict(doc.get("metadata", {}))
        preset = {int(b): int(v) for b, v in metadata.pop("preset_clbits", {}).items()}
        circuit = Circuit(
            width=int(doc["width"]),
            n_clbits=int(doc["n_clbits"]),
            registers=registers,
            metadata=metadata,
            preset_clbits=preset,
        )
        for op_doc in doc["ops"]:
            circuit.append(op_from_dict(op_doc))
    except SerializationError:
        raise
    except (CircuitError, KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"malformed circuit document: {e}") from e
    return circuit


def serialize(circuit: Circuit) -> bytes:
    """Encode ``circuit`` as UTF-8 JSON."""
    return json.dumps(to_document(circuit), sort_keys=True).encode("utf-8")


def deserialize(data: Union[bytes, str]) -> Circuit:
    """Decode a circuit produced by :func:`serialize`."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SerializationError(f"circuit document is not valid JSON: {e}") from e
    return from_document(doc)


def save_circuit(circuit: Circuit, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(serialize(circuit))
    logger.info(f"Circuit saved to {path}")
    return path


def load_circuit(path: Union[str, Path]) -> Circuit:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        logger.error(f"Error reading circuit file {path}: {e}")
        raise SerializationError(f"cannot read circuit file {path}: {e}") from e
    return deserialize(data)
