"""JSON file format for algebras, elements, maps, states and reports.

Complex numbers are ``[re, im]``; matrices are row-major nested lists of those.  An
element is ``{"blocks": [matrix, ...]}``.  A map file looks like::

    {"algebra": {"blocks": [2]},
     "map": {"kind": "superoperator", "matrix": [[[re, im], ...], ...]},
     "state": {"density_blocks": [matrix, ...]}}

where ``map`` may also be ``{"kind": "basis_images", "images": [element, ...]}`` or
``{"kind": "builtin", "name": ..., "theta": ..., "t": ...}``.  Superoperator columns
follow the canonical vec order.  Floats are written with ``repr`` precision, so
write-then-read is exact.
"""
from __future__ import annotations

import json
from typing import Any, Optional

import jsonschema
import numpy as np

from .matalg import AlgElement, BlockAlgebra, State
from .supermap import SuperMap, from_basis_images

_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_matrix = {"type": "array", "items": {"type": "array", "items": _complex}}
_element = {
    "type": "object",
    "required": ["blocks"],
    "properties": {"blocks": {"type": "array", "items": _matrix, "minItems": 1}},
}
_algebra = {
    "type": "object",
    "required": ["blocks"],
    "properties": {"blocks": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}},
}
_state = {
    "type": "object",
    "required": ["density_blocks"],
    "properties": {"density_blocks": {"type": "array", "items": _matrix, "minItems": 1}},
}

MAP_FILE_SCHEMA = {
    "type": "object",
    "required": ["algebra", "map"],
    "properties": {
        "algebra": _algebra,
        "map": {
            "oneOf": [
                {"type": "object", "required": ["kind", "matrix"],
                 "properties": {"kind": {"const": "superoperator"}, "matrix": _matrix}},
                {"type": "object", "required": ["kind", "images"],
                 "properties": {"kind": {"const": "basis_images"}, "images": {"type": "array", "items": _element}}},
                {"type": "object", "required": ["kind", "name"],
                 "properties": {"kind": {"const": "builtin"}, "name": {"type": "string"},
                                "theta": {"type": "number"}, "t": {"type": "number"}}},
            ]
        },
        "state": _state,
    },
}

ELEMENT_FILE_SCHEMA = {
    "type": "object",
    "required": ["element"],
    "properties": {"algebra": _algebra, "element": _element},
}


class SchemaError(ValueError):
    pass


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(c) -> complex:
    return complex(float(c[0]), float(c[1]))


def encode_matrix(m: np.ndarray) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def decode_matrix(rows) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, 0), dtype=complex)
    return np.array([[decode_complex(c) for c in row] for row in rows], dtype=complex)


def encode_element(x: AlgElement) -> dict:
    return {"blocks": [encode_matrix(b) for b in x.blocks]}


def decode_element(obj: dict, algebra: BlockAlgebra) -> AlgElement:
    try:
        return algebra.element([decode_matrix(b) for b in obj["blocks"]])
    except ValueError as exc:
        raise SchemaError(f"element does not fit algebra {list(algebra.block_sizes)}: {exc}") from exc


def encode_state(s: State) -> dict:
    return {"density_blocks": [encode_matrix(b) for b in s.density_blocks]}


def decode_state(obj: dict, algebra: BlockAlgebra) -> State:
    try:
        return State(algebra, tuple(decode_matrix(b) for b in obj["density_blocks"]))
    except ValueError as exc:
        raise SchemaError(f"invalid state: {exc}") from exc


def encode_map_file(f: SuperMap, state: Optional[State] = None, meta: Optional[dict] = None) -> dict:
    doc: dict[str, Any] = {
        "algebra": {"blocks": list(f.algebra.block_sizes)},
        "map": {"kind": "superoperator", "matrix": encode_matrix(f.matrix)},
    }
    if state is not None:
        doc["state"] = encode_state(state)
    if meta:
        doc["meta"] = meta
    return doc


def _validate(doc, schema, what: str):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{what}: {exc.message}") from exc


def decode_map_file(doc: dict) -> tuple[SuperMap, Optional[State], dict]:
    """Returns (map, state or None, meta)."""
    _validate(doc, MAP_FILE_SCHEMA, "map file")
    try:
        algebra = BlockAlgebra(tuple(doc["algebra"]["blocks"]))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    spec = doc["map"]
    meta = dict(doc.get("meta", {}))
    state = None
    kind = spec["kind"]
    if kind == "superoperator":
        m = decode_matrix(spec["matrix"])
        if m.shape != (algebra.dim, algebra.dim):
            raise SchemaError(f"superoperator is {m.shape}, algebra needs {(algebra.dim, algebra.dim)}")
        f = SuperMap(algebra, m)
    elif kind == "basis_images":
        images = [decode_element(e, algebra) for e in spec["images"]]
        try:
            f = from_basis_images(algebra, images)
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
    else:
        from .papermaps import builtin

        try:
            built = builtin(spec["name"], spec.get("theta"), spec.get("t"))
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        if built.algebra != algebra:
            raise SchemaError(f"builtin {spec['name']} lives on blocks {list(built.algebra.block_sizes)}")
        f, state = built.map, built.state
        meta.setdefault("label", built.label)
    if "state" in doc:
        state = decode_state(doc["state"], algebra)
    return f, state, meta


def decode_element_file(doc: dict, algebra: BlockAlgebra) -> AlgElement:
    _validate(doc, ELEMENT_FILE_SCHEMA, "element file")
    if "algebra" in doc and tuple(doc["algebra"]["blocks"]) != algebra.block_sizes:
        raise SchemaError(f"element algebra {doc['algebra']['blocks']} differs from map algebra "
                          f"{list(algebra.block_sizes)}")
    return decode_element(doc["element"], algebra)


def encode_element_file(x: AlgElement) -> dict:
    return {"algebra": {"blocks": list(x.algebra.block_sizes)}, "element": encode_element(x)}


def dumps(doc) -> str:
    """Deterministic JSON text (fixed key order, repr floats, trailing newline)."""
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def write_json(path: str, doc) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(doc))
