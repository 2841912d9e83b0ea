"""Canonical JSON encoding and the object-file envelope.

Canonical form: sorted keys, two-space indent, floats printed with 17
significant digits, complex numbers as ``[re, im]``.  Emitting a parsed
canonical file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .bundle import FactorizedBundle, make_bundle, make_unitary_set
from .exactmat import SnfCertificate
from .lagrangian import LagrangianBrane, make_brane
from .torus import DEFAULT_TOL, TorusData, make_torus

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed or schema-violating input file."""


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot encode non-finite float {x!r}")
    s = "%.17g" % x
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        inner = (",\n" + pad).join(_emit(v, indent, level + 1) for v in obj)
        return "[\n" + pad + inner + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(k) + ": " + _emit(obj[k], indent, level + 1) for k in sorted(obj)]
        return "{\n" + pad + (",\n" + pad).join(items) + "\n" + end + "}"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def canonical_dumps(obj: Any, indent: int = 2) -> str:
    return _emit(_plain(obj), indent, 0) + "\n"


def compact_key(obj: Any) -> str:
    """Single-line canonical encoding, used as a deterministic sort key."""
    return _emit(_plain(obj), 0, 0).replace("\n", "")


# ---------------------------------------------------------------- schemas

_num = {"type": "number"}
_vec = {"type": "array", "items": _num, "minItems": 1}
_imat = {"type": "array", "minItems": 1, "items": {"type": "array", "items": {"type": "integer"}}}
_cnum = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_cmat = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _cnum}}
_rational = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}

TORUS_SCHEMA = {
    "type": "object",
    "required": ["T"],
    "properties": {"T": _cmat, "tol": {"type": "number", "exclusiveMinimum": 0}},
}
BRANE_SCHEMA = {
    "type": "object",
    "required": ["r", "A", "p", "q"],
    "properties": {"r": {"type": "integer", "minimum": 1}, "A": _imat, "p": _vec, "q": _vec},
}
BUNDLE_SCHEMA = {
    "type": "object",
    "required": ["r", "A", "p", "q"],
    "properties": {
        **BRANE_SCHEMA["properties"],
        "U": {
            "type": "object",
            "required": ["V", "U"],
            "properties": {"V": {"type": "array", "items": _cmat}, "U": {"type": "array", "items": _cmat}},
        },
    },
}
FAMILY_SCHEMA = {
    "type": "object",
    "required": ["torus", "pairs", "grid_step_pi"],
    "properties": {
        "torus": TORUS_SCHEMA,
        "pairs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["r", "A"],
                "properties": {"r": {"type": "integer", "minimum": 1}, "A": _imat},
            },
        },
        "grid_step_pi": _rational,
        "twists_pi": {"type": "array", "items": _rational},
        "twist_direction": {"type": "integer", "minimum": 0},
    },
}
SCHEMAS = {"torus": TORUS_SCHEMA, "bundle": BUNDLE_SCHEMA, "brane": BRANE_SCHEMA, "family": FAMILY_SCHEMA}

ENVELOPE_SCHEMA = {
    "type": "object",
    "required": ["kind", "payload", "schema_version"],
    "properties": {
        "kind": {"enum": sorted(SCHEMAS)},
        "schema_version": {"const": SCHEMA_VERSION},
        "payload": {"type": "object"},
    },
}


def validate(kind: str, payload: Any) -> None:
    try:
        jsonschema.validate(payload, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        raise InputError(f"invalid {kind} payload: {exc.message}") from exc


def envelope(kind: str, payload: dict) -> dict:
    return {"kind": kind, "payload": _plain(payload), "schema_version": SCHEMA_VERSION}


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def read_object(path) -> tuple[str, dict]:
    doc = read_json(path)
    try:
        jsonschema.validate(doc, ENVELOPE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"{path}: not an object file: {exc.message}") from exc
    validate(doc["kind"], doc["payload"])
    return doc["kind"], doc["payload"]


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------- conversions

def cmatrix_to_json(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def cmatrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def torus_to_json(torus: TorusData) -> dict:
    return {"T": cmatrix_to_json(torus.T), "tol": torus.tol}


def torus_from_json(payload: dict, tol: float | None = None) -> TorusData:
    validate("torus", payload)
    return make_torus(cmatrix_from_json(payload["T"]), tol if tol is not None else payload.get("tol", DEFAULT_TOL))


def brane_to_json(brane: LagrangianBrane) -> dict:
    return {"r": brane.r, "A": [list(row) for row in brane.A], "p": brane.p.tolist(), "q": brane.q.tolist()}


def brane_from_json(payload: dict) -> LagrangianBrane:
    validate("brane", payload)
    return make_brane(payload["r"], payload["A"], payload["p"], payload["q"])


def bundle_to_json(bundle: FactorizedBundle) -> dict:
    return {
        "r": bundle.r,
        "A": [list(row) for row in bundle.A],
        "p": bundle.p.tolist(),
        "q": bundle.q.tolist(),
        "U": {"V": [cmatrix_to_json(m) for m in bundle.uset.V], "U": [cmatrix_to_json(m) for m in bundle.uset.U]},
    }


def bundle_from_json(payload: dict, tol: float = DEFAULT_TOL) -> FactorizedBundle:
    """Missing ``U`` means the standard set."""
    validate("bundle", payload)
    uset = None
    if "U" in payload:
        uset = make_unitary_set(
            [cmatrix_from_json(m) for m in payload["U"]["V"]],
            [cmatrix_from_json(m) for m in payload["U"]["U"]],
            tol,
        )
    return make_bundle(payload["r"], payload["A"], payload["p"], payload["q"], uset, tol)


def certificate_to_json(cert: SnfCertificate) -> dict:
    return {
        "left": [list(r) for r in cert.left],
        "diag": list(cert.diag),
        "right": [list(r) for r in cert.right],
        "s": cert.s,
    }


def parse_rational(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value.replace(" ", ""))
    return Fraction(value).limit_denominator(10**6)
