"""JSON documents for pencils (``gevp-pencil/1``) and results (``gevp-result/1``).

Scalars travel as strings so that rationals such as
``393943905477395/312887922561632`` survive any JSON parser. Output is
canonical: fixed key order, two-space indent, trailing newline.
"""
from __future__ import annotations

import json
from typing import Any

from todapencil.pencil import EpsilonVector, PencilSpec, TransformResult
from todapencil.scalar import ParseError, ScalarMode, format_scalar, parse_scalar

PENCIL_FORMAT = "gevp-pencil/1"
RESULT_FORMAT = "gevp-result/1"


class SchemaError(ValueError):
    """Document structure is wrong; ``path`` points at the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class LengthMismatch(SchemaError):
    pass


def _load(data) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("$", f"not UTF-8: {exc}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None


def _field(doc: dict, key: str, kind, required=True):
    if key not in doc:
        if required:
            raise SchemaError(f"$.{key}", "missing field")
        return None
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaError(f"$.{key}", f"expected an integer, got {value!r}")
    if kind is not int and not isinstance(value, kind):
        raise SchemaError(f"$.{key}", f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _scalars(values, path: str, mode: ScalarMode) -> list:
    if not isinstance(values, list):
        raise SchemaError(path, f"expected an array, got {type(values).__name__}")
    out = []
    for i, v in enumerate(values):
        if not isinstance(v, str):
            raise SchemaError(f"{path}[{i}]", f"expected a number-string, got {v!r}")
        try:
            out.append(parse_scalar(v, mode))
        except ParseError as exc:
            raise ParseError(f"{path}[{i}]: {exc}") from None
    return out


def _epsilon(doc: dict, N: int) -> EpsilonVector:
    bits = _field(doc, "epsilon", list, required=False)
    if bits is None:
        return EpsilonVector.ones(N)
    for i, b in enumerate(bits):
        if b not in (0, 1) or isinstance(b, bool):
            raise SchemaError(f"$.epsilon[{i}]", f"expected 0 or 1, got {b!r}")
    if len(bits) != N - 1:
        raise LengthMismatch("$.epsilon", f"length {len(bits)}, expected N-1 = {N - 1}")
    return EpsilonVector(tuple(bits))


def _matrix_rows(doc: dict, key: str, N: int, M: int, mode: ScalarMode) -> list[list]:
    rows = _field(doc, key, list)
    # M = 1 documents may give a flat array
    if rows and all(isinstance(v, str) for v in rows):
        rows = [rows]
    if len(rows) != M:
        raise LengthMismatch(f"$.{key}", f"{len(rows)} rows, expected M = {M}")
    out = []
    for k, row in enumerate(rows):
        parsed = _scalars(row, f"$.{key}[{k}]", mode)
        if len(parsed) != N:
            raise LengthMismatch(f"$.{key}[{k}]", f"length {len(parsed)}, expected N = {N}")
        out.append(parsed)
    return out


def _header(doc, expected_format: str) -> tuple[int, int]:
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a JSON object")
    fmt = _field(doc, "format", str)
    if fmt != expected_format:
        raise SchemaError("$.format", f"expected {expected_format!r}, got {fmt!r}")
    N = _field(doc, "N", int)
    M = _field(doc, "M", int)
    if N < 1:
        raise SchemaError("$.N", "must be positive")
    if M < 1:
        raise SchemaError("$.M", "must be positive")
    return N, M


def document_format(data) -> str:
    doc = _load(data)
    if not isinstance(doc, dict) or not isinstance(doc.get("format"), str):
        raise SchemaError("$.format", "missing or not a string")
    return doc["format"]


def read_pencil(data, mode: ScalarMode = ScalarMode.EXACT) -> PencilSpec:
    """Parse and validate a ``gevp-pencil/1`` document."""
    doc = _load(data)
    N, M = _header(doc, PENCIL_FORMAT)
    eps = _epsilon(doc, N)
    q = _matrix_rows(doc, "q", N, M, mode)
    e = _scalars(_field(doc, "e", list), "$.e", mode)
    if len(e) != N - 1:
        raise LengthMismatch("$.e", f"length {len(e)}, expected N-1 = {N - 1}")
    return PencilSpec(tuple(map(tuple, q)), tuple(e), eps)


def _dump(doc: dict) -> bytes:
    return (json.dumps(doc, indent=2, ensure_ascii=True) + "\n").encode("utf-8")


def write_pencil(spec: PencilSpec) -> bytes:
    return _dump(
        {
            "format": PENCIL_FORMAT,
            "N": spec.N,
            "M": spec.M,
            "epsilon": list(spec.epsilon.bits),
            "q": [[format_scalar(x) for x in row] for row in spec.q],
            "e": [format_scalar(x) for x in spec.e],
        }
    )


def write_result(result: TransformResult, charpoly=None, verified: bool | None = None) -> bytes:
    """Canonical ``gevp-result/1`` bytes; ``charpoly`` is ascending coefficients."""
    doc = {
        "format": RESULT_FORMAT,
        "kind": result.kind,
        "N": result.N,
        "M": result.M,
        "epsilon": list(result.epsilon.bits),
        "q_hat": [[format_scalar(x) for x in row] for row in result.q_hat],
        "e_hat": [format_scalar(x) for x in result.e_hat],
    }
    if charpoly is not None:
        coeffs = list(getattr(charpoly, "coeffs", charpoly))
        doc["charpoly"] = [format_scalar(c) for c in coeffs]
    if verified is not None:
        doc["verified"] = bool(verified)
    return _dump(doc)


def read_result(data, mode: ScalarMode = ScalarMode.EXACT) -> tuple[TransformResult, dict]:
    """Parse a ``gevp-result/1`` document; the second item holds optional fields."""
    doc = _load(data)
    N, M = _header(doc, RESULT_FORMAT)
    kind = _field(doc, "kind", str)
    if kind not in ("tridiagonal", "hessenberg"):
        raise SchemaError("$.kind", f"unknown kind {kind!r}")
    if (kind == "tridiagonal") != (M == 1):
        raise SchemaError("$.kind", f"kind {kind!r} inconsistent with M = {M}")
    eps = _epsilon(doc, N)
    q_hat = _matrix_rows(doc, "q_hat", N, M, mode)
    e_hat = _scalars(_field(doc, "e_hat", list), "$.e_hat", mode)
    if len(e_hat) != N - 1:
        raise LengthMismatch("$.e_hat", f"length {len(e_hat)}, expected N-1 = {N - 1}")
    extras = {}
    if "charpoly" in doc:
        cp = _scalars(doc["charpoly"], "$.charpoly", mode)
        if len(cp) != N + 1:
            raise LengthMismatch("$.charpoly", f"length {len(cp)}, expected N+1 = {N + 1}")
        extras["charpoly"] = cp
    if "verified" in doc:
        extras["verified"] = _field(doc, "verified", bool)
    return TransformResult(q_hat, e_hat, eps), extras
