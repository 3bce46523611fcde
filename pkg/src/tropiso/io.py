"""JSON documents for kernels and vectors.

A kernel document has ``x_points``, ``y_points`` and a row-major
``entries`` array; a vector document has ``points`` and ``values``.  Cells
are JSON numbers or strings such as ``"1/3"``, ``"0.25"`` and ``"-inf"``.
Numbers are read exactly, never through binary floats.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .core import POS_INF, TropVector, ext, is_finite
from .kernel import Kernel


class FormatError(ValueError):
    """Malformed input; ``line`` and ``column`` are set for syntax errors."""

    def __init__(self, message, line: Optional[int] = None, column: Optional[int] = None, source=None):
        where = ""
        if source is not None:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:{column}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.column = column


class _Exact(str):
    """Number literal kept as text until it is turned into an extended real."""


def _reject_constant(name):
    raise ValueError(name)


def _load(text: str, source=None):
    try:
        return json.loads(text, parse_int=_Exact, parse_float=_Exact, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno, source) from None
    except ValueError as exc:
        raise FormatError(f"unsupported literal {exc}", source=source) from None


def _cell(value, path: str, source=None):
    if isinstance(value, bool) or not isinstance(value, str):
        raise FormatError(f"{path}: expected a number or string cell, got {value!r}", source=source)
    try:
        return ext(str(value))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}", source=source) from None


def _labels(doc, key: str, source=None) -> tuple:
    labels = doc.get(key)
    if not isinstance(labels, list) or not labels:
        raise FormatError(f"{key} must be a nonempty list", source=source)
    return tuple(str(p) for p in labels)


def _require_object(doc, kind: str, source=None) -> dict:
    if not isinstance(doc, dict):
        raise FormatError(f"a {kind} document must be a JSON object", source=source)
    return doc


def kernel_from_document(doc, source=None) -> Kernel:
    doc = _require_object(doc, "kernel", source)
    xs, ys = _labels(doc, "x_points", source), _labels(doc, "y_points", source)
    rows = doc.get("entries")
    if not isinstance(rows, list) or len(rows) != len(xs):
        raise FormatError(f"entries must be a list of {len(xs)} rows", source=source)
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(ys):
            raise FormatError(f"entries[{i}] must be a list of {len(ys)} cells", source=source)
        out = []
        for j, v in enumerate(row):
            a = _cell(v, f"entries[{i}][{j}]", source)
            if a == POS_INF:
                raise FormatError(f"entries[{i}][{j}]: +inf is not allowed in a kernel", source=source)
            out.append(a)
        parsed.append(tuple(out))
    try:
        return Kernel(xs, ys, tuple(parsed))
    except ValueError as exc:
        raise FormatError(str(exc), source=source) from None


def vector_from_document(doc, source=None) -> TropVector:
    doc = _require_object(doc, "vector", source)
    pts = _labels(doc, "points", source)
    vals = doc.get("values")
    if not isinstance(vals, list) or len(vals) != len(pts):
        raise FormatError(f"values must be a list of {len(pts)} cells", source=source)
    try:
        return TropVector(pts, tuple(_cell(v, f"values[{k}]", source) for k, v in enumerate(vals)))
    except ValueError as exc:
        raise FormatError(str(exc), source=source) from None


def parse_kernel(text: str, source=None) -> Kernel:
    return kernel_from_document(_load(text, source), source)


def parse_vector(text: str, source=None) -> TropVector:
    return vector_from_document(_load(text, source), source)


def read_kernel(path) -> Kernel:
    return parse_kernel(Path(path).read_text(), source=str(path))


def read_vector(path) -> TropVector:
    return parse_vector(Path(path).read_text(), source=str(path))


def cell_to_json(a):
    """Integers become JSON ints; everything else a string literal or float."""
    if not is_finite(a):
        return "-inf" if a < 0 else "+inf"
    if isinstance(a, Fraction):
        return a.numerator if a.denominator == 1 else str(a)
    return a


def kernel_to_document(B: Kernel, meta: Optional[dict] = None) -> dict:
    doc = {
        "x_points": list(B.x_points),
        "y_points": list(B.y_points),
        "entries": [[cell_to_json(v) for v in row] for row in B.entries],
    }
    if meta:
        doc["meta"] = meta
    return doc


def vector_to_document(f: TropVector) -> dict:
    return {"points": list(f.points), "values": [cell_to_json(v) for v in f.values]}


def dump_kernel(B: Kernel, meta: Optional[dict] = None) -> str:
    return json.dumps(kernel_to_document(B, meta), indent=2) + "\n"


def dump_vector(f: TropVector) -> str:
    return json.dumps(vector_to_document(f), indent=2) + "\n"


def write_kernel(B: Kernel, path, meta: Optional[dict] = None) -> None:
    Path(path).write_text(dump_kernel(B, meta))


def write_vector(f: TropVector, path) -> None:
    Path(path).write_text(dump_vector(f))
