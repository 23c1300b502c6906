"""Deterministic JSON emission and the matrix wire format.

Floats are rendered with 17 significant digits so every double round-trips
exactly and repeated runs produce byte-identical reports.  Matrices travel as
{"rows": R, "cols": C, "data": [[re, im], ...]} with the entries row-major.
"""

from __future__ import annotations

import json
import math

import numpy as np

__all__ = [
    "dumps",
    "complex_pair",
    "matrix_to_json",
    "matrix_from_json",
    "tensor3_to_json",
]


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def _encode(obj, indent: int, level: int, out: list[str]):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(pad_in + json.dumps(str(key)) + ": ")
            _encode(value, indent, level + 1, out)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        if _is_leaf_array(items):
            out.append("[" + ", ".join(_leaf_token(v) for v in items) + "]")
            return
        out.append("[\n")
        for i, value in enumerate(items):
            out.append(pad_in)
            _encode(value, indent, level + 1, out)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(pad + "]")
    else:
        out.append(_leaf_token(obj))


def _is_scalar(v) -> bool:
    return isinstance(v, (bool, int, float, str, np.integer, np.floating)) or v is None


def _is_leaf_array(items) -> bool:
    if all(_is_scalar(v) for v in items):
        return True
    # [re, im] pairs print inline as well
    return all(
        isinstance(v, (list, tuple)) and len(v) == 2 and all(_is_scalar(u) for u in v)
        for v in items
    )


def _leaf_token(v) -> str:
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _format_float(float(v))
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_leaf_token(u) for u in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Serialize to a deterministic JSON string (keys keep insertion order)."""
    out: list[str] = []
    _encode(obj, indent, 0, out)
    return "".join(out) + "\n"


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    flat = m.reshape(-1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(d: dict) -> np.ndarray:
    rows, cols = int(d["rows"]), int(d["cols"])
    data = np.array([complex(re, im) for re, im in d["data"]], dtype=complex)
    if data.size != rows * cols:
        raise ValueError(f"matrix data length {data.size} != {rows}x{cols}")
    return data.reshape(rows, cols)


def tensor3_to_json(t: np.ndarray) -> list:
    t = np.asarray(t, dtype=complex)
    return [
        [[[float(z.real), float(z.imag)] for z in row] for row in plane]
        for plane in t
    ]
