"""JSON helpers with full-precision floats.

The stdlib encoder uses repr, which keeps round-trip fidelity but varies in
digit count; reports here always print floats with 17 significant digits so
output files are byte-stable across platforms.
"""
from __future__ import annotations

import json
import math
from typing import Any, TextIO

import numpy as np

from .tensor import BinaryTensor, GeneralTensor, make_binary, make_general


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v) or math.isinf(v):
            raise ValueError(f"cannot serialize non-finite float {v}")
        return f"{v:.17g}"
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    if isinstance(value, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {_render(v)}"
                          for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = value.tolist() if isinstance(value, np.ndarray) else value
        return "[" + ", ".join(_render(v) for v in seq) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(value: Any) -> str:
    return _render(value)


def dump(value: Any, out: TextIO) -> None:
    out.write(_render(value))
    out.write("\n")


def tensor_to_json(t: BinaryTensor | GeneralTensor) -> dict:
    if isinstance(t, BinaryTensor):
        dims = [2] * t.order
    else:
        dims = list(t.dims)
    return {"dims": dims, "entries": [float(x) for x in t.entries]}


def tensor_from_json(doc: Any) -> BinaryTensor | GeneralTensor:
    if not isinstance(doc, dict):
        raise ValueError("tensor document must be a JSON object")
    if "dims" not in doc or "entries" not in doc:
        raise ValueError("tensor document needs 'dims' and 'entries'")
    dims = doc["dims"]
    entries = doc["entries"]
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and d >= 1 for d in dims)):
        raise ValueError("'dims' must be a nonempty list of positive integers")
    if not isinstance(entries, list):
        raise ValueError("'entries' must be a list of numbers")
    values = []
    for x in entries:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ValueError("'entries' must be a list of numbers")
        values.append(float(x))
    if all(d == 2 for d in dims):
        return make_binary(len(dims), values)
    return make_general(tuple(dims), values)


def load_tensor(inp: TextIO) -> BinaryTensor | GeneralTensor:
    try:
        doc = json.load(inp)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    return tensor_from_json(doc)
