"""Canonical JSON output: sorted keys, 9-significant-digit floats, deterministic bytes."""
from __future__ import annotations

import json
import math
from typing import Any


def format_float(v: float) -> str:
    """Render a finite float with 9 significant digits, normalizing -0."""
    if not math.isfinite(v):
        raise ValueError(f"cannot serialize non-finite float {v!r}")
    if v == 0.0:
        return "0"
    return "%.9g" % v


def _emit(value: Any, out: list[str]) -> None:
    if value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif value is None:
        out.append("null")
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=True))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(format_float(value))
    elif isinstance(value, dict):
        out.append("{")
        first = True
        for key in sorted(value):
            if not isinstance(key, str):
                raise TypeError(f"non-string key {key!r}")
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(key, ensure_ascii=True))
            out.append(":")
            _emit(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(value: Any) -> str:
    out: list[str] = []
    _emit(value, out)
    return "".join(out)


def dump_bytes(value: Any) -> bytes:
    return dumps(value).encode("utf-8")
