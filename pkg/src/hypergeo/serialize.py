"""Deterministic JSON: sorted keys with "schema" first, floats written with 17 significant digits."""

from __future__ import annotations

import json
import math
from fractions import Fraction

SCHEMA = 1


def _encode(x, indent, level) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ", " if indent is None else ","
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite float {x!r} has no JSON form")
        s = format(x, ".17g")
        if "e" not in s and "." not in s:
            s += ".0"
        return s
    if isinstance(x, Fraction):
        return json.dumps(str(x))
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        if not x:
            return "{}"
        keys = sorted(x, key=lambda k: (level > 0 or k != "schema", str(k)))  # schema leads the document
        items = [f"{pad}{json.dumps(str(k))}: {_encode(x[k], indent, level + 1)}" for k in keys]
        return "{" + sep.join(items) + end + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        return "[" + sep.join(pad + _encode(v, indent, level + 1) for v in x) + end + "]"
    if hasattr(x, "item"):  # numpy scalars
        return _encode(x.item(), indent, level)
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(obj, indent=None) -> str:
    return _encode(obj, indent, 0)


def document(payload: dict) -> dict:
    out = {"schema": SCHEMA}
    out.update(payload)
    return out
