"""Canonical JSON serialization and plain-text tables.

Rationals become ``"p/q"`` strings, complex numbers ``{"re", "im"}``
objects, and floats are rounded to 12 significant digits so that equal runs
serialize to identical bytes.
"""
from __future__ import annotations

import json
import math

import numpy as np

from . import arith

SCHEMA = 1
SIG_DIGITS = 12
_MPQ = type(arith.mpq(0))
_MPZ = type(arith.gmpy2.mpz(0))


def _float(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    out = float(f"{x:.{SIG_DIGITS}g}")
    return 0.0 if out == 0 else out


def to_jsonable(obj):
    if isinstance(obj, arith.GaussianRational):
        if obj.imag == 0:
            return arith.format_rational(obj.real)
        return {"re": arith.format_rational(obj.real), "im": arith.format_rational(obj.imag)}
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer, _MPZ)):
        return int(obj)
    if isinstance(obj, _MPQ):
        return arith.format_rational(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _float(obj.real), "im": _float(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def fmt(x) -> str:
    """Short human-readable rendering of a scalar."""
    v = to_jsonable(x)
    if isinstance(v, dict):
        re, im = str(v["re"]), str(v["im"])
        if re in ("0", "0.0"):
            return f"{im}i"
        return f"{re}{'' if im.startswith('-') else '+'}{im}i"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[fmt(c) if not isinstance(c, str) else c for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
