"""JSON/CSV emission for CLI reports.

Rationals become ``"num/den"`` strings and floats keep Python's shortest
round-trip repr, so a report parses back to exactly what was emitted.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction

import numpy as np

from .exact import ComplexPiValue, GaussianRational, PiValue, format_fraction

__all__ = ["jsonable", "emit_json", "emit_csv", "write_atomic", "build_report"]


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if x != x or x in (float("inf"), float("-inf")):
            return repr(x)
        return x
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, GaussianRational):
        return {"re": format_fraction(obj.re), "im": format_fraction(obj.im)}
    if isinstance(obj, (PiValue, ComplexPiValue)):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_report(config: dict, results: list, passed: int, failed: int, wall_ms=None) -> dict:
    return jsonable(
        {
            "config": config,
            "results": results,
            "summary": {"passed": passed, "failed": failed, "wall_ms": wall_ms},
        }
    )


def emit_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def emit_csv(rows: list[dict]) -> str:
    """Flat table; nested cells are JSON-encoded."""
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(rows[0].keys())
    for r in rows[1:]:
        fields.extend(k for k in r if k not in fields)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
