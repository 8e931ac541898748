"""File formats: CoeffVector JSON, report JSON and CSV tables.

CoeffVector schema::

    {"degree": D, "valid_degree": V, "exact": bool, "tail_bound": real | null,
     "re": [D+1 reals], "im": [D+1 reals]}

``tail_bound: null`` encodes an unknown (infinite) tail.  Floats are written
with Python's shortest round-trip repr, so load(save(v)) is bit-exact.
Writes go to a temporary file in the target directory and are renamed
into place.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import fields, is_dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .hardy_core import CoeffVector

__all__ = [
    "SchemaError",
    "atomic_write",
    "dumps_json",
    "load_vector",
    "save_vector",
    "to_jsonable",
    "vector_from_dict",
    "vector_to_dict",
    "write_csv",
    "write_json",
]


class SchemaError(ValueError):
    def __init__(self, field_name: str, problem: str):
        super().__init__(f"field {field_name!r}: {problem}")
        self.field = field_name


def vector_to_dict(v: CoeffVector) -> dict:
    return {
        "degree": v.degree,
        "valid_degree": v.valid_degree,
        "exact": v.exact,
        "tail_bound": v.tail_bound if math.isfinite(v.tail_bound) else None,
        "re": [float(x) for x in v.coeffs.real],
        "im": [float(x) for x in v.coeffs.imag],
    }


def _real_list(d: dict, key: str, length: int) -> np.ndarray:
    if key not in d:
        raise SchemaError(key, "missing")
    vals = d[key]
    if not isinstance(vals, list) or len(vals) != length:
        raise SchemaError(key, f"expected a list of {length} reals")
    for i, x in enumerate(vals):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise SchemaError(key, f"entry {i} is not a real number")
        if not math.isfinite(x):
            raise SchemaError(key, f"entry {i} is not finite")
    return np.asarray(vals, dtype=np.float64)


def vector_from_dict(d: dict) -> CoeffVector:
    if not isinstance(d, dict):
        raise SchemaError("<root>", "expected a JSON object")
    for key, kind in (("degree", int), ("valid_degree", int), ("exact", bool)):
        if key not in d:
            raise SchemaError(key, "missing")
        val = d[key]
        if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
            raise SchemaError(key, "expected an integer")
        if kind is bool and not isinstance(val, bool):
            raise SchemaError(key, "expected a boolean")
    D = d["degree"]
    if D < 0:
        raise SchemaError("degree", "must be >= 0")
    if not -1 <= d["valid_degree"] <= D:
        raise SchemaError("valid_degree", f"must lie in [-1, {D}]")
    if "tail_bound" not in d:
        raise SchemaError("tail_bound", "missing")
    tail = d["tail_bound"]
    if tail is None:
        tail = math.inf
    elif isinstance(tail, bool) or not isinstance(tail, (int, float)) or math.isnan(tail) or tail < 0:
        raise SchemaError("tail_bound", "expected a nonnegative real or null")
    if d["exact"] and tail != 0:
        raise SchemaError("tail_bound", "must be 0 for exact vectors")
    re = _real_list(d, "re", D + 1)
    im = _real_list(d, "im", D + 1)
    return CoeffVector(re + 1j * im, d["valid_degree"], exact=d["exact"], tail_bound=tail)


def to_jsonable(obj):
    """Recursively convert reports to JSON-ready values."""
    if isinstance(obj, CoeffVector):
        return vector_to_dict(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else (None if math.isnan(x) else ("inf" if x > 0 else "-inf"))
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=1, allow_nan=False) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    atomic_write(path, dumps_json(obj))


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path, header: list[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    atomic_write(path, buf.getvalue())


def save_vector(path, v: CoeffVector) -> None:
    write_json(path, vector_to_dict(v))


def load_vector(path) -> CoeffVector:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("<root>", f"invalid JSON ({exc})") from None
    return vector_from_dict(data)
