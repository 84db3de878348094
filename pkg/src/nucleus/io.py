"""Reading matrices and models, writing reports.

Matrix files are CSV (one row per line, comma separated) or JSON objects
``{"rows": n, "cols": m, "data": [...]}`` with row-major data.  Floats in
written reports use 17 significant digits, so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from ._errors import InputError
from .linop import Operator

__all__ = ["parse_matrix_csv", "parse_matrix_json", "read_matrix", "read_json", "dumps_json"]


def _to_float(tok: str, row: int, col: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise InputError(f"row {row}, col {col}: cannot parse {tok.strip()!r} as a number") from None
    if not math.isfinite(x):
        raise InputError(f"row {row}, col {col}: non-finite value {tok.strip()!r}")
    return x


def parse_matrix_csv(text: str) -> Operator:
    """Parse CSV text; blank lines are ignored, rows and cols are 1-based in errors."""
    rows = []
    width = None
    for lineno, rec in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not rec or all(not t.strip() for t in rec):
            continue
        if width is None:
            width = len(rec)
        elif len(rec) != width:
            raise InputError(f"ragged CSV: row {len(rows) + 1} (line {lineno}) has {len(rec)} columns, expected {width}")
        rows.append([_to_float(t, len(rows) + 1, j + 1) for j, t in enumerate(rec)])
    if not rows:
        raise InputError("CSV matrix is empty")
    return Operator(np.array(rows))


def parse_matrix_json(obj) -> Operator:
    """Build an operator from ``{"rows", "cols", "data"}``.

    ``data`` is either a flat row-major list of ``rows*cols`` numbers or a
    list of ``rows`` lists of ``cols`` numbers.
    """
    if not isinstance(obj, dict):
        raise InputError("matrix JSON must be an object with rows, cols and data")
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"matrix JSON is missing or has a bad field: {exc}") from None
    if rows < 1 or cols < 1:
        raise InputError(f"rows and cols must be >= 1, got {rows}x{cols}")
    if not isinstance(data, list):
        raise InputError("matrix JSON 'data' must be a list")
    if data and all(isinstance(r, list) for r in data):
        if len(data) != rows:
            raise InputError(f"expected {rows} rows, got {len(data)}")
        flat = []
        for i, r in enumerate(data, start=1):
            if len(r) != cols:
                raise InputError(f"ragged JSON data: row {i} has {len(r)} entries, expected {cols}")
            flat.extend(r)
    else:
        flat = data
        if len(flat) != rows * cols:
            raise InputError(f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(flat)}")
    vals = []
    for idx, x in enumerate(flat):
        i, j = divmod(idx, cols)
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"row {i + 1}, col {j + 1}: {x!r} is not a number")
        if not math.isfinite(x):
            raise InputError(f"row {i + 1}, col {j + 1}: non-finite value {x!r}")
        vals.append(float(x))
    return Operator.from_entries(rows, cols, vals)


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def read_matrix(path) -> Operator:
    """Read a matrix file, choosing the parser by extension (``.json`` or CSV)."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return parse_matrix_json(read_json(path))
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_matrix_csv(text)


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = f"{x:.17g}"
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps_json(obj, indent: int = 2) -> str:
    """Serialize like ``json.dumps`` but write every float with 17 significant digits."""
    pad = " " * indent if indent else ""

    def enc(o, level):
        nl = "\n" + pad * (level + 1) if indent else ""
        end = "\n" + pad * level if indent else ""
        sep = "," + nl if indent else ", "
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return _fmt_float(float(o))
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, np.ndarray):
            o = o.tolist()
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = (f"{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items())
            return "{" + nl + sep.join(items) + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[" + nl + sep.join(enc(v, level + 1) for v in o) + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0)
