"""Deterministic CSV/JSON writers.

Floats are written with 12 significant digits, ``.`` as decimal separator
and ``\\n`` line endings, so identical inputs give byte-identical files.
Infinite values are written as ``inf``; booleans as ``1``/``0``.
"""
from __future__ import annotations

import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np


def format_value(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) or hasattr(v, "__float__"):
        f = float(v)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        out = f"{f:.12g}"
        return "0" if out == "-0" else out
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(format_value(v) for v in row) + "\n")
    return buf.getvalue()


def _jsonable(v: Any) -> Any:
    if isinstance(v, Mapping):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, str) or v is None:
        return v
    if isinstance(v, int):
        return v
    f = float(v)
    if math.isinf(f) or math.isnan(f):
        return format_value(f)
    return float(f"{f:.12g}")


def json_text(obj: Any) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_text(text: str, path: str | Path | None) -> None:
    """Write to ``path``, or to stdout when ``path`` is None or ``-``."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def emit(rows: Iterable[Sequence[Any]], header: Sequence[str], fmt: str = "csv",
         path: str | Path | None = None) -> None:
    """Write a table as CSV, or as a JSON list of row objects."""
    if fmt == "csv":
        write_text(csv_text(header, rows), path)
    elif fmt == "json":
        write_text(json_text([dict(zip(header, row)) for row in rows]), path)
    else:
        raise ValueError(f"unsupported output format {fmt!r}")
