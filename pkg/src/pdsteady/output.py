"""Deterministic CSV/JSON emission.

Floats are written with ``repr`` (shortest round-trip form), so identical
inputs give byte-identical files. Any non-finite number is an error.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

PROFILE_COLUMNS = ("x", "u", "w", "p", "C_G", "C_A", "P", "q_U", "j_U")


class NonFiniteOutputError(ValueError):
    pass


def format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise NonFiniteOutputError(f"refusing to write non-finite value {value!r}")
        return repr(value)
    return str(value)


def csv_text(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def columns_csv_text(data: Mapping[str, np.ndarray]) -> str:
    """CSV from equal-length column arrays, in mapping order."""
    names = list(data)
    arrays = [np.asarray(data[k], dtype=float) for k in names]
    for name, arr in zip(names, arrays):
        if not np.all(np.isfinite(arr)):
            raise NonFiniteOutputError(f"column {name!r} contains non-finite values")
    return csv_text(names, zip(*(a.tolist() for a in arrays)))


def profile_columns(solution) -> dict:
    return {
        "x": solution.x,
        "u": solution.u,
        "w": solution.w,
        "p": solution.p,
        "C_G": solution.C_G,
        "C_A": solution.C_A,
        "P": solution.P,
        "q_U": solution.q_U,
        "j_U": solution.j_U,
    }


def _plain(obj):
    if isinstance(obj, Mapping):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise NonFiniteOutputError(f"refusing to write non-finite value {value!r}")
        return value
    return obj


def json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
