"""CSV/JSON writers shared by the library and the CLI.

Floats are written with 17 significant digits so a write/read round trip is
exact in double precision. CSV files may carry leading ``#`` comment lines
(used for the run configuration); readers should skip them.
"""

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["fmt_float", "write_csv", "read_csv_matrix", "write_json", "to_jsonable"]


def fmt_float(x):
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.17g}"


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def write_csv(path, header, rows, comments=()):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([_fmt(h) for h in header])
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv_matrix(path):
    """Read a numeric CSV written by :func:`write_csv`.

    Returns ``(header, array)``; comment lines are skipped.
    """
    with Path(path).open(newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    data = np.array([[float(v) for v in row] for row in reader if row])
    return header, data


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        return x
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path, payload):
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(to_jsonable(payload), fh, indent=2, sort_keys=False)
        fh.write("\n")
    return path
