"""CSV readers and writers for label matrices, prediction sets and scores.

All files are dense, headerless, comma-separated, one instance per row.
Score files are written with 17 significant digits, which round-trips
float64 exactly.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .exceptions import ParseError, RaggedRowError, ValidationError
from .validation import check_label_matrix, check_prediction_set, check_scores

SCORE_FORMAT = "%.17g"


def _read_csv(path):
    path = Path(path)
    rows = []
    width = None
    with path.open(newline="") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise RaggedRowError(
                    path, lineno, f"expected {width} fields, got {len(fields)}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError:
                bad = next(f for f in fields if not _is_float(f))
                raise ParseError(path, lineno, f"not a number: {bad!r}") from None
    if not rows:
        raise ValidationError(f"{path}: file has no data rows")
    return np.asarray(rows, dtype=np.float64)


def _is_float(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_label_matrix(path):
    """Read a 0/1 CSV file into an ``(n, l)`` float array."""
    return check_label_matrix(_read_csv(path))


def load_prediction_set(paths):
    """Read one CSV per base model, in model order, into an ``(m, n, l)`` array."""
    paths = list(paths)
    if not paths:
        raise ValidationError("no prediction files given")
    return check_prediction_set([_read_csv(p) for p in paths])


def load_scores(path):
    return check_scores(_read_csv(path))


def save_label_matrix(Z, path):
    Z = check_label_matrix(Z)
    np.savetxt(path, Z.astype(np.int64), fmt="%d", delimiter=",")


def save_scores(scores, path):
    S = check_scores(scores)
    np.savetxt(path, S, fmt=SCORE_FORMAT, delimiter=",")


def save_json(obj, path):
    """Write JSON deterministically (sorted keys, fixed separators)."""
    Path(path).write_text(dumps_json(obj) + "\n")


def dumps_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2)
