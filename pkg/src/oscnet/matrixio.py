"""CSV matrix dumps and 0/1 pattern grids."""
from __future__ import annotations

import numpy as np

from .errors import ValidationError


def matrix_csv(M: np.ndarray) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in M)


def parse_matrix_csv(text: str) -> np.ndarray:
    rows = [ln for ln in text.splitlines() if ln.strip()]
    try:
        data = [[float(v) for v in ln.split(",")] for ln in rows]
    except ValueError as exc:
        raise ValidationError(f"malformed matrix CSV: {exc}") from exc
    if len({len(r) for r in data}) > 1:
        raise ValidationError("ragged matrix CSV")
    return np.array(data)


def pattern_grid(pattern: np.ndarray) -> str:
    """Plain-PBM style text: a ``P1`` header, dimensions, then 0/1 rows."""
    pattern = np.asarray(pattern, dtype=bool)
    rows, cols = pattern.shape
    body = "".join(" ".join("1" if v else "0" for v in row) + "\n" for row in pattern)
    return f"P1\n{cols} {rows}\n{body}"


def parse_pattern_grid(text: str) -> np.ndarray:
    tokens = text.split()
    if not tokens or tokens[0] != "P1":
        raise ValidationError("pattern grid must start with 'P1'")
    cols, rows = int(tokens[1]), int(tokens[2])
    bits = [t == "1" for t in tokens[3:]]
    if len(bits) != rows * cols:
        raise ValidationError("pattern grid size mismatch")
    return np.array(bits, dtype=bool).reshape(rows, cols)
