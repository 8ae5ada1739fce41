"""Matrix CSV round-trip and float formatting shared by the CSV artifacts."""

from __future__ import annotations

import re

import numpy as np

from .errors import ParseError
from .linalg import as_matrix

_HEADER_RE = re.compile(r"^#\s*d\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s*$")


def format_float(x) -> str:
    """12 significant digits; round-trips with < 1e-9 relative error."""
    if x is None:
        return ""
    return format(float(x), ".12g")


def write_matrix_csv(path, m) -> None:
    """Write a d x n matrix with a ``# d=<d> n=<n>`` header line."""
    m = as_matrix(m)
    d, n = m.shape
    lines = [f"# d={d} n={n}"]
    for row in m:
        lines.append(",".join(format_float(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    """Read a matrix CSV; the header line is optional, dimensions inferred."""
    with open(path, encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    expected = None
    rows = []
    for lineno, line in enumerate(raw, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            match = _HEADER_RE.match(text)
            if match:
                expected = (int(match.group(1)), int(match.group(2)))
            continue
        cells = text.split(",")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: non-numeric cell ({exc})") from None
        if len(rows) > 1 and len(rows[-1]) != len(rows[0]):
            raise ParseError(f"{path}:{lineno}: ragged row "
                             f"({len(rows[-1])} cells, expected {len(rows[0])})")
    if not rows:
        raise ParseError(f"{path}: no data rows")
    m = np.array(rows, dtype=float)
    if expected is not None and m.shape != expected:
        raise ParseError(f"{path}: header says {expected}, data is {m.shape}")
    return m
