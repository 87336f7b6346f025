"""Plain-text matrix files shared by the command-line tools.

Format: first line ``rows cols``, then one whitespace-separated row per
line, written with 17 significant digits so a write/read round trip is
exact in double precision.
"""

import numpy as np

from .errors import InvalidInputError
from .linalg import as_matrix

__all__ = ["write_matrix", "read_matrix"]


def write_matrix(path, M):
    """Write ``M`` to ``path`` in the shared text format."""
    A = as_matrix(M, "M")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{A.shape[0]} {A.shape[1]}\n")
        for row in A:
            fh.write(" ".join(f"{x:.17g}" for x in row))
            fh.write("\n")


def read_matrix(path):
    """Read a matrix written by :func:`write_matrix`.

    Raises ``InvalidInputError`` with the offending line number on any
    malformed content.
    """
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as err:
        raise InvalidInputError(f"{path}: {err.strerror or err}") from err
    if not lines:
        raise InvalidInputError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise InvalidInputError(f"{path}:1: expected 'rows cols', got {lines[0]!r}")
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError:
        raise InvalidInputError(f"{path}:1: expected integer 'rows cols'") from None
    if rows < 1 or cols < 1:
        raise InvalidInputError(f"{path}:1: non-positive dimensions {rows}x{cols}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise InvalidInputError(f"{path}: expected {rows} data rows, found {len(body)}")
    out = np.empty((rows, cols), dtype=np.float64)
    for i, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != cols:
            raise InvalidInputError(
                f"{path}:{i + 2}: expected {cols} values, found {len(parts)}"
            )
        try:
            out[i, :] = [float(p) for p in parts]
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{i + 2}: {exc}") from None
    if not np.isfinite(out).all():
        raise InvalidInputError(f"{path}: non-finite entries")
    return out
