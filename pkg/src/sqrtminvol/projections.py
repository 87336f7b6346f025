"""Euclidean projections onto the solver feasible set.

The feasible set couples a nonnegativity constraint on ``W`` with a
capped-simplex constraint on each column of ``H``: entries nonnegative
and the column sum at most one.  The cap is an inequality, so columns
with small mass are left alone and only overfull columns get pulled
back to the unit simplex.
"""

import numpy as np

from .errors import InvalidInputError
from .linalg import as_matrix

__all__ = [
    "project_nonneg",
    "project_capped_simplex",
    "project_H_columns",
    "require_feasible",
]

# Column sums may exceed 1 by accumulated rounding after a projection.
FEASIBILITY_SLACK = 1e-12


def project_nonneg(M):
    """Entrywise clamp to the nonnegative orthant."""
    return np.maximum(np.asarray(M, dtype=np.float64), 0.0)


def _project_columns_inplace(Hc, V, over):
    """Simplex-project the overfull columns ``V`` of ``Hc`` (sum > 1).

    Sort-and-threshold rule: with the column sorted descending, find the
    largest k such that u_k > (sum of top k - 1) / k; that prefix stays
    active and tau = (sum of top k - 1) / k is subtracted everywhere.
    """
    U = np.sort(V, axis=0)[::-1, :]
    css = np.cumsum(U, axis=0)
    ks = np.arange(1, V.shape[0] + 1, dtype=np.float64)[:, None]
    active = U - (css - 1.0) / ks > 0.0
    # The active test holds exactly for a prefix of each sorted column,
    # so the count locates the threshold index.
    k = active.sum(axis=0)
    tau = (css[k - 1, np.arange(V.shape[1])] - 1.0) / k
    Hc[:, over] = np.maximum(V - tau[None, :], 0.0)


def project_capped_simplex(v):
    """Project a vector onto ``{h >= 0, sum(h) <= 1}``.

    Clamps to the nonnegative orthant first; if the clamped vector
    already fits under the cap it is returned unchanged, otherwise the
    vector is projected onto the unit simplex.
    """
    w = np.asarray(v, dtype=np.float64)
    if w.ndim != 1:
        raise InvalidInputError(f"expected a vector, got ndim={w.ndim}")
    out = project_H_columns(w[:, None])
    return out[:, 0]


def project_H_columns(H):
    """Project every column of ``H`` onto the capped simplex.

    Columns are independent; feasible columns are returned bitwise
    unchanged apart from the nonnegative clamp.
    """
    A = np.asarray(H, dtype=np.float64)
    Hc = np.maximum(A, 0.0)
    over = Hc.sum(axis=0) > 1.0
    if np.any(over):
        # Projection of the raw column: entries below the threshold end
        # up clamped anyway, so clamping first then thresholding the raw
        # values yields the same point.
        _project_columns_inplace(Hc, A[:, over], over)
    return Hc


def require_feasible(W, H, where="input"):
    """Raise ``InvalidInputError`` unless ``(W, H)`` lies in the feasible set."""
    Wm = as_matrix(W, "W")
    Hm = as_matrix(H, "H")
    if Wm.shape[1] != Hm.shape[0]:
        raise InvalidInputError(
            f"{where}: W has {Wm.shape[1]} columns but H has {Hm.shape[0]} rows"
        )
    if np.min(Wm) < 0.0:
        raise InvalidInputError(f"{where}: W has negative entries")
    if np.min(Hm) < 0.0:
        raise InvalidInputError(f"{where}: H has negative entries")
    worst = float(np.max(Hm.sum(axis=0)))
    if worst > 1.0 + FEASIBILITY_SLACK:
        raise InvalidInputError(
            f"{where}: H column sum {worst:.17g} exceeds the unit cap"
        )
