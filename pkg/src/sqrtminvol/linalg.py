"""Dense numerical kernels used by every solver in the package.

All matrices are plain 2-D ``numpy.ndarray`` objects in row-major order,
dtype float64.  Problem sizes here are small (a few dozen rows, a few
thousand columns at most), so everything stays dense and there is no
sparse path on purpose.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, InvalidParameterError, NotPositiveDefiniteError

__all__ = [
    "SpdFactor",
    "as_matrix",
    "frobenius_norm",
    "gram_shifted",
    "cholesky",
    "logdet_spd",
    "solve_spd",
    "spectral_norm",
]

# Power iteration rarely needs more than a few dozen sweeps on the
# well-conditioned Grams seen here; the cap only guards degenerate input.
_POWER_MAX_ITERS = 10_000


def as_matrix(M, name="matrix", require_finite=True):
    """Coerce ``M`` to a 2-D float64 array, optionally checking finiteness.

    Parameters
    ----------
    M : array_like
        Input data interpreted as a dense matrix.
    name : str
        Label used in error messages.
    require_finite : bool
        When True, any NaN or Inf entry raises ``InvalidInputError``.

    Returns
    -------
    numpy.ndarray
        C-contiguous float64 view or copy of the input.
    """
    A = np.ascontiguousarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got ndim={A.ndim}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidInputError(f"{name} must be non-empty, got shape {A.shape}")
    if require_finite and not np.isfinite(A).all():
        raise InvalidInputError(f"{name} contains non-finite entries")
    return A


def frobenius_norm(M):
    """Frobenius norm, the square root of the sum of squared entries.

    Returns 0 exactly when ``M`` is all zeros.  Non-finite entries raise
    ``InvalidInputError``.
    """
    A = as_matrix(M, "M")
    return float(np.sqrt(np.sum(A * A)))


def gram_shifted(W, delta):
    """Shifted Gram matrix ``W^T W + delta * I``.

    The shift keeps the Gram positive definite even when ``W`` is
    rank-deficient, which the volume penalty relies on.

    Parameters
    ----------
    W : array_like, shape (m, r)
    delta : float
        Positive shift added to the diagonal.

    Returns
    -------
    numpy.ndarray, shape (r, r)
        Exactly symmetric output with diagonal entries >= delta.
    """
    if not (float(delta) > 0.0):
        raise InvalidParameterError(f"delta must be > 0, got {delta}")
    A = as_matrix(W, "W")
    G = A.T @ A
    # Matrix products are only symmetric up to rounding; make it exact.
    G = 0.5 * (G + G.T)
    G[np.diag_indices_from(G)] += float(delta)
    return G


@dataclass(frozen=True)
class SpdFactor:
    """Lower-triangular Cholesky factor ``L`` with ``L L^T = Q``.

    Attributes
    ----------
    dim : int
        Order of the factored matrix.
    lower : numpy.ndarray, shape (dim, dim)
        Lower-triangular factor; all diagonal entries strictly positive.
    """

    dim: int
    lower: np.ndarray


def cholesky(Q):
    """Cholesky factorization of a symmetric positive definite matrix.

    Parameters
    ----------
    Q : array_like, shape (r, r)
        Must be symmetric to 1e-10 absolute.

    Returns
    -------
    SpdFactor

    Raises
    ------
    NotPositiveDefiniteError
        If a non-positive pivot is encountered.  This signals that the
        diagonal shift was too small or that something upstream broke;
        it is never masked by ad-hoc regularization here.
    """
    A = as_matrix(Q, "Q")
    if A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"Q must be square, got shape {A.shape}")
    if np.max(np.abs(A - A.T)) > 1e-10:
        raise InvalidInputError("Q is not symmetric (tolerance 1e-10)")
    try:
        L = scipy.linalg.cholesky(A, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            f"Cholesky failed, matrix is not positive definite: {exc}"
        ) from exc
    return SpdFactor(dim=A.shape[0], lower=L)


def logdet_spd(Q):
    """log-determinant of a symmetric positive definite matrix.

    Computed as ``2 * sum(log(diag(L)))`` from the Cholesky factor,
    which is stable for the well-conditioned shifted Grams used here.
    """
    F = cholesky(Q)
    return float(2.0 * np.sum(np.log(np.diag(F.lower))))


def solve_spd(F, B):
    """Solve ``Q Y = B`` given the Cholesky factor of ``Q``.

    Parameters
    ----------
    F : SpdFactor
    B : array_like, shape (F.dim, k)

    Returns
    -------
    numpy.ndarray, shape (F.dim, k)
    """
    RHS = as_matrix(B, "B")
    if RHS.shape[0] != F.dim:
        raise InvalidInputError(
            f"dimension mismatch: factor is {F.dim}x{F.dim}, B has {RHS.shape[0]} rows"
        )
    return scipy.linalg.cho_solve((F.lower, True), RHS, check_finite=False)


def spectral_norm(M, tol=1e-12):
    """Largest singular value of ``M`` by power iteration.

    Iterates on whichever of ``M M^T`` / ``M^T M`` is smaller, starting
    from the normalized all-ones vector, and stops once the relative
    change of the eigenvalue estimate falls below ``tol``.  The fixed
    start vector keeps repeated runs bit-for-bit identical.

    A zero matrix returns 0; this is not an error.
    """
    if not (float(tol) > 0.0):
        raise InvalidParameterError(f"tol must be > 0, got {tol}")
    A = as_matrix(M, "M")
    m, n = A.shape
    if m <= n:
        B = A @ A.T
    else:
        B = A.T @ A
    d = B.shape[0]
    v = np.full(d, 1.0 / np.sqrt(d))
    est = 0.0
    for _ in range(_POWER_MAX_ITERS):
        w = B @ v
        nw = float(np.sqrt(np.sum(w * w)))
        if nw == 0.0:
            return 0.0
        prev, est = est, nw
        v = w / nw
        if abs(est - prev) <= tol * est:
            break
    return float(np.sqrt(est))
