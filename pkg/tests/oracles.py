"""Independent reference implementations used to cross-check the kernels.

Everything here is written the slow, obvious way (explicit loops,
cofactor expansion, exhaustive enumeration) on purpose: these are the
yardsticks the fast library code is measured against, so they must not
share any code path with it.
"""

import itertools
import math
from fractions import Fraction

import numpy as np


def frob_oracle(M):
    """Frobenius norm by direct double-loop summation."""
    total = 0.0
    for i in range(M.shape[0]):
        for j in range(M.shape[1]):
            total += float(M[i, j]) * float(M[i, j])
    return math.sqrt(total)


def clamp_oracle(M):
    """Entrywise max(x, 0) by explicit loops."""
    R = np.empty_like(np.asarray(M, dtype=float))
    for i in range(R.shape[0]):
        for j in range(R.shape[1]):
            x = float(M[i, j])
            R[i, j] = x if x > 0.0 else 0.0
    return R


def cofactor_det(A):
    """Determinant by recursive cofactor expansion along the first row."""
    A = [[float(x) for x in row] for row in np.asarray(A)]
    n = len(A)
    if n == 1:
        return A[0][0]
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in A[1:]]
        total += ((-1.0) ** j) * A[0][j] * cofactor_det(minor)
    return total


def gauss_solve(A, B):
    """Solve A X = B by Gaussian elimination with partial pivoting."""
    A = np.array(A, dtype=float)
    B = np.array(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    n = A.shape[0]
    M = np.hstack([A, B])
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(M[col:, col])))
        if pivot != col:
            M[[col, pivot]] = M[[pivot, col]]
        M[col] = M[col] / M[col, col]
        for row in range(n):
            if row != col:
                M[row] = M[row] - M[row, col] * M[col]
    return M[:, n:]


def jacobi_eigenvalues(S, sweeps=100, tol=1e-14):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(S, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += A[p, q] * A[p, q]
        if off <= tol * tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = 0.5 * math.atan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = math.cos(theta), math.sin(theta)
                J = np.eye(n)
                J[p, p] = c
                J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
    return np.sort(np.diag(A))


def jacobi_svd_values(M, sweeps=100, tol=1e-14):
    """Singular values by one-sided Jacobi: rotate columns until orthogonal."""
    U = np.array(M, dtype=float)
    if U.shape[0] < U.shape[1]:
        U = U.T
    n = U.shape[1]
    for _ in range(sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = float(U[:, p] @ U[:, p])
                aqq = float(U[:, q] @ U[:, q])
                apq = float(U[:, p] @ U[:, q])
                if abs(apq) <= tol * math.sqrt(app * aqq) + tol:
                    continue
                theta = 0.5 * math.atan2(2.0 * apq, aqq - app)
                c, s = math.cos(theta), math.sin(theta)
                up = c * U[:, p] - s * U[:, q]
                uq = s * U[:, p] + c * U[:, q]
                U[:, p], U[:, q] = up, uq
                rotated = True
        if not rotated:
            break
    return np.sort([math.sqrt(float(U[:, j] @ U[:, j])) for j in range(n)])


def proj_capped_oracle(v):
    """Projection onto {x >= 0, sum(x) <= 1} by exhaustive support search.

    Every support set is tried, with and without the sum constraint
    active; the feasible candidate of least distance wins.  All
    arithmetic is exact (rational), because float rounding of the
    objective can merge candidates whose true distances differ by less
    than an ulp and then report the wrong one; the projection is unique,
    so the exact comparison never ties on distinct points.
    """
    v = np.asarray(v, dtype=float)
    k = v.size
    vf = [Fraction(x) for x in v.tolist()]
    one = Fraction(1)
    best, best_obj = None, None
    for mask in itertools.product((0, 1), repeat=k):
        F = [i for i in range(k) if mask[i]]
        for active in (False, True):
            x = [Fraction(0)] * k
            if F:
                if active:
                    tau = (sum(vf[i] for i in F) - one) / len(F)
                    for i in F:
                        x[i] = vf[i] - tau
                else:
                    for i in F:
                        x[i] = vf[i]
            if min(x) < 0 or sum(x) > one:
                continue
            obj = sum((xi - vi) ** 2 for xi, vi in zip(x, vf))
            if best_obj is None or obj < best_obj:
                best, best_obj = x, obj
    return np.array([float(xi) for xi in best])


def nnls_capped_oracle(W, x):
    """argmin |x - W h|^2 over {h >= 0, sum(h) <= 1}, exhaustively.

    KKT systems for every support set are solved by Gaussian
    elimination; candidates are screened by feasibility and compared by
    objective value.  Intended for rank <= 4.
    """
    W = np.asarray(W, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    k = W.shape[1]
    G = W.T @ W
    b = W.T @ x
    best, best_obj = np.zeros(k), float(x @ x)
    for mask in itertools.product((0, 1), repeat=k):
        F = [i for i in range(k) if mask[i]]
        if not F:
            continue
        GF = G[np.ix_(F, F)]
        bF = b[F]
        for active in (False, True):
            h = np.zeros(k)
            try:
                if active:
                    # Bordered system for the equality-constrained case.
                    nf = len(F)
                    K = np.zeros((nf + 1, nf + 1))
                    K[:nf, :nf] = GF
                    K[:nf, nf] = 1.0
                    K[nf, :nf] = 1.0
                    rhs = np.append(bF, 1.0)
                    sol = gauss_solve(K, rhs).ravel()
                    hF = sol[:nf]
                else:
                    hF = gauss_solve(GF, bF).ravel()
            except (ZeroDivisionError, FloatingPointError):
                continue
            if not np.all(np.isfinite(hF)):
                continue
            h[F] = hF
            if h.min() < -1e-10 or h.sum() > 1.0 + 1e-10:
                continue
            r = x - W @ np.clip(h, 0.0, None)
            obj = float(r @ r)
            if obj < best_obj - 1e-15:
                best, best_obj = np.clip(h, 0.0, None), obj
    return best


def fd_grad(fun, M, step=1e-6):
    """Central finite-difference gradient of a scalar function of a matrix."""
    M = np.asarray(M, dtype=float)
    G = np.zeros_like(M)
    for i in range(M.shape[0]):
        for j in range(M.shape[1]):
            P = M.copy()
            P[i, j] += step
            up = fun(P)
            P[i, j] -= 2.0 * step
            down = fun(P)
            G[i, j] = (up - down) / (2.0 * step)
    return G


def align_brute_force(W_star, W_hat):
    """Best column matching by trying all permutations; returns (perm, cost)."""
    Ws = np.asarray(W_star, dtype=float)
    Wh = np.asarray(W_hat, dtype=float)
    r = Ws.shape[1]
    best_perm, best_cost = None, None
    for perm in itertools.permutations(range(r)):
        cost = 0.0
        for t in range(r):
            d = Ws[:, t] - Wh[:, perm[t]]
            cost += float(d @ d)
        if best_cost is None or cost < best_cost:
            best_perm, best_cost = perm, cost
    return np.array(best_perm), best_cost
