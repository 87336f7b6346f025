import csv
import io
import itertools
import math

import numpy as np
import pytest

from oracles import jacobi_eigenvalues
from sqrtminvol.errors import InvalidInputError, UndefinedMetricError
from sqrtminvol.metrics import (
    align_columns,
    pca_2d,
    project_2d,
    rel_rmse_W,
    rel_rmse_X,
    write_pca_csv,
)


def brute_force_alignment_cost(Ws, Wh):
    best = math.inf
    r = Ws.shape[1]
    for perm in itertools.permutations(range(r)):
        cost = sum(
            float(np.sum((Ws[:, t] - Wh[:, perm[t]]) ** 2)) for t in range(r)
        )
        best = min(best, cost)
    return best


class TestRelRmseX:
    def test_exact_factorization(self):
        rng = np.random.default_rng(0)
        W = rng.random((4, 2))
        H = rng.random((2, 6)) * 0.4
        assert rel_rmse_X(W @ H, W, H) == 0.0

    def test_known_perturbation(self):
        X = np.eye(3)
        W = np.eye(3)
        H = np.eye(3) * 0.99  # residual 0.01 per diagonal entry
        want = math.sqrt(3 * 0.01**2) / math.sqrt(3.0)
        assert rel_rmse_X(X, W, H) == pytest.approx(want, rel=1e-12)

    def test_zero_reference_raises(self):
        with pytest.raises(UndefinedMetricError):
            rel_rmse_X(np.zeros((2, 2)), np.ones((2, 1)), np.ones((1, 2)))


class TestAlignment:
    def test_identity_match(self):
        rng = np.random.default_rng(1)
        W = rng.random((5, 4))
        res = align_columns(W, W)
        np.testing.assert_array_equal(res.permutation, np.arange(4))
        assert res.cost == pytest.approx(0.0, abs=1e-12)

    def test_recovers_a_shuffle(self):
        rng = np.random.default_rng(2)
        W = rng.random((6, 4))
        perm = np.array([2, 0, 3, 1])
        shuffled = W[:, perm]
        res = align_columns(W, shuffled)
        # W_hat[:, permutation] must reproduce W_star's column order.
        np.testing.assert_array_equal(shuffled[:, res.permutation], W)

    def test_cost_matches_brute_force_over_many_seeds(self):
        for seed in range(50):
            rng = np.random.default_rng(seed)
            Ws = rng.random((5, 4))
            Wh = rng.random((5, 4))
            res = align_columns(Ws, Wh)
            assert res.cost == pytest.approx(
                brute_force_alignment_cost(Ws, Wh), rel=1e-10, abs=1e-12
            )

    def test_shape_mismatch_raises(self):
        with pytest.raises(InvalidInputError):
            align_columns(np.ones((3, 2)), np.ones((3, 3)))


class TestRelRmseW:
    def test_shuffled_copy_scores_zero(self):
        rng = np.random.default_rng(3)
        W = rng.random((5, 4))
        assert rel_rmse_W(W, W[:, [3, 1, 0, 2]]) == pytest.approx(0.0, abs=1e-14)

    def test_analytic_perturbation(self):
        rng = np.random.default_rng(4)
        W = rng.random((6, 3)) + 1.0  # well-separated columns
        E = rng.normal(size=(6, 3)) * 1e-3
        perm = np.array([1, 2, 0])
        got = rel_rmse_W(W, (W + E)[:, perm])
        want = float(np.linalg.norm(E) / np.linalg.norm(W))
        assert got == pytest.approx(want, rel=1e-9)

    def test_zero_reference_raises(self):
        with pytest.raises(UndefinedMetricError):
            rel_rmse_W(np.zeros((3, 2)), np.ones((3, 2)))


class TestPca:
    def test_planar_points_keep_distances(self):
        rng = np.random.default_rng(5)
        B, _ = np.linalg.qr(rng.normal(size=(7, 2)))
        coords = rng.normal(size=(2, 40)) * np.array([[3.0], [1.5]])
        X = B @ coords + rng.normal(size=(7, 1))
        p = pca_2d(X)
        Y = project_2d(p, X)
        for _ in range(30):
            i, j = rng.integers(0, 40, size=2)
            d_full = np.linalg.norm(X[:, i] - X[:, j])
            d_proj = np.linalg.norm(Y[i] - Y[j])
            assert d_proj == pytest.approx(d_full, abs=1e-10)

    def test_duplicated_columns_share_coordinates(self):
        rng = np.random.default_rng(6)
        X = rng.random((4, 10))
        X2 = np.hstack([X, X[:, :3]])
        Y = project_2d(pca_2d(X2), X2)
        np.testing.assert_allclose(Y[10:], Y[:3], atol=1e-12)

    def test_captured_variance_matches_eigenvalue_oracle(self):
        rng = np.random.default_rng(7)
        X = rng.random((5, 60)) * np.arange(1, 6)[:, None]
        p = pca_2d(X)
        Y = project_2d(p, X)
        Yc = Y - Y.mean(axis=0, keepdims=True)
        captured = float(np.sum(Yc * Yc)) / 60.0
        Z = X - X.mean(axis=1, keepdims=True)
        eigs = sorted(jacobi_eigenvalues((Z @ Z.T) / 60.0), reverse=True)
        assert captured == pytest.approx(eigs[0] + eigs[1], rel=1e-9)

    def test_one_dimensional_points_rejected(self):
        with pytest.raises(InvalidInputError):
            pca_2d(np.ones((1, 5)))

    def test_frame_is_deterministic(self):
        rng = np.random.default_rng(8)
        X = rng.random((4, 12))
        p1, p2 = pca_2d(X), pca_2d(X.copy())
        np.testing.assert_array_equal(p1.basis, p2.basis)
        np.testing.assert_array_equal(p1.mean, p2.mean)


class TestPcaCsv:
    def test_layout_and_overlay(self):
        rng = np.random.default_rng(9)
        X = rng.random((3, 5))
        W = rng.random((3, 2))
        p = pca_2d(X)
        buf = io.StringIO()
        write_pca_csv(buf, p, [("X", X), ("W_star", W), ("W_hat", W)])
        lines = buf.getvalue().splitlines()
        assert lines[0] == "set,index,pc1,pc2"
        rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
        assert [r["set"] for r in rows] == ["X"] * 5 + ["W_star"] * 2 + ["W_hat"] * 2
        assert [r["index"] for r in rows[:5]] == ["0", "1", "2", "3", "4"]
        # Identical overlay sets serialize to identical coordinates.
        star = [(r["pc1"], r["pc2"]) for r in rows if r["set"] == "W_star"]
        hat = [(r["pc1"], r["pc2"]) for r in rows if r["set"] == "W_hat"]
        assert star == hat
