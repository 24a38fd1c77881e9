"""Closed-form linear algebra checks against independent constructions."""

import numpy as np
import pytest

from sirnc import (
    Mat2,
    char_residual_6,
    eigenvalues_2x2,
    solve_lyapunov,
    spectral_norm,
    spectral_radius,
)

# F - V at the mixed disease-free point of the fig5 scenario, entered by hand.
M_FIG5 = Mat2(-1.5796875, 1.09375, 0.41875, -2.225)
# Its Lyapunov solution, from an exact rational solve of the 3x3 system.
Q_FIG5 = (0.35179118973863294, 0.13306303293193245, 0.2901292998963151)


def lyap_residual(m: Mat2, q: Mat2) -> float:
    ma, qa = m.to_array(), q.to_array()
    return float(np.linalg.norm(ma.T @ qa + qa @ ma + np.eye(2)))


def random_stable(rng) -> Mat2:
    """Eigenvalue real parts in [-5, -0.1], orthogonally rotated."""
    re = -rng.uniform(0.1, 5.0, size=2)
    if rng.random() < 0.5:
        core = np.array([[re[0], rng.normal()], [0.0, re[1]]])
    else:
        im = rng.uniform(0.1, 5.0)
        core = np.array([[re[0], im], [-im, re[0]]])
    phi = rng.uniform(0.0, 2.0 * np.pi)
    rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
    a = rot @ core @ rot.T
    return Mat2.from_array(a)


class TestEigenvalues:
    def test_diagonal(self):
        assert eigenvalues_2x2(Mat2(-1, 0, 0, -2)) == (-1, -2)

    def test_rotation_gives_conjugate_pair(self):
        lam1, lam2 = eigenvalues_2x2(Mat2(0, 1, -1, 0))
        assert lam1 == 1j and lam2 == -1j

    def test_fig5_matrix_is_hurwitz(self):
        lam1, lam2 = eigenvalues_2x2(M_FIG5)
        assert lam1.real < 0 and lam2.real < 0

    def test_ordering_real_then_imag_descending(self):
        lam1, lam2 = eigenvalues_2x2(Mat2(3, 0, 0, -1))
        assert (lam1, lam2) == (3, -1)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Mat2(np.inf, 0, 0, 1)


class TestSpectralRadius:
    def test_identity(self):
        assert spectral_radius(Mat2(1, 0, 0, 1)) == 1.0

    def test_rotation(self):
        assert spectral_radius(Mat2(0, 1, -1, 0)) == 1.0

    def test_triangular(self):
        assert spectral_radius(Mat2(2, 1, 0, 3)) == 3.0

    def test_bounded_by_row_sum_norm(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            a = rng.normal(size=(2, 2)) * rng.uniform(0.1, 10.0)
            row_sum = float(np.max(np.abs(a).sum(axis=1)))
            assert spectral_radius(Mat2.from_array(a)) <= row_sum * (1 + 1e-12)


class TestSolveLyapunov:
    def test_scaled_identity(self):
        q = solve_lyapunov(Mat2(-0.5, 0, 0, -0.5))
        np.testing.assert_allclose(q.to_array(), np.eye(2), atol=1e-15)

    def test_decoupled_diagonal(self):
        q = solve_lyapunov(Mat2(-1, 0, 0, -2))
        np.testing.assert_allclose(q.to_array(), np.diag([0.5, 0.25]), atol=1e-15)

    def test_fig5_matrix(self):
        q = solve_lyapunov(M_FIG5)
        assert lyap_residual(M_FIG5, q) < 1e-10
        assert q.a11 > 0 and q.det > 0 and q.trace > 0
        np.testing.assert_allclose(
            [q.a11, q.a12, q.a22], Q_FIG5, rtol=1e-13)

    def test_rejects_unstable(self):
        with pytest.raises(ValueError, match="Hurwitz"):
            solve_lyapunov(Mat2(1.0, 0, 0, -2.0))
        with pytest.raises(ValueError, match="Hurwitz"):
            solve_lyapunov(Mat2(0.0, 0, 0, -2.0))

    def test_thousand_random_stable_matrices(self):
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(1000):
            m = random_stable(rng)
            q = solve_lyapunov(m)
            worst = max(worst, lyap_residual(m, q))
            assert q.a11 > 0 and q.det > 0       # SPD via leading minors
            assert q.a12 == q.a21                # symmetric by construction
        assert worst < 1e-10


class TestSpectralNorm:
    def test_identity(self):
        assert spectral_norm(Mat2(1, 0, 0, 1)) == 1.0

    def test_diagonal(self):
        assert spectral_norm(Mat2(0.5, 0, 0, 0.25)) == 0.5

    def test_symmetric_by_hand(self):
        assert spectral_norm(Mat2(3, 1, 1, 3)) == pytest.approx(4.0, abs=1e-12)

    def test_matches_svd_on_random_matrices(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            a = rng.normal(size=(2, 2)) * rng.uniform(0.1, 5.0)
            got = spectral_norm(Mat2.from_array(a))
            want = float(np.linalg.svd(a, compute_uv=False)[0])
            assert got == pytest.approx(want, rel=1e-10)


class TestCharResidual6:
    def test_exact_eigenvalue_of_diagonal(self):
        assert char_residual_6(np.diag([1., 2, 3, 4, 5, 6]), 3.0) == 0.0

    def test_determinant_of_diagonal(self):
        assert char_residual_6(np.diag([1., 2, 3, 4, 5, 6]), 0.0) == pytest.approx(720.0)

    def test_matches_numpy_det_on_random_matrices(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a = rng.normal(size=(6, 6))
            lam = rng.normal()
            want = abs(float(np.linalg.det(a - lam * np.eye(6))))
            assert char_residual_6(a, lam) == pytest.approx(want, rel=1e-9, abs=1e-12)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            char_residual_6(np.eye(5), 0.0)
