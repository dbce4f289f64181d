"""Tests for the dense linear algebra kernel."""

from __future__ import annotations

import logging
import math

import numpy as np
import pytest

from invkit.config import DEFAULT_EIG_TOL
from invkit.numerics import (
    Definiteness,
    MatrixOverflowError,
    NotSymmetricError,
    ShapeError,
    SingularMatrixError,
    as_matrix,
    classify_margin,
    definiteness,
    inertia,
    invert,
    lambda_max,
    mat_exp,
    scale_of,
    solve,
    sym_eig,
    sym_function,
)

# =============================================================================
# Fixtures
# =============================================================================


@pytest.fixture
def random_symmetric() -> np.ndarray:
    """A dense 6x6 symmetric matrix with a fixed seed."""
    rng = np.random.default_rng(42)
    m = rng.standard_normal((6, 6))
    return m + m.T


class TestAsMatrix:
    """Tests for input conversion."""

    def test_converts_nested_lists(self) -> None:
        """Test that integers become float64."""
        m = as_matrix([[1, 2], [3, 4]])
        assert m.dtype == np.float64
        assert m.shape == (2, 2)

    def test_rejects_non_square(self) -> None:
        """Test the square requirement."""
        with pytest.raises(ShapeError, match="square"):
            as_matrix(np.ones((2, 3)), square=True, name="A")

    def test_rejects_non_finite(self) -> None:
        """Test that infinities are rejected."""
        with pytest.raises(ShapeError, match="non-finite"):
            as_matrix([[1.0, np.inf]])

    def test_rejects_vectors(self) -> None:
        """Test that 1-D input is not a matrix."""
        with pytest.raises(ShapeError):
            as_matrix([1.0, 2.0])

    def test_scale_of_identity(self) -> None:
        """Test the tolerance scale 1 + ||M||_F."""
        assert scale_of(np.eye(2)) == pytest.approx(1.0 + math.sqrt(2.0))


class TestSymEig:
    """Tests for the Jacobi eigen-solver."""

    def test_two_by_two(self) -> None:
        """Test eigenvalues of [[2, 1], [1, 2]]."""
        eig = sym_eig([[2.0, 1.0], [1.0, 2.0]])
        assert eig.eigenvalues == pytest.approx([3.0, 1.0])
        assert eig.lambda_max == pytest.approx(3.0)
        assert eig.lambda_min == pytest.approx(1.0)

    def test_descending_order_for_diagonal(self) -> None:
        """Test that a diagonal matrix is reordered, not rotated."""
        eig = sym_eig(np.diag([1.0, 3.0, 2.0]))
        assert eig.eigenvalues.tolist() == [3.0, 2.0, 1.0]
        assert np.array_equal(np.abs(eig.eigenvectors), np.eye(3)[:, [1, 2, 0]])

    def test_matches_numpy(self, random_symmetric: np.ndarray) -> None:
        """Test agreement with LAPACK on a dense matrix."""
        eig = sym_eig(random_symmetric)
        expected = np.sort(np.linalg.eigvalsh(random_symmetric))[::-1]
        assert np.allclose(eig.eigenvalues, expected, atol=1e-9)

    def test_orthonormal_and_reconstructs(self, random_symmetric: np.ndarray) -> None:
        """Test U^T U = I and U diag(lambda) U^T = M."""
        eig = sym_eig(random_symmetric)
        u = eig.eigenvectors
        assert np.allclose(u.T @ u, np.eye(6), atol=1e-10)
        assert np.allclose(eig.reconstruct(), random_symmetric, atol=1e-9)

    def test_sign_normalization(self, random_symmetric: np.ndarray) -> None:
        """Test that the largest-magnitude component of each eigenvector is positive."""
        u = sym_eig(random_symmetric).eigenvectors
        for j in range(u.shape[1]):
            column = u[:, j]
            assert column[np.argmax(np.abs(column))] > 0.0

    def test_rejects_asymmetric(self) -> None:
        """Test that asymmetric input raises."""
        with pytest.raises(NotSymmetricError):
            sym_eig([[1.0, 2.0], [0.0, 1.0]])

    def test_one_by_one(self) -> None:
        """Test the trivial case."""
        assert sym_eig([[-4.0]]).eigenvalues.tolist() == [-4.0]

    def test_lambda_max(self) -> None:
        """Test the convenience wrapper."""
        assert lambda_max(np.diag([-1.0, 5.0, 2.0])) == 5.0

    def test_diagonal_converges_immediately(self, caplog: pytest.LogCaptureFixture) -> None:
        """Test that a large diagonal matrix needs no rotations."""
        with caplog.at_level(logging.DEBUG, logger="invkit.numerics.linalg"):
            eig = sym_eig(np.diag([3.0e6, -2.0e6, 7.0]))
        assert "converged after 0 sweeps" in caplog.text
        assert eig.eigenvalues.tolist() == [3.0e6, 7.0, -2.0e6]

    def test_large_nearly_diagonal(self) -> None:
        """Test convergence when tiny couplings sit beside huge diagonal entries."""
        m = np.diag([1.0e6, 2.0e6, 3.0e6])
        m[0, 1] = m[1, 0] = 1e-3
        eig = sym_eig(m)
        assert eig.eigenvalues == pytest.approx([3.0e6, 2.0e6, 1.0e6])


class TestInertiaAndDefiniteness:
    """Tests for inertia counts and the tri-state definiteness test."""

    def test_lorenz_inertia(self) -> None:
        """Test the (n-1, 0, 1) pattern."""
        found = inertia(np.diag([1.0, 1.0, -1.0]))
        assert found.as_tuple() == (2, 0, 1)
        assert str(found) == "(2,0,1)"

    def test_zero_eigenvalue(self) -> None:
        """Test that exact zeros fall in the band."""
        assert inertia(np.diag([1.0, 0.0, -1.0])).as_tuple() == (1, 1, 1)

    def test_negative_definite(self) -> None:
        """Test a clearly negative matrix."""
        assert definiteness(-np.eye(2)) is Definiteness.NEG_SEMIDEFINITE

    def test_not_negative(self) -> None:
        """Test a clearly positive eigenvalue."""
        assert definiteness(np.diag([1.0, -1.0])) is Definiteness.NOT_NEG_SEMIDEFINITE

    def test_zero_matrix_is_marginal(self) -> None:
        """Test that lambda_1 = 0 sits inside the default band."""
        assert definiteness(np.zeros((2, 2))) is Definiteness.MARGINAL

    def test_zero_band_accepts_zero(self) -> None:
        """Test that psd_tol = 0 classifies lambda_1 = 0 as semidefinite."""
        assert definiteness(np.zeros((2, 2)), psd_tol=0.0) is Definiteness.NEG_SEMIDEFINITE

    def test_classify_margin(self) -> None:
        """Test the band edges."""
        assert classify_margin(-1.0, 0.5) is Definiteness.NEG_SEMIDEFINITE
        assert classify_margin(0.1, 0.5) is Definiteness.MARGINAL
        assert classify_margin(1.0, 0.5) is Definiteness.NOT_NEG_SEMIDEFINITE

    def test_sym_function_square_root(self) -> None:
        """Test applying sqrt through the spectrum."""
        m = np.array([[5.0, 4.0], [4.0, 5.0]])
        root = sym_function(m, np.sqrt)
        assert np.allclose(root @ root, m, atol=1e-10)


class TestSolve:
    """Tests for Gaussian elimination."""

    def test_vector_rhs(self) -> None:
        """Test a small system."""
        x = solve([[2.0, 1.0], [1.0, 3.0]], [3.0, 5.0])
        assert x == pytest.approx([0.8, 1.4])

    def test_matrix_rhs(self) -> None:
        """Test that the shape of the right-hand side is kept."""
        x = solve(np.diag([2.0, 4.0]), np.eye(2))
        assert x.shape == (2, 2)
        assert np.allclose(x, np.diag([0.5, 0.25]))

    def test_singular_raises(self) -> None:
        """Test that a rank-deficient matrix is rejected."""
        with pytest.raises(SingularMatrixError):
            solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 2.0])

    def test_wrong_rhs_length(self) -> None:
        """Test the row count check."""
        with pytest.raises(ShapeError):
            solve(np.eye(2), [1.0, 2.0, 3.0])

    def test_invert(self) -> None:
        """Test M^{-1} M = I."""
        m = np.array([[4.0, 7.0], [2.0, 6.0]])
        assert np.allclose(invert(m) @ m, np.eye(2), atol=1e-12)


class TestMatExp:
    """Tests for the matrix exponential."""

    def test_zero_matrix(self) -> None:
        """Test e^0 = I."""
        assert np.array_equal(mat_exp(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self) -> None:
        """Test a diagonal generator."""
        result = mat_exp(np.diag([1.0, 2.0]))
        assert np.allclose(result, np.diag([math.e, math.e**2]), rtol=1e-11)

    def test_quarter_turn(self) -> None:
        """Test that the rotation generator turns by t radians."""
        rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
        result = mat_exp(rotation, math.pi / 2)
        assert np.allclose(result, rotation, atol=1e-11)

    def test_matches_scipy(self) -> None:
        """Test agreement with scipy on a non-normal matrix."""
        scipy_linalg = pytest.importorskip("scipy.linalg")
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 4)) * 3.0
        expected = scipy_linalg.expm(0.7 * a)
        error = np.max(np.abs(mat_exp(a, 0.7) - expected)) / np.max(np.abs(expected))
        assert error < 1e-10

    def test_infinite_time_raises(self) -> None:
        """Test that t must be finite."""
        with pytest.raises(MatrixOverflowError):
            mat_exp(np.eye(2), math.inf)

    def test_scaling_budget(self) -> None:
        """Test that huge ||At|| is rejected before squaring."""
        with pytest.raises(MatrixOverflowError, match="scaling budget"):
            mat_exp(1e30 * np.eye(2))


# =============================================================================
# Randomized properties
# =============================================================================

SCALES = [1e-3, 1e-1, 1.0, 1e1, 1e3]


def random_symmetric_of(seed: int, scale: float) -> np.ndarray:
    """A symmetric matrix of random size 1..7 and entries of the given scale."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    m = rng.standard_normal((n, n)) * scale
    return m + m.T


@pytest.mark.slow
class TestSymEigProperties:
    """Randomized checks of the eigen-solver across sizes and magnitudes."""

    @pytest.mark.parametrize("scale", SCALES)
    @pytest.mark.parametrize("seed", range(60))
    def test_decomposition(self, seed: int, scale: float) -> None:
        """Test reconstruction, orthonormality and the LAPACK spectrum."""
        m = random_symmetric_of(seed, scale)
        n = m.shape[0]
        eig = sym_eig(m)
        u = eig.eigenvectors
        assert np.linalg.norm(eig.reconstruct() - m) <= 10.0 * DEFAULT_EIG_TOL * scale_of(m)
        assert np.allclose(u.T @ u, np.eye(n), atol=1e-10)
        expected = np.sort(np.linalg.eigvalsh(m))[::-1]
        assert np.allclose(eig.eigenvalues, expected, rtol=0.0, atol=1e-9 * scale_of(m))

    @pytest.mark.parametrize("scale", [1e-3, 1.0, 1e3])
    @pytest.mark.parametrize("seed", range(20))
    def test_matches_scipy_eigh(self, seed: int, scale: float) -> None:
        """Test agreement with scipy's symmetric solver."""
        scipy_linalg = pytest.importorskip("scipy.linalg")
        m = random_symmetric_of(seed, scale)
        expected = scipy_linalg.eigh(m, eigvals_only=True)[::-1]
        assert np.allclose(sym_eig(m).eigenvalues, expected, rtol=0.0, atol=1e-9 * scale_of(m))

    @pytest.mark.parametrize("seed", range(50))
    def test_inertia_under_congruence(self, seed: int) -> None:
        """Test that P^T M P keeps the inertia of M for nonsingular P."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        signs = rng.choice([-1.0, 0.0, 1.0], size=n)
        basis, _ = np.linalg.qr(rng.standard_normal((n, n)))
        m = basis @ np.diag(signs * rng.uniform(0.5, 2.0, size=n)) @ basis.T
        m = 0.5 * (m + m.T)
        p = np.eye(n) + 0.3 * rng.standard_normal((n, n)) / math.sqrt(n)
        congruent = p.T @ m @ p
        expected = (int(np.sum(signs > 0)), int(np.sum(signs == 0)), int(np.sum(signs < 0)))
        assert inertia(m).as_tuple() == expected
        assert inertia(0.5 * (congruent + congruent.T)).as_tuple() == expected


@pytest.mark.slow
class TestMatExpProperties:
    """Randomized checks of the matrix exponential."""

    @pytest.mark.parametrize("seed", range(40))
    def test_semigroup(self, seed: int) -> None:
        """Test e^{A(s+t)} = e^{As} e^{At}."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 6))
        a = rng.standard_normal((n, n))
        s, t = rng.uniform(0.0, 1.5, size=2)
        combined = mat_exp(a, float(s + t))
        product = mat_exp(a, float(s)) @ mat_exp(a, float(t))
        assert np.max(np.abs(combined - product)) <= 1e-9 * np.max(np.abs(combined))
