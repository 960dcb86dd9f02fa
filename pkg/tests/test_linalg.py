"""
Tests for the dense complex matrix kernel
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from invariant_info.config import UNITARITY_TOL
from invariant_info.errors import ValidationError
from invariant_info.linalg import (
    adjoint,
    frobenius_distance,
    haar_unitaries,
    haar_unitary,
    hermitian_eig,
    multiply,
    outer_product,
    substream,
    trace,
    unitarity_residual,
)
from invariant_info.state import PAULI_X, PAULI_Z


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return x + x.conj().T


class TestMatrixArithmetic:
    def test_trace_of_identity(self):
        assert trace(np.eye(3)) == pytest.approx(3.0)

    def test_trace_is_cyclic(self):
        a = random_hermitian(4, 1) + 1j * np.eye(4)
        b = random_hermitian(4, 2)
        assert trace(multiply(a, b)) == pytest.approx(trace(multiply(b, a)), abs=1e-12)

    def test_outer_product(self):
        assert_allclose(outer_product([1, 0]), [[1, 0], [0, 0]])

    def test_adjoint(self):
        a = np.array([[1, 2j], [3, 4]])
        assert_allclose(adjoint(a), [[1, 3], [-2j, 4]])

    def test_frobenius_distance(self):
        assert frobenius_distance(np.eye(2), np.eye(2)) == 0.0
        assert frobenius_distance(np.eye(2), np.zeros((2, 2))) == pytest.approx(np.sqrt(2))

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="dimension mismatch"):
            multiply(np.eye(2), np.eye(3))

    def test_rejects_non_square(self):
        with pytest.raises(ValidationError, match="square"):
            trace(np.ones((2, 3)))

    def test_rejects_oversized(self):
        with pytest.raises(ValidationError, match="outside"):
            trace(np.eye(17))


class TestHermitianEig:
    def test_identity(self):
        values, vectors = hermitian_eig(np.eye(2))
        assert_allclose(values, [1, 1])
        assert_allclose(vectors.conj().T @ vectors, np.eye(2), atol=1e-12)

    def test_pauli_z(self):
        values, _ = hermitian_eig(PAULI_Z)
        assert_allclose(values, [-1, 1])

    def test_pauli_x_eigenvector(self):
        values, vectors = hermitian_eig(PAULI_X)
        assert_allclose(values, [-1, 1], atol=1e-12)
        minus = np.array([1, -1]) / np.sqrt(2)
        assert abs(np.vdot(minus, vectors[:, 0])) == pytest.approx(1.0)

    @pytest.mark.parametrize('dim', [2, 3, 5, 8])
    def test_reconstruction(self, dim):
        a = random_hermitian(dim, dim)
        values, vectors = hermitian_eig(a)
        assert np.all(np.diff(values) >= 0)
        assert_allclose(vectors @ np.diag(values) @ vectors.conj().T, a, atol=1e-10)
        assert_allclose(vectors.conj().T @ vectors, np.eye(dim), atol=1e-10)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="max asymmetry"):
            hermitian_eig([[0, 1], [0, 0]])

    def test_gram_matrix_is_positive(self):
        rng = np.random.default_rng(3)
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        values, _ = hermitian_eig(g @ g.conj().T)
        assert values.min() >= -1e-10


class TestHaarUnitary:
    @pytest.mark.parametrize('dim', [2, 3, 7, 16])
    def test_unitary(self, dim):
        for seed in range(5):
            assert unitarity_residual(haar_unitary(dim, seed)) <= UNITARITY_TOL * dim

    def test_deterministic(self):
        assert_allclose(haar_unitary(3, 42, (1, 7)), haar_unitary(3, 42, (1, 7)), rtol=0, atol=0)

    def test_streams_differ(self):
        assert frobenius_distance(haar_unitary(3, 42, (1, 7)), haar_unitary(3, 42, (1, 8))) > 1e-3

    def test_stack_matches_single_draws(self):
        stack = haar_unitaries(3, 11, range(5), prefix=(2,))
        for i in range(5):
            assert_allclose(stack[i], haar_unitary(3, 11, (2, i)), atol=1e-12)

    def test_empty_stack(self):
        assert haar_unitaries(2, 0, range(0)).shape == (0, 2, 2)

    @pytest.mark.parametrize('dim', [1, 17])
    def test_dimension_range(self, dim):
        with pytest.raises(ValidationError, match="outside"):
            haar_unitary(dim, 0)

    def test_first_entry_moment(self):
        # |U_00|^2 is uniform on [0, 1] for d = 2
        u = haar_unitaries(2, 7, range(100_000))
        assert np.mean(np.abs(u[:, 0, 0]) ** 2) == pytest.approx(0.5, abs=0.005)


class TestSubstream:
    def test_reproducible(self):
        assert substream(5, (1, 2)).random() == substream(5, (1, 2)).random()

    @pytest.mark.parametrize('seed', [-1, 2 ** 64, 1.5, True])
    def test_rejects_bad_seed(self, seed):
        with pytest.raises(ValidationError):
            substream(seed)
