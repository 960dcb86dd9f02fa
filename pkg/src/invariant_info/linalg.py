#!/usr/bin/env python3
"""
Dense Complex Matrix Kernel
Small-matrix helpers, Hermitian eigendecomposition and Haar-random unitaries

Matrices are plain ``numpy`` complex128 arrays of shape (d, d) with
1 <= d <= 16. Random draws use numpy's PCG64 generator seeded through
``SeedSequence(seed, spawn_key=stream)`` so that trial ``i`` of a sweep always
sees the same numbers no matter how the trials are scheduled.
"""

import logging
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from .config import MAX_DIM, MIN_DIM, VALIDATION_TOL
from .errors import NumericError, ValidationError

logger = logging.getLogger(__name__)

_SEED_LIMIT = 2 ** 64


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and the matching orthonormal eigenvector columns"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(a, name: str = 'matrix') -> np.ndarray:
    """
    Coerce ``a`` to a validated square complex128 array

    Args:
        a: Anything ``numpy.asarray`` accepts
        name: Label used in error messages

    Returns:
        A new (d, d) complex array

    Raises:
        ValidationError: wrong shape, d > 16, or non-finite entries
    """
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if not 1 <= m.shape[0] <= MAX_DIM:
        raise ValidationError(f"{name} dimension {m.shape[0]} outside 1..{MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return m


def as_vector(v, name: str = 'vector') -> np.ndarray:
    """Coerce ``v`` to a finite 1-D complex128 array"""
    vec = np.array(v, dtype=complex)
    if vec.ndim != 1 or vec.size == 0:
        raise ValidationError(f"{name} must be a non-empty 1-D array, got shape {vec.shape}")
    if vec.size > MAX_DIM:
        raise ValidationError(f"{name} length {vec.size} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(vec)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return vec


def _check_conforming(a: np.ndarray, b: np.ndarray, op: str):
    if a.shape != b.shape:
        raise ValidationError(f"{op}: dimension mismatch {a.shape} vs {b.shape}")


def multiply(a, b) -> np.ndarray:
    """Matrix product ``a @ b`` of two conforming square matrices"""
    a = as_complex_matrix(a, 'left operand')
    b = as_complex_matrix(b, 'right operand')
    _check_conforming(a, b, 'multiply')
    return a @ b


def adjoint(a) -> np.ndarray:
    """Conjugate transpose"""
    return as_complex_matrix(a).conj().T


def trace(a) -> complex:
    """Sum of the diagonal"""
    return complex(np.trace(as_complex_matrix(a)))


def outer_product(vector) -> np.ndarray:
    """Rank-1 operator |v><v|"""
    v = as_vector(vector)
    return np.outer(v, v.conj())


def frobenius_distance(a, b) -> float:
    """Frobenius norm of ``a - b``"""
    a = as_complex_matrix(a, 'left operand')
    b = as_complex_matrix(b, 'right operand')
    _check_conforming(a, b, 'frobenius_distance')
    return float(np.linalg.norm(a - b, 'fro'))


def max_abs_distance(a, b) -> float:
    """Largest elementwise modulus of ``a - b``"""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_conforming(a, b, 'max_abs_distance')
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def conjugate_by(u, a) -> np.ndarray:
    """U A U^dagger"""
    u = as_complex_matrix(u, 'unitary')
    a = as_complex_matrix(a)
    _check_conforming(u, a, 'conjugate_by')
    return u @ a @ u.conj().T


def hermiticity_residual(a) -> float:
    """max |A - A^dagger| over all entries"""
    m = np.asarray(a, dtype=complex)
    return max_abs_distance(m, m.conj().T)


def unitarity_residual(u) -> float:
    """max |U U^dagger - I| over all entries"""
    m = np.asarray(u, dtype=complex)
    return max_abs_distance(m @ m.conj().T, np.eye(m.shape[0]))


def hermitian_eig(a) -> EigenDecomposition:
    """
    Eigendecomposition of a Hermitian matrix

    Args:
        a: Hermitian matrix (elementwise asymmetry at most 1e-10)

    Returns:
        EigenDecomposition with eigenvalues ascending and orthonormal columns

    Raises:
        ValidationError: the input is not Hermitian within tolerance
        NumericError: LAPACK failed to converge
    """
    m = as_complex_matrix(a)
    asymmetry = hermiticity_residual(m)
    if asymmetry > VALIDATION_TOL:
        raise ValidationError(
            f"matrix is not Hermitian: max asymmetry {asymmetry:.3e} > {VALIDATION_TOL:.0e}"
        )

    # Drop the rounding-level anti-Hermitian part before handing to LAPACK
    m = (m + m.conj().T) / 2
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Hermitian eigensolver did not converge: {e}") from e

    return EigenDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < _SEED_LIMIT:
        raise ValidationError(f"seed {seed} is not a 64-bit unsigned integer")
    return seed


def substream(seed: int, stream: Sequence[int] = ()) -> np.random.Generator:
    """
    Independent PCG64 generator for ``(seed, *stream)``

    The same (seed, stream) pair always yields the same sequence, and distinct
    stream keys give statistically independent sequences.
    """
    seed = _check_seed(seed)
    key = tuple(int(k) for k in stream)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix of i.i.d. standard complex Gaussians, E|z|^2 = 1"""
    real = rng.standard_normal((rows, cols))
    imag = rng.standard_normal((rows, cols))
    return (real + 1j * imag) / np.sqrt(2)


def _check_haar_dim(dim: int):
    if not MIN_DIM <= dim <= MAX_DIM:
        raise ValidationError(f"Haar unitary dimension {dim} outside {MIN_DIM}..{MAX_DIM}")


def _orthonormalize(z: np.ndarray) -> np.ndarray:
    # QR with the diagonal of R made real positive gives exact Haar measure
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., np.newaxis, :]


def haar_unitary(dim: int, seed: int, stream: Sequence[int] = ()) -> np.ndarray:
    """
    Haar-distributed unitary, deterministic in ``(dim, seed, stream)``

    Args:
        dim: Matrix dimension, 2..16
        seed: 64-bit unsigned seed
        stream: Optional sub-seed key, e.g. ``(purpose, trial)``

    Returns:
        (dim, dim) unitary array
    """
    _check_haar_dim(dim)
    z = ginibre(dim, dim, substream(seed, stream))
    return _orthonormalize(z[np.newaxis])[0]


def haar_unitaries(dim: int, seed: int, indices: Sequence[int], prefix: Tuple[int, ...] = ()) -> np.ndarray:
    """
    Stack of Haar unitaries, slice ``k`` drawn from stream ``(*prefix, indices[k])``

    Equivalent to calling ``haar_unitary(dim, seed, (*prefix, i))`` for each
    index, with the QR step vectorised over the stack.
    """
    _check_haar_dim(dim)
    if len(indices) == 0:
        return np.empty((0, dim, dim), dtype=complex)
    z = np.stack([ginibre(dim, dim, substream(seed, (*prefix, i))) for i in indices])
    logger.debug(f"Drawing {len(indices)} Haar unitaries (dim={dim}, seed={seed}, prefix={prefix})")
    return _orthonormalize(z)
