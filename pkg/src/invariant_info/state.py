#!/usr/bin/env python3
"""
Density Matrix Module
Construction, validation and qubit Bloch-vector conversions for quantum states
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from .config import EIGENVALUE_FLOOR, VALIDATION_TOL
from .errors import ValidationError
from .linalg import as_complex_matrix, conjugate_by, ginibre, hermitian_eig, hermiticity_residual, substream

logger = logging.getLogger(__name__)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class StateCheck(NamedTuple):
    """Measured residuals for the three density-matrix invariants"""

    dim: int
    hermiticity: float
    trace_error: float
    min_eigenvalue: float

    @property
    def violations(self) -> Tuple[str, ...]:
        found = []
        if self.hermiticity > VALIDATION_TOL:
            found.append(f"not Hermitian: max asymmetry {self.hermiticity:.3e} > {VALIDATION_TOL:.0e}")
        if self.trace_error > VALIDATION_TOL:
            found.append(f"trace off by {self.trace_error:.3e} > {VALIDATION_TOL:.0e}")
        if self.min_eigenvalue < -VALIDATION_TOL:
            found.append(f"negative eigenvalue {self.min_eigenvalue:.3e} < -{VALIDATION_TOL:.0e}")
        return tuple(found)

    @property
    def valid(self) -> bool:
        return not self.violations


def check_density(m) -> StateCheck:
    """
    Measure how far ``m`` is from a valid density matrix without raising

    The positivity residual is taken from the Hermitian part, so a
    non-Hermitian input still reports all three numbers.
    """
    matrix = as_complex_matrix(m, 'density matrix')
    asymmetry = hermiticity_residual(matrix)
    trace_error = abs(complex(np.trace(matrix)) - 1)
    hermitian_part = (matrix + matrix.conj().T) / 2
    min_eigenvalue = float(hermitian_eig(hermitian_part).eigenvalues[0])
    return StateCheck(matrix.shape[0], asymmetry, float(trace_error), min_eigenvalue)


@dataclass(frozen=True)
class DensityMatrix:
    """Positive semidefinite, unit-trace Hermitian matrix; immutable once built"""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix, 'density matrix')
        check = check_density(matrix)
        if not check.valid:
            raise ValidationError("invalid density matrix: " + "; ".join(check.violations))
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eig(self.matrix).eigenvalues

    def rank(self) -> int:
        return int(np.sum(self.eigenvalues() > EIGENVALUE_FLOOR))

    def rotated(self, u) -> 'DensityMatrix':
        """U rho U^dagger"""
        return DensityMatrix(conjugate_by(u, self.matrix))


def density_from_matrix(m) -> DensityMatrix:
    """Validate ``m`` as a density matrix; every violated invariant is reported"""
    return DensityMatrix(m)


def maximally_mixed(dim: int) -> DensityMatrix:
    """I / d"""
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def pure_state(vector: Sequence[complex]) -> DensityMatrix:
    """|psi><psi| for the normalised ``vector``"""
    v = np.asarray(vector, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("cannot build a pure state from the zero vector")
    v = v / norm
    return DensityMatrix(np.outer(v, v.conj()))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), in [1/d, 1]"""
    m = rho.matrix
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


@dataclass(frozen=True)
class BlochVector:
    """Qubit Bloch vector r with |r| <= 1"""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = self.norm
        if not np.isfinite(norm):
            raise ValidationError("Bloch vector contains NaN or Inf components")
        if norm > 1 + VALIDATION_TOL:
            raise ValidationError(f"Bloch vector norm {norm:.12f} exceeds 1")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


def bloch_to_density(r: BlochVector) -> DensityMatrix:
    """(I + r . sigma) / 2"""
    matrix = np.eye(2, dtype=complex)
    for component, pauli in zip(r.as_array(), PAULIS):
        matrix = matrix + component * pauli
    return DensityMatrix(matrix / 2)


def density_to_bloch(rho: DensityMatrix) -> BlochVector:
    """r_k = Tr(rho sigma_k); qubits only"""
    if rho.dim != 2:
        raise ValidationError(f"Bloch vectors are defined for qubits only, got dim {rho.dim}")
    components = [float(np.real(np.trace(rho.matrix @ pauli))) for pauli in PAULIS]
    return BlochVector(*components)


def random_density(dim: int, rank: int, seed: int, stream: Sequence[int] = ()) -> DensityMatrix:
    """
    Random state of the requested rank: rho = G G^dagger / Tr(G G^dagger)

    Args:
        dim: Hilbert-space dimension
        rank: Number of columns of the Ginibre factor G, 1..dim
        seed: 64-bit unsigned seed
        stream: Optional sub-seed key

    Returns:
        DensityMatrix of rank ``rank`` (almost surely)
    """
    if dim < 1:
        raise ValidationError(f"dimension must be positive, got {dim}")
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank {rank} outside 1..{dim}")

    g = ginibre(dim, rank, substream(seed, stream))
    gram = g @ g.conj().T
    gram = (gram + gram.conj().T) / 2
    return DensityMatrix(gram / np.real(np.trace(gram)))
