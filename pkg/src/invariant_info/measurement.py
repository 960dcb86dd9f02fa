#!/usr/bin/env python3
"""
Measurement Module
Projective measurements, complete sets of mutually unbiased bases (MUBs),
the single POVM assembled from a full MUB set, and sequential measurement
with the Lueders update rule
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import SUPPORTED_MUB_DIMS, VALIDATION_TOL
from .errors import UnsupportedDimensionError, ValidationError
from .linalg import as_complex_matrix, hermitian_eig, hermiticity_residual, haar_unitary, max_abs_distance
from .probability import ProbabilityDistribution, clamp_probabilities
from .state import PAULIS, DensityMatrix

logger = logging.getLogger(__name__)

_SQRT_HALF = 1 / np.sqrt(2)

# Eigenbases of sigma_z, sigma_x, sigma_y as columns (spin along three orthogonal axes)
_QUBIT_BASES = (
    ('z', np.array([[1, 0], [0, 1]], dtype=complex)),
    ('x', np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF),
    ('y', np.array([[1, 1], [1j, -1j]], dtype=complex) * _SQRT_HALF),
)


def _check_dims(rho: DensityMatrix, dim: int, what: str):
    if rho.dim != dim:
        raise ValidationError(f"dimension mismatch: state has dim {rho.dim}, {what} has dim {dim}")


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """
    Orthonormal basis of one observable

    ``basis`` holds the basis vectors as columns; outcome ``i`` corresponds to
    projector |b_i><b_i|.
    """

    basis: np.ndarray
    label: str = ''
    outcome_labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        basis = as_complex_matrix(self.basis, f"basis {self.label!r}")
        gram_error = max_abs_distance(basis.conj().T @ basis, np.eye(basis.shape[0]))
        if gram_error > VALIDATION_TOL:
            raise ValidationError(f"basis {self.label!r} is not orthonormal: residual {gram_error:.3e}")

        completeness_error = max_abs_distance(self._projector_sum(basis), np.eye(basis.shape[0]))
        if completeness_error > VALIDATION_TOL:
            raise ValidationError(
                f"projectors of basis {self.label!r} do not sum to I: residual {completeness_error:.3e}"
            )

        outcome_labels = tuple(self.outcome_labels) or tuple(
            f"{self.label}{i}" if self.label else str(i) for i in range(basis.shape[0])
        )
        if len(outcome_labels) != basis.shape[0]:
            raise ValidationError(f"{len(outcome_labels)} outcome labels for a {basis.shape[0]}-outcome basis")

        basis.setflags(write=False)
        object.__setattr__(self, 'basis', basis)
        object.__setattr__(self, 'outcome_labels', outcome_labels)

    @staticmethod
    def _projector_sum(basis: np.ndarray) -> np.ndarray:
        return np.einsum('ik,jk->ij', basis, basis.conj())

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def vectors(self) -> Tuple[np.ndarray, ...]:
        return tuple(self.basis[:, i] for i in range(self.dim))

    def projectors(self) -> np.ndarray:
        """Stack of rank-1 projectors, shape (d, d, d)"""
        return np.einsum('ik,jk->kij', self.basis, self.basis.conj())

    def rotated(self, u) -> 'ProjectiveMeasurement':
        """Basis vectors mapped to U |b_i>"""
        u = as_complex_matrix(u, 'unitary')
        return ProjectiveMeasurement(u @ self.basis, self.label, self.outcome_labels)


def _max_cross_overlap_error(a: ProjectiveMeasurement, b: ProjectiveMeasurement) -> float:
    overlaps = np.abs(a.basis.conj().T @ b.basis) ** 2
    return float(np.max(np.abs(overlaps - 1 / a.dim)))


@dataclass(frozen=True)
class MubSet:
    """Complete set of d + 1 pairwise mutually unbiased bases"""

    bases: Tuple[ProjectiveMeasurement, ...]

    def __post_init__(self):
        bases = tuple(self.bases)
        if not bases:
            raise ValidationError("a MUB set needs at least one basis")
        dim = bases[0].dim
        if any(b.dim != dim for b in bases):
            raise ValidationError("all bases of a MUB set must share one dimension")
        if len(bases) != dim + 1:
            raise ValidationError(f"a complete MUB set in dim {dim} has {dim + 1} bases, got {len(bases)}")

        for i in range(len(bases)):
            for j in range(i + 1, len(bases)):
                error = _max_cross_overlap_error(bases[i], bases[j])
                if error > VALIDATION_TOL:
                    raise ValidationError(
                        f"bases {bases[i].label!r} and {bases[j].label!r} are not unbiased: residual {error:.3e}"
                    )
        object.__setattr__(self, 'bases', bases)

    @property
    def dim(self) -> int:
        return self.bases[0].dim

    def __len__(self) -> int:
        return len(self.bases)

    def __iter__(self):
        return iter(self.bases)

    def __getitem__(self, index: int) -> ProjectiveMeasurement:
        return self.bases[index]

    def rotated(self, u) -> 'MubSet':
        """Every basis vector mapped to U |b>"""
        return MubSet(tuple(b.rotated(u) for b in self.bases))

    def max_overlap_error(self) -> float:
        """Largest deviation of any cross-basis |<e_i|f_j>|^2 from 1/d"""
        worst = 0.0
        for i in range(len(self.bases)):
            for j in range(i + 1, len(self.bases)):
                worst = max(worst, _max_cross_overlap_error(self.bases[i], self.bases[j]))
        return worst


def _qubit_mubs() -> MubSet:
    return MubSet(tuple(
        ProjectiveMeasurement(basis, axis, (f"{axis}+", f"{axis}-")) for axis, basis in _QUBIT_BASES
    ))


def _odd_prime_mubs(dim: int) -> MubSet:
    # Basis a, vector b: components omega^(a k^2 + b k) / sqrt(d), plus the computational basis
    k = np.arange(dim)
    omega = np.exp(2j * np.pi / dim)
    bases = [ProjectiveMeasurement(np.eye(dim, dtype=complex), 'computational',
                                   tuple(f"c{i}" for i in range(dim)))]
    for a in range(dim):
        exponents = (a * k[:, np.newaxis] ** 2 + k[:, np.newaxis] * k[np.newaxis, :]) % dim
        columns = omega ** exponents / np.sqrt(dim)
        bases.append(ProjectiveMeasurement(columns, f"q{a}", tuple(f"q{a}.{b}" for b in range(dim))))
    return MubSet(tuple(bases))


def mub_set(dim: int, seed: Optional[int] = None) -> MubSet:
    """
    Complete set of mutually unbiased bases for a prime dimension

    Args:
        dim: One of 2, 3, 5, 7, 11, 13
        seed: None for the canonical set; otherwise the canonical set rotated
            by ``haar_unitary(dim, seed)``

    Returns:
        MubSet of dim + 1 bases. For dim 2 the bases are the z, x, y spin
        eigenbases in that order.

    Raises:
        UnsupportedDimensionError: dim is not in the supported set
    """
    if dim not in SUPPORTED_MUB_DIMS:
        raise UnsupportedDimensionError(
            f"complete MUB set not provided for this dimension: {dim} "
            f"(supported: {', '.join(str(d) for d in SUPPORTED_MUB_DIMS)})"
        )
    canonical = _qubit_mubs() if dim == 2 else _odd_prime_mubs(dim)
    if seed is None:
        return canonical
    logger.debug(f"Rotating canonical MUB set (dim={dim}) with seed {seed}")
    return canonical.rotated(haar_unitary(dim, seed))


def qubit_rotation(axis: Sequence[float], angle: float) -> np.ndarray:
    """exp(-i angle n.sigma / 2) for the unit vector n along ``axis``"""
    n = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(n)
    if n.shape != (3,) or norm == 0:
        raise ValidationError(f"rotation axis must be a non-zero 3-vector, got {axis!r}")
    n = n / norm
    generator = sum(component * pauli for component, pauli in zip(n, PAULIS))
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * generator


def eigenbasis_measurement(rho: DensityMatrix) -> ProjectiveMeasurement:
    """Measurement in the basis that diagonalises ``rho`` (ascending eigenvalues)"""
    eigenvectors = hermitian_eig(rho.matrix).eigenvectors
    return ProjectiveMeasurement(eigenvectors, 'eigenbasis')


def measurement_probabilities(rho: DensityMatrix, m: ProjectiveMeasurement) -> ProbabilityDistribution:
    """
    Born-rule distribution p_i = <b_i|rho|b_i>

    Raises:
        ValidationError: dimension mismatch
        ConsistencyError: probabilities cannot be reconciled with a distribution
    """
    _check_dims(rho, m.dim, f"measurement {m.label!r}")
    raw = np.real(np.einsum('ki,kl,li->i', m.basis.conj(), rho.matrix, m.basis))
    return clamp_probabilities(raw, m.outcome_labels, context=f"measurement {m.label!r}")


@dataclass(frozen=True)
class Povm:
    """Positive operators E_k summing to the identity"""

    elements: np.ndarray
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        elements = np.array(self.elements, dtype=complex)
        if elements.ndim != 3 or elements.shape[1] != elements.shape[2] or elements.shape[0] == 0:
            raise ValidationError(f"POVM elements must have shape (n, d, d), got {elements.shape}")
        if not np.all(np.isfinite(elements)):
            raise ValidationError("POVM elements contain NaN or Inf entries")

        for k, element in enumerate(elements):
            asymmetry = hermiticity_residual(element)
            if asymmetry > VALIDATION_TOL:
                raise ValidationError(f"POVM element {k} is not Hermitian: asymmetry {asymmetry:.3e}")
            lowest = float(hermitian_eig(element).eigenvalues[0])
            if lowest < -VALIDATION_TOL:
                raise ValidationError(f"POVM element {k} has negative eigenvalue {lowest:.3e}")

        completeness_error = max_abs_distance(elements.sum(axis=0), np.eye(elements.shape[1]))
        if completeness_error > VALIDATION_TOL:
            raise ValidationError(f"POVM elements do not sum to I: residual {completeness_error:.3e}")

        labels = tuple(self.labels) or tuple(str(k) for k in range(elements.shape[0]))
        if len(labels) != elements.shape[0]:
            raise ValidationError(f"{len(labels)} labels for {elements.shape[0]} POVM elements")

        elements.setflags(write=False)
        object.__setattr__(self, 'elements', elements)
        object.__setattr__(self, 'labels', labels)

    @property
    def dim(self) -> int:
        return int(self.elements.shape[1])

    def __len__(self) -> int:
        return int(self.elements.shape[0])

    def completeness_residual(self) -> float:
        return max_abs_distance(self.elements.sum(axis=0), np.eye(self.dim))


def eq1_povm(mubs: MubSet) -> Povm:
    """
    Single POVM made of every MUB projector scaled by 1/(d + 1)

    The sum of d + 1 completeness relations divided by d + 1 is again the
    identity. Outcomes are ordered basis by basis in MubSet order; for the
    canonical qubit set that is z+, z-, x+, x-, y+, y-.
    """
    scale = 1 / (mubs.dim + 1)
    elements = np.concatenate([basis.projectors() for basis in mubs]) * scale
    labels = tuple(label for basis in mubs for label in basis.outcome_labels)
    return Povm(elements, labels)


def povm_probabilities(rho: DensityMatrix, povm: Povm) -> ProbabilityDistribution:
    """q_k = Tr(E_k rho)"""
    _check_dims(rho, povm.dim, 'POVM')
    raw = np.real(np.einsum('kij,ji->k', povm.elements, rho.matrix))
    return clamp_probabilities(raw, povm.labels, context='POVM', renormalize_tol=VALIDATION_TOL)


@dataclass(frozen=True)
class JointDistribution:
    """p(a, b) for a first measurement with outcome a followed by a second with outcome b"""

    joint: np.ndarray
    first_labels: Tuple[str, ...]
    second_labels: Tuple[str, ...]

    def first_marginal(self) -> ProbabilityDistribution:
        return clamp_probabilities(self.joint.sum(axis=1), self.first_labels, context='first marginal')

    def second_marginal(self) -> ProbabilityDistribution:
        return clamp_probabilities(self.joint.sum(axis=0), self.second_labels, context='second marginal')

    def flattened(self) -> ProbabilityDistribution:
        labels = tuple(f"{a}->{b}" for a in self.first_labels for b in self.second_labels)
        return clamp_probabilities(self.joint.reshape(-1), labels, context='joint')


def sequential_measure(rho: DensityMatrix, first: ProjectiveMeasurement,
                       second: ProjectiveMeasurement) -> JointDistribution:
    """
    Two projective measurements in sequence with the Lueders update

    p(a, b) = <b_b| P_a rho P_a |b_b>, i.e. the probability of outcome a times
    the probability of b in the collapsed state P_a rho P_a / p_a.
    """
    _check_dims(rho, first.dim, f"measurement {first.label!r}")
    _check_dims(rho, second.dim, f"measurement {second.label!r}")

    projectors = first.projectors()
    collapsed = np.einsum('aij,jk,akl->ail', projectors, rho.matrix, projectors)
    joint = np.real(np.einsum('kb,akl,lb->ab', second.basis.conj(), collapsed, second.basis))
    joint = np.clip(joint, 0.0, None)
    joint.setflags(write=False)
    return JointDistribution(joint, first.outcome_labels, second.outcome_labels)
