#!/usr/bin/env python3
"""
Information Measures
Shannon entropy and its grouping decomposition, von Neumann entropy, the
squared-deviation information measure of a single measurement, its sum over a
complete set of mutually unbiased bases, and the Haar-averaged variant
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, NamedTuple, Sequence

import numpy as np
from scipy.stats import entropy

from .config import EIGENVALUE_FLOOR, MIN_HAAR_TRIALS, MONTE_CARLO_CHUNK
from .errors import ValidationError
from .linalg import haar_unitaries
from .measurement import MubSet, Povm, eq1_povm, measurement_probabilities, povm_probabilities
from .probability import ProbabilityDistribution
from .state import DensityMatrix, purity

logger = logging.getLogger(__name__)

# Sub-seed prefixes keep the averaging and moment-check streams disjoint
_AVERAGE_STREAM = 0
_MOMENT_STREAM = 1

__all__ = [
    'ProbabilityDistribution',
    'GroupingDecomposition',
    'HaarAverage',
    'BasisMeasure',
    'InfoReport',
    'shannon_entropy',
    'grouping_decompose',
    'von_neumann_entropy',
    'square_sum',
    'bz_measure',
    'total_information',
    'shannon_sum',
    'bz_from_povm',
    'haar_average_bz',
    'haar_square_sum_moment',
    'haar_moment_oracle',
    'haar_closed_form',
    'info_report',
]


def shannon_entropy(p: ProbabilityDistribution) -> float:
    """H(p) = -sum p_i log2 p_i in bits, with 0 log 0 = 0"""
    h = float(entropy(p.p, base=2))
    return min(max(0.0, h), float(np.log2(p.n)))


class GroupingDecomposition(NamedTuple):
    """H(p) split as H(coarse) + sum_g w_g H(p restricted to g)"""

    coarse_bits: float
    conditional_bits: float
    total_bits: float


def _check_partition(partition: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    groups = [list(g) for g in partition]
    if not groups or any(len(g) == 0 for g in groups):
        raise ValidationError("malformed partition: groups must be non-empty")
    flat = [i for g in groups for i in g]
    if any(not isinstance(i, (int, np.integer)) or isinstance(i, bool) for i in flat):
        raise ValidationError("malformed partition: indices must be integers")
    if sorted(flat) != list(range(n)):
        raise ValidationError(f"malformed partition: groups must cover indices 0..{n - 1} exactly once, got {groups}")
    return groups


def grouping_decompose(p: ProbabilityDistribution, partition: Sequence[Sequence[int]]) -> GroupingDecomposition:
    """
    Grouping (recursion) form of the Shannon entropy

    Args:
        p: Fine-grained distribution
        partition: Disjoint index groups covering 0..n-1

    Returns:
        GroupingDecomposition whose ``total_bits`` reconstructs H(p)

    Raises:
        ValidationError: the partition is malformed
    """
    groups = _check_partition(partition, p.n)
    weights = np.array([p.p[g].sum() for g in groups])
    coarse = shannon_entropy(ProbabilityDistribution(weights / weights.sum()))

    conditional = 0.0
    for weight, group in zip(weights, groups):
        if weight == 0:
            continue  # an empty group contributes nothing
        within = p.p[group] / weight
        conditional += float(weight) * shannon_entropy(ProbabilityDistribution(within / within.sum()))

    return GroupingDecomposition(coarse, conditional, coarse + conditional)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -sum lambda_i log2 lambda_i over eigenvalues above 1e-12"""
    eigenvalues = rho.eigenvalues()
    kept = eigenvalues[eigenvalues > EIGENVALUE_FLOOR]
    s = float(-np.sum(kept * np.log2(kept)))
    return min(max(0.0, s), float(np.log2(rho.dim)))


def square_sum(p: ProbabilityDistribution) -> float:
    """Raw sum of squared probabilities"""
    return float(np.sum(p.p ** 2))


def bz_measure(p: ProbabilityDistribution, normalized: bool = False) -> float:
    """
    Information in one measurement: I(p) = sum (p_i - 1/n)^2

    Zero exactly for the uniform distribution, at most (n - 1)/n. With
    ``normalized`` the value is scaled by n/(n - 1) so a certain outcome gives 1.
    """
    n = p.n
    value = float(np.sum((p.p - 1 / n) ** 2))
    if normalized:
        value = value * n / (n - 1) if n > 1 else 0.0
    return value


def _check_dims(rho: DensityMatrix, dim: int):
    if rho.dim != dim:
        raise ValidationError(f"dimension mismatch: state has dim {rho.dim}, measurement has dim {dim}")


def total_information(rho: DensityMatrix, mubs: MubSet, normalized: bool = False) -> float:
    """
    Sum of I(p_j) over every basis of a complete MUB set

    Independent of which complete set is used and of unitary rotations of the
    state; equals Tr(rho^2) - 1/d (times d/(d - 1) when ``normalized``).
    """
    _check_dims(rho, mubs.dim)
    return float(sum(bz_measure(measurement_probabilities(rho, basis), normalized) for basis in mubs))


def shannon_sum(rho: DensityMatrix, mubs: MubSet) -> float:
    """Sum of Shannon entropies over every basis of a MUB set; depends on the set"""
    _check_dims(rho, mubs.dim)
    return float(sum(shannon_entropy(measurement_probabilities(rho, basis)) for basis in mubs))


def bz_from_povm(rho: DensityMatrix, povm: Povm, normalized: bool = False) -> float:
    """
    I applied to the outcome distribution of one POVM

    For the single POVM built from a complete MUB set this is
    (Tr(rho^2) - 1/d) / (d + 1)^2, which no unitary rotation of rho changes.
    """
    _check_dims(rho, povm.dim)
    return bz_measure(povm_probabilities(rho, povm), normalized)


class HaarAverage(NamedTuple):
    """Monte Carlo mean and its standard error"""

    estimate: float
    standard_error: float
    trials: int


def _haar_basis_probabilities(rho: DensityMatrix, seed: int, indices: range, prefix: int) -> np.ndarray:
    # Columns of each Haar unitary form the measurement basis
    u = haar_unitaries(rho.dim, seed, indices, prefix=(prefix,))
    probs = np.real(np.einsum('tki,kl,tli->ti', u.conj(), rho.matrix, u))
    return np.clip(probs, 0.0, 1.0)


def _haar_monte_carlo(rho: DensityMatrix, trials: int, seed: int, prefix: int, statistic) -> HaarAverage:
    if trials < MIN_HAAR_TRIALS:
        raise ValidationError(f"Haar average needs at least {MIN_HAAR_TRIALS} trials, got {trials}")

    values = np.empty(trials)
    for start in range(0, trials, MONTE_CARLO_CHUNK):
        indices = range(start, min(start + MONTE_CARLO_CHUNK, trials))
        probs = _haar_basis_probabilities(rho, seed, indices, prefix)
        values[start:start + len(indices)] = statistic(probs)

    mean = float(values.mean())
    standard_error = float(values.std(ddof=1) / np.sqrt(trials))
    return HaarAverage(mean, standard_error, trials)


def haar_average_bz(rho: DensityMatrix, trials: int, seed: int, normalized: bool = False) -> HaarAverage:
    """
    Average of I over measurement bases drawn from the Haar measure

    Trial ``i`` uses the basis ``haar_unitary(d, seed, (0, i))`` so the estimate
    does not depend on chunking or scheduling. Converges to
    (Tr(rho^2) + 1)/(d + 1) - 1/d.

    Args:
        rho: State to probe
        trials: Number of random bases, at least 100
        seed: 64-bit unsigned seed
        normalized: Apply the n/(n - 1) scaling to every sample

    Returns:
        HaarAverage(estimate, standard_error, trials)
    """
    d = rho.dim
    scale = d / (d - 1) if normalized else 1.0

    def statistic(probs: np.ndarray) -> np.ndarray:
        return scale * np.sum((probs - 1 / d) ** 2, axis=1)

    result = _haar_monte_carlo(rho, trials, seed, _AVERAGE_STREAM, statistic)
    logger.debug(f"Haar average over {trials} bases: {result.estimate:.6f} +/- {result.standard_error:.2e}")
    return result


def haar_square_sum_moment(rho: DensityMatrix, trials: int, seed: int) -> HaarAverage:
    """Independent Monte Carlo estimate of E[sum p_i^2] over Haar-random bases"""
    return _haar_monte_carlo(rho, trials, seed, _MOMENT_STREAM, lambda probs: np.sum(probs ** 2, axis=1))


def haar_moment_oracle(rho: DensityMatrix) -> float:
    """E[sum p_i^2] over Haar bases = (Tr(rho^2) + 1)/(d + 1)"""
    return (purity(rho) + 1) / (rho.dim + 1)


def haar_closed_form(rho: DensityMatrix, normalized: bool = False) -> float:
    """Limit of ``haar_average_bz``: (Tr(rho^2) + 1)/(d + 1) - 1/d"""
    d = rho.dim
    value = haar_moment_oracle(rho) - 1 / d
    return value * d / (d - 1) if normalized else value


@dataclass
class BasisMeasure:
    label: str
    shannon_bits: float
    bz_value: float
    probabilities: List[float] = field(default_factory=list)


@dataclass
class InfoReport:
    """Per-basis measures for one state and a complete MUB set, plus totals"""

    dim: int
    normalized: bool
    basis_measures: List[BasisMeasure]
    i_total: float
    shannon_sum: float
    von_neumann_bits: float
    purity: float
    povm_bz: float

    def to_dict(self) -> Dict:
        return asdict(self)

    def to_rows(self) -> List[Dict]:
        """One flat row per basis, totals repeated, for tabular output"""
        totals = {
            'i_total': self.i_total,
            'shannon_sum': self.shannon_sum,
            'von_neumann_bits': self.von_neumann_bits,
            'purity': self.purity,
            'povm_bz': self.povm_bz,
        }
        return [
            {'label': m.label, 'shannon_bits': m.shannon_bits, 'bz_value': m.bz_value, **totals}
            for m in self.basis_measures
        ]


def info_report(rho: DensityMatrix, mubs: MubSet, normalized: bool = False) -> InfoReport:
    """Collect every measure for ``rho`` against the complete set ``mubs``"""
    _check_dims(rho, mubs.dim)
    measures = []
    for basis in mubs:
        p = measurement_probabilities(rho, basis)
        measures.append(BasisMeasure(basis.label, shannon_entropy(p), bz_measure(p, normalized), p.to_list()))

    return InfoReport(
        dim=rho.dim,
        normalized=normalized,
        basis_measures=measures,
        i_total=float(sum(m.bz_value for m in measures)),
        shannon_sum=float(sum(m.shannon_bits for m in measures)),
        von_neumann_bits=von_neumann_entropy(rho),
        purity=purity(rho),
        povm_bz=bz_from_povm(rho, eq1_povm(mubs), normalized),
    )
