#!/usr/bin/env python3
"""
Experiment Runners
Seeded, replayable checks that turn the claims about the invariant information
measure into pass/fail reports

Every runner is a pure function of its ExperimentConfig: trial ``i`` draws all
of its randomness from sub-streams keyed by ``(purpose, i)``, so results do not
depend on the number of worker threads or their scheduling.
"""

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from scipy.stats import entropy

from .config import (
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_TRIALS,
    MAX_DIM,
    MIN_CONVERGENCE_TRIALS,
    MIN_DIM,
    RANDOM_BASES_PER_TRIAL,
    SIGMA_BAND,
    SUPPORTED_MUB_DIMS,
    WITNESS_ANGLE,
    WITNESS_AXIS,
    WITNESS_MIN_GAP_BITS,
)
from .errors import UnsupportedDimensionError, ValidationError
from .infomeasure import (
    bz_from_povm,
    bz_measure,
    grouping_decompose,
    haar_average_bz,
    haar_closed_form,
    haar_moment_oracle,
    haar_square_sum_moment,
    shannon_entropy,
    shannon_sum,
    total_information,
    von_neumann_entropy,
)
from .linalg import haar_unitaries, haar_unitary, substream
from .measurement import (
    eigenbasis_measurement,
    eq1_povm,
    measurement_probabilities,
    mub_set,
    qubit_rotation,
    sequential_measure,
)
from .probability import ProbabilityDistribution
from .state import DensityMatrix, maximally_mixed, pure_state, purity, random_density

logger = logging.getLogger(__name__)

# Sub-stream purposes
_STATE = 0
_ROTATION_A = 1
_ROTATION_B = 2
_RANDOM_BASES = 3
_CLASSICAL = 4

CRITERION_MAX_RESIDUAL = 'max_residual'
CRITERION_SIGMA_BAND = 'sigma_band'


@dataclass(frozen=True)
class ExperimentConfig:
    """Inputs of one experiment run; ``trials`` defaults per experiment"""

    name: str
    dim: int = 2
    trials: Optional[int] = None
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    workers: int = 1

    def __post_init__(self):
        if self.name not in DEFAULT_TRIALS:
            raise ValidationError(f"unknown experiment {self.name!r}; expected one of {', '.join(DEFAULT_TRIALS)}")
        if self.trials is None:
            object.__setattr__(self, 'trials', DEFAULT_TRIALS[self.name])
        if self.trials < 1:
            raise ValidationError(f"trials must be at least 1, got {self.trials}")
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError(f"seed {self.seed} is not a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValidationError(f"workers must be at least 1, got {self.workers}")

    def describe(self) -> Dict:
        """The fields that determine the result (the worker count does not)"""
        return {
            'name': self.name,
            'dim': self.dim,
            'trials': self.trials,
            'seed': self.seed,
            'tolerance': self.tolerance,
        }


@dataclass
class TrialRecord:
    """
    One trial: what went in, what was measured, and how far it was from theory

    ``band`` is set for Monte Carlo records: the allowed deviation is then
    ``max(band, tolerance)`` instead of ``tolerance``.
    """

    index: int
    case: str
    inputs_digest: str
    values: Dict[str, float]
    residuals: Dict[str, float]
    band: Optional[float] = None

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    def passes(self, tolerance: float) -> bool:
        allowed = tolerance if self.band is None else max(self.band, tolerance)
        return self.max_residual <= allowed


@dataclass
class ExperimentResult:
    name: str
    passed: bool
    criterion: str
    config: Dict
    records: List[TrialRecord]
    summary: Dict = field(default_factory=dict)

    def recompute_passed(self) -> bool:
        """Pass flag derived again from the per-trial records alone"""
        tolerance = self.config['tolerance']
        return all(record.passes(tolerance) for record in self.records)

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'passed': self.passed,
            'criterion': self.criterion,
            'config': self.config,
            'summary': self.summary,
            'records': [asdict(r) for r in self.records],
        }

    def to_rows(self) -> List[Dict]:
        """One summary row per trial; keys ordered trial info, values, residuals"""
        rows = []
        for r in self.records:
            row = {
                'experiment': self.name,
                'trial': r.index,
                'case': r.case,
                'inputs_digest': r.inputs_digest,
                'max_residual': r.max_residual,
                'band': r.band,
                'passed': r.passes(self.config['tolerance']),
            }
            row.update(r.values)
            row.update({f"residual_{k}": v for k, v in r.residuals.items()})
            rows.append(row)
        return rows

    def to_frame(self) -> pd.DataFrame:
        rows = self.to_rows()
        return pd.DataFrame(rows, columns=list(dict.fromkeys(k for row in rows for k in row)))


def digest(array: np.ndarray) -> str:
    """Short stable fingerprint of an input array"""
    return hashlib.sha256(np.ascontiguousarray(array).tobytes()).hexdigest()[:16]


def _collect(cfg: ExperimentConfig, trial: Callable[[int], TrialRecord]) -> List[TrialRecord]:
    indices = range(cfg.trials)
    if cfg.workers == 1:
        return [trial(i) for i in indices]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        records = list(pool.map(trial, indices))
    return sorted(records, key=lambda r: r.index)


def _finish(cfg: ExperimentConfig, records: List[TrialRecord], criterion: str = CRITERION_MAX_RESIDUAL,
            **extra) -> ExperimentResult:
    residuals = np.array([r.max_residual for r in records])
    summary = {
        'records': len(records),
        'max_residual': float(residuals.max()) if residuals.size else 0.0,
        'mean_residual': float(residuals.mean()) if residuals.size else 0.0,
        **extra,
    }
    result = ExperimentResult(cfg.name, False, criterion, cfg.describe(), records, summary)
    result.passed = result.recompute_passed()

    status = "✅ PASS" if result.passed else "❌ FAIL"
    logger.info(f"{status} {cfg.name}: max residual {summary['max_residual']:.3e} over {len(records)} records")
    return result


def _require_mub_dim(cfg: ExperimentConfig):
    if cfg.dim not in SUPPORTED_MUB_DIMS:
        raise UnsupportedDimensionError(
            f"{cfg.name}: complete MUB set not provided for this dimension: {cfg.dim}"
        )


def _require_dim_range(cfg: ExperimentConfig):
    if not MIN_DIM <= cfg.dim <= MAX_DIM:
        raise UnsupportedDimensionError(f"{cfg.name}: dimension {cfg.dim} outside {MIN_DIM}..{MAX_DIM}")


def _trial_state(cfg: ExperimentConfig, i: int) -> DensityMatrix:
    # Ranks cycle 1..d so pure and mixed states are both exercised
    return random_density(cfg.dim, 1 + i % cfg.dim, cfg.seed, (_STATE, i))


def run_invariance_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Total information must not depend on which complete MUB set is measured,
    nor on a unitary rotation of the state, and must equal Tr(rho^2) - 1/d
    """
    _require_mub_dim(cfg)
    logger.info(f"🔄 Running invariance sweep: dim={cfg.dim}, trials={cfg.trials}, seed={cfg.seed}")
    canonical = mub_set(cfg.dim)
    d = cfg.dim

    def trial(i: int) -> TrialRecord:
        rho = _trial_state(cfg, i)
        u_a = haar_unitary(d, cfg.seed, (_ROTATION_A, i))
        u_b = haar_unitary(d, cfg.seed, (_ROTATION_B, i))
        set_a = canonical.rotated(u_a)
        set_b = canonical.rotated(u_b)

        t_canonical = total_information(rho, canonical)
        t_a = total_information(rho, set_a)
        t_b = total_information(rho, set_b)
        t_state_rotated = total_information(rho.rotated(u_a), canonical)
        closed_form = purity(rho) - 1 / d

        values = {
            'purity': purity(rho),
            'closed_form': closed_form,
            'i_total_canonical': t_canonical,
            'i_total_set_a': t_a,
            'i_total_set_b': t_b,
            'i_total_rotated_state': t_state_rotated,
            'shannon_sum_set_a': shannon_sum(rho, set_a),
            'shannon_sum_set_b': shannon_sum(rho, set_b),
        }
        residuals = {
            'across_choices': max(abs(t_a - t_b), abs(t_a - t_canonical)),
            'state_rotation': abs(t_state_rotated - t_canonical),
            'closed_form': max(abs(t - closed_form) for t in (t_canonical, t_a, t_b)),
        }
        return TrialRecord(i, f"rank{rho.rank()}", digest(rho.matrix), values, residuals)

    records = _collect(cfg, trial)
    shannon_spread = max(abs(r.values['shannon_sum_set_a'] - r.values['shannon_sum_set_b']) for r in records)
    return _finish(cfg, records, max_shannon_sum_spread=shannon_spread)


def run_povm_invariant(cfg: ExperimentConfig) -> ExperimentResult:
    """
    One POVM built from all MUB projectors carries the whole total information:
    its measure is rotation invariant and equals I_total / (d + 1)^2
    """
    _require_mub_dim(cfg)
    logger.info(f"🔄 Running single-POVM invariant: dim={cfg.dim}, trials={cfg.trials}, seed={cfg.seed}")
    d = cfg.dim
    canonical = mub_set(d)
    povm = eq1_povm(canonical)

    def trial(i: int) -> TrialRecord:
        rho = maximally_mixed(d) if i == 0 else _trial_state(cfg, i)
        u = haar_unitary(d, cfg.seed, (_ROTATION_A, i))

        direct = bz_from_povm(rho, povm)
        rotated = bz_from_povm(rho.rotated(u), povm)
        total = total_information(rho, canonical)
        closed_form = (purity(rho) - 1 / d) / (d + 1) ** 2

        values = {
            'povm_bz': direct,
            'povm_bz_rotated': rotated,
            'i_total': total,
            'i_total_scaled': total / (d + 1) ** 2,
            'closed_form': closed_form,
        }
        residuals = {
            'rotation': abs(direct - rotated),
            'proportionality': abs(direct - total / (d + 1) ** 2),
            'closed_form': abs(direct - closed_form),
        }
        case = 'maximally-mixed' if i == 0 else f"rank{rho.rank()}"
        return TrialRecord(i, case, digest(rho.matrix), values, residuals)

    return _finish(cfg, _collect(cfg, trial), completeness_residual=povm.completeness_residual())


def run_diagonal_equivalence(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Shannon entropy in the eigenbasis equals the von Neumann entropy, every
    other basis gives at least as much, and the single-measurement measure in
    the eigenbasis already equals the total information
    """
    _require_dim_range(cfg)
    logger.info(f"🔄 Running diagonal-basis equivalence: dim={cfg.dim}, trials={cfg.trials}, seed={cfg.seed}")
    d = cfg.dim

    def trial(i: int) -> TrialRecord:
        if i == 0:
            rho = maximally_mixed(d)
        else:
            rho = random_density(d, 1 + (i - 1) % d, cfg.seed, (_STATE, i))

        eigen = measurement_probabilities(rho, eigenbasis_measurement(rho))
        h_eigen = shannon_entropy(eigen)
        s = von_neumann_entropy(rho)

        u = haar_unitaries(d, cfg.seed, range(RANDOM_BASES_PER_TRIAL), prefix=(_RANDOM_BASES, i))
        probs = np.real(np.einsum('tki,kl,tli->ti', u.conj(), rho.matrix, u))
        probs = np.clip(probs, 0.0, 1.0)
        h_random = entropy(probs / probs.sum(axis=1, keepdims=True), base=2, axis=1)
        min_gap = float(np.min(h_random - s))

        bz_eigen = bz_measure(eigen)
        i_total = purity(rho) - 1 / d

        values = {
            'shannon_eigenbasis': h_eigen,
            'von_neumann': s,
            'min_random_basis_gap': min_gap,
            'bz_eigenbasis': bz_eigen,
            'i_total': i_total,
        }
        residuals = {
            'eigenbasis': abs(h_eigen - s),
            'nonnegativity': max(0.0, -min_gap),
            'bz_eigenbasis': abs(bz_eigen - i_total),
        }
        case = 'maximally-mixed' if i == 0 else f"rank{rho.rank()}"
        return TrialRecord(i, case, digest(rho.matrix), values, residuals)

    records = _collect(cfg, trial)
    return _finish(cfg, records,
                   random_bases_per_trial=RANDOM_BASES_PER_TRIAL,
                   min_random_basis_gap=min(r.values['min_random_basis_gap'] for r in records))


def _random_distribution_and_partition(seed: int, i: int):
    rng = substream(seed, (_CLASSICAL, i))
    n = int(rng.integers(2, 9))
    p = rng.dirichlet(np.ones(n))
    if i % 5 == 0:
        p[0] = 0.0  # zero-weight outcomes must be handled too
        p = p / p.sum()
    groups_count = int(rng.integers(1, n + 1))
    assignment = rng.integers(0, groups_count, size=n)
    partition = [list(np.flatnonzero(assignment == g)) for g in range(groups_count)]
    partition = [[int(x) for x in g] for g in partition if g]
    return ProbabilityDistribution(p), partition


def run_grouping_breakdown(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Classical control: the grouping decomposition reconstructs H exactly.
    Quantum contrast: for |x+>, measuring z first and then x gives 1 bit of
    x-uncertainty where the direct x measurement gives 0; a commuting
    (repeated) measurement leaves no gap.
    """
    if cfg.dim != 2:
        raise UnsupportedDimensionError(f"{cfg.name}: the sequential-measurement demo is fixed to dim 2, got {cfg.dim}")
    logger.info(f"🔄 Running grouping breakdown: classical trials={cfg.trials}, seed={cfg.seed}")

    def classical(i: int) -> TrialRecord:
        p, partition = _random_distribution_and_partition(cfg.seed, i)
        h = shannon_entropy(p)
        parts = grouping_decompose(p, partition)
        values = {
            'n': float(p.n),
            'groups': float(len(partition)),
            'shannon': h,
            'coarse_bits': parts.coarse_bits,
            'conditional_bits': parts.conditional_bits,
            'reconstructed_bits': parts.total_bits,
        }
        return TrialRecord(i, 'classical', digest(p.p), values, {'reconstruction': abs(parts.total_bits - h)})

    records = _collect(cfg, classical)

    rho = pure_state([1, 1])
    mubs = mub_set(2)
    z_basis, x_basis = mubs[0], mubs[1]
    direct = measurement_probabilities(rho, x_basis)
    h_direct = shannon_entropy(direct)

    gaps = {}
    for case, first, expected_gap in (('z-then-x', z_basis, 1.0), ('x-then-x', x_basis, 0.0)):
        joint = sequential_measure(rho, first, x_basis)
        h_after = shannon_entropy(joint.second_marginal())
        marginal_error = float(np.max(np.abs(joint.first_marginal().p - measurement_probabilities(rho, first).p)))
        gap = h_after - h_direct
        gaps[case] = gap
        records.append(TrialRecord(
            len(records), case, digest(rho.matrix),
            {'shannon_direct_x': h_direct, 'shannon_x_after_first': h_after, 'gap_bits': gap},
            {'gap': abs(gap - expected_gap), 'first_marginal': marginal_error},
        ))

    return _finish(cfg, records,
                   noncommuting_gap_bits=gaps['z-then-x'],
                   commuting_gap_bits=gaps['x-then-x'],
                   breakdown_detected=bool(gaps['z-then-x'] > cfg.tolerance))


def run_haar_convergence(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Average of the measure over Haar-random bases against its closed form,
    after first checking the second-moment oracle E[sum p^2] on an independent
    stream. Pass when every deviation is within 3 standard errors.
    """
    _require_dim_range(cfg)
    if cfg.trials < MIN_CONVERGENCE_TRIALS:
        raise ValidationError(f"{cfg.name}: needs at least {MIN_CONVERGENCE_TRIALS} trials, got {cfg.trials}")
    logger.info(f"🔄 Running Haar-average convergence: dim={cfg.dim}, trials={cfg.trials}, seed={cfg.seed}")
    d = cfg.dim

    cases = (
        ('maximally-mixed', maximally_mixed(d)),
        ('pure', random_density(d, 1, cfg.seed, (_STATE, 0))),
        ('mixed', random_density(d, d, cfg.seed, (_STATE, 1))),
    )

    records = []
    for case, rho in cases:
        moment = haar_square_sum_moment(rho, cfg.trials, cfg.seed)
        oracle = haar_moment_oracle(rho)
        records.append(TrialRecord(
            len(records), f"moment-{case}", digest(rho.matrix),
            {'estimate': moment.estimate, 'standard_error': moment.standard_error, 'oracle': oracle},
            {'deviation': abs(moment.estimate - oracle)},
            band=SIGMA_BAND * moment.standard_error,
        ))

    for case, rho in cases:
        average = haar_average_bz(rho, cfg.trials, cfg.seed)
        closed_form = haar_closed_form(rho)
        records.append(TrialRecord(
            len(records), f"average-{case}", digest(rho.matrix),
            {
                'purity': purity(rho),
                'estimate': average.estimate,
                'standard_error': average.standard_error,
                'closed_form': closed_form,
            },
            {'deviation': abs(average.estimate - closed_form)},
            band=SIGMA_BAND * average.standard_error,
        ))

    return _finish(cfg, records, criterion=CRITERION_SIGMA_BAND, sigma_band=SIGMA_BAND)


def run_shannon_witness(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Fixed witness: for the qubit |z+> the summed Shannon entropy changes when
    the MUB set is rotated by pi/4 about y, while the total information does not
    """
    if cfg.dim != 2:
        raise UnsupportedDimensionError(f"{cfg.name}: the documented witness is a qubit, got dim {cfg.dim}")
    logger.info("🔄 Running Shannon non-invariance witness")

    rho = pure_state([1, 0])
    canonical = mub_set(2)
    rotated = canonical.rotated(qubit_rotation(WITNESS_AXIS, WITNESS_ANGLE))

    h_canonical = shannon_sum(rho, canonical)
    h_rotated = shannon_sum(rho, rotated)
    t_canonical = total_information(rho, canonical)
    t_rotated = total_information(rho, rotated)
    shannon_gap = abs(h_canonical - h_rotated)

    record = TrialRecord(
        0, 'z+ vs y-rotated', digest(rho.matrix),
        {
            'shannon_sum_canonical': h_canonical,
            'shannon_sum_rotated': h_rotated,
            'shannon_gap_bits': shannon_gap,
            'i_total_canonical': t_canonical,
            'i_total_rotated': t_rotated,
        },
        {
            'i_total_difference': abs(t_canonical - t_rotated),
            'shannon_gap_shortfall': max(0.0, WITNESS_MIN_GAP_BITS - shannon_gap),
        },
    )
    return _finish(cfg, [record], shannon_gap_bits=shannon_gap, min_gap_bits=WITNESS_MIN_GAP_BITS)


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    'invariance': run_invariance_sweep,
    'povm-invariant': run_povm_invariant,
    'diagonal-eq': run_diagonal_equivalence,
    'grouping-demo': run_grouping_breakdown,
    'haar-avg': run_haar_convergence,
    'witness': run_shannon_witness,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Dispatch ``cfg`` to the runner registered under ``cfg.name``"""
    return EXPERIMENTS[cfg.name](cfg)
