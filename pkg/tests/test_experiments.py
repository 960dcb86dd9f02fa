"""
Tests for the seeded experiment runners
"""

import numpy as np
import pytest

from invariant_info.errors import UnsupportedDimensionError, ValidationError
from invariant_info.experiments import (
    CRITERION_SIGMA_BAND,
    EXPERIMENTS,
    ExperimentConfig,
    TrialRecord,
    run_experiment,
)
from invariant_info.report_generator import ReportGenerator


def run(name, **kwargs):
    return run_experiment(ExperimentConfig(name=name, **kwargs))


class TestExperimentConfig:
    def test_default_trials(self):
        assert ExperimentConfig(name='invariance').trials == 500
        assert ExperimentConfig(name='haar-avg').trials == 100_000
        assert ExperimentConfig(name='witness').trials == 1

    def test_unknown_experiment(self):
        with pytest.raises(ValidationError, match="unknown experiment"):
            ExperimentConfig(name='nope')

    @pytest.mark.parametrize('kwargs', [
        {'trials': 0},
        {'tolerance': 0.0},
        {'seed': -1},
        {'workers': 0},
    ])
    def test_invalid_fields(self, kwargs):
        with pytest.raises(ValidationError):
            ExperimentConfig(name='invariance', **kwargs)

    def test_describe_omits_scheduling(self):
        described = ExperimentConfig(name='invariance', workers=4).describe()
        assert 'workers' not in described
        assert set(described) == {'name', 'dim', 'trials', 'seed', 'tolerance'}

    def test_registry_matches_defaults(self):
        for name in EXPERIMENTS:
            ExperimentConfig(name=name)


class TestTrialRecord:
    def test_band_widens_allowance(self):
        record = TrialRecord(0, 'mc', 'abc', {}, {'deviation': 1e-3}, band=2e-3)
        assert record.passes(1e-10)

    def test_tolerance_without_band(self):
        record = TrialRecord(0, 'exact', 'abc', {}, {'a': 1e-12, 'b': 1e-9})
        assert record.max_residual == 1e-9
        assert not record.passes(1e-10)


class TestInvarianceSweep:
    @pytest.mark.parametrize('dim', [2, 3])
    def test_passes(self, dim):
        result = run('invariance', dim=dim, seed=42)
        assert result.passed
        assert len(result.records) == 500
        assert result.summary['max_residual'] <= 1e-10

    def test_cycles_ranks(self):
        result = run('invariance', dim=3, trials=6, seed=1)
        assert [r.case for r in result.records] == ['rank1', 'rank2', 'rank3'] * 2

    def test_shannon_sum_varies(self):
        result = run('invariance', dim=2, trials=50, seed=3)
        assert result.summary['max_shannon_sum_spread'] > 1e-3

    def test_deterministic(self):
        first = ReportGenerator().render(run('invariance', dim=3, trials=40, seed=42))
        second = ReportGenerator().render(run('invariance', dim=3, trials=40, seed=42))
        assert first == second

    def test_workers_do_not_change_records(self):
        serial = run('invariance', dim=3, trials=20, seed=9)
        threaded = run('invariance', dim=3, trials=20, seed=9, workers=4)
        assert serial.to_dict() == threaded.to_dict()

    def test_unsupported_dimension(self):
        with pytest.raises(UnsupportedDimensionError, match="complete MUB set not provided"):
            run('invariance', dim=4, trials=5)


class TestPovmInvariant:
    @pytest.mark.parametrize('dim', [2, 3])
    def test_passes(self, dim):
        result = run('povm-invariant', dim=dim, seed=7)
        assert result.passed
        assert result.summary['completeness_residual'] <= 1e-10

    def test_maximally_mixed_first(self):
        result = run('povm-invariant', dim=2, trials=3, seed=7)
        first = result.records[0]
        assert first.case == 'maximally-mixed'
        assert abs(first.values['povm_bz']) <= 1e-15
        assert abs(first.values['i_total']) <= 1e-15


class TestDiagonalEquivalence:
    @pytest.mark.parametrize('dim', [2, 3, 5])
    def test_passes(self, dim):
        result = run('diagonal-eq', dim=dim, trials=100, seed=11)
        assert result.passed
        assert result.summary['min_random_basis_gap'] >= -1e-10

    def test_includes_mixed_and_pure(self):
        result = run('diagonal-eq', dim=3, trials=4, seed=11)
        assert result.records[0].values['von_neumann'] == pytest.approx(np.log2(3))
        assert result.records[1].case == 'rank1'
        assert result.records[1].values['von_neumann'] == pytest.approx(0.0, abs=1e-10)

    def test_works_outside_mub_dimensions(self):
        assert run('diagonal-eq', dim=4, trials=10, seed=2).passed


class TestGroupingBreakdown:
    def test_passes(self):
        result = run('grouping-demo', trials=200, seed=5)
        assert result.passed
        assert result.summary['breakdown_detected'] is True

    def test_sequential_gaps(self):
        result = run('grouping-demo', trials=10, seed=5)
        gaps = {r.case: r.values['gap_bits'] for r in result.records if r.case != 'classical'}
        assert gaps['z-then-x'] == pytest.approx(1.0, abs=1e-10)
        assert gaps['x-then-x'] == pytest.approx(0.0, abs=1e-10)

    def test_qubit_only(self):
        with pytest.raises(UnsupportedDimensionError):
            run('grouping-demo', dim=3)


class TestHaarConvergence:
    def test_needs_enough_trials(self):
        with pytest.raises(ValidationError, match="at least 10000"):
            run('haar-avg', trials=5000)

    def test_estimates_within_band(self):
        result = run('haar-avg', dim=2, trials=10_000, seed=42)
        assert result.criterion == CRITERION_SIGMA_BAND
        assert len(result.records) == 6
        for record in result.records:
            assert record.band == pytest.approx(3 * record.values['standard_error'])
        assert result.passed
        assert result.recompute_passed()

    @pytest.mark.slow
    @pytest.mark.parametrize('dim', [2, 3])
    def test_full_scale(self, dim):
        result = run('haar-avg', dim=dim, seed=42)
        assert result.passed
        for record in result.records:
            assert record.residuals['deviation'] <= max(record.band, result.config['tolerance'])


class TestShannonWitness:
    def test_passes(self):
        result = run('witness')
        assert result.passed
        record = result.records[0]
        assert record.values['shannon_sum_canonical'] == pytest.approx(2.0)
        assert record.values['shannon_gap_bits'] > 1e-3
        assert record.residuals['i_total_difference'] <= 1e-12

    def test_qubit_only(self):
        with pytest.raises(UnsupportedDimensionError):
            run('witness', dim=3)


class TestExperimentResult:
    def test_recompute_detects_tampering(self):
        result = run('invariance', dim=2, trials=5, seed=1)
        assert result.recompute_passed()
        result.records[2].residuals['closed_form'] = 1e-3
        assert not result.recompute_passed()

    def test_rows_and_frame(self):
        result = run('povm-invariant', dim=2, trials=4, seed=1)
        frame = result.to_frame()
        assert list(frame.columns[:7]) == [
            'experiment', 'trial', 'case', 'inputs_digest', 'max_residual', 'band', 'passed',
        ]
        assert len(frame) == 4
        assert 'residual_rotation' in frame.columns

    def test_inputs_digest_is_stable(self):
        first = run('povm-invariant', dim=3, trials=3, seed=2)
        second = run('povm-invariant', dim=3, trials=3, seed=2)
        assert [r.inputs_digest for r in first.records] == [r.inputs_digest for r in second.records]
        assert len(first.records[1].inputs_digest) == 16
