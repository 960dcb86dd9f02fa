"""
Tests for entropies and the invariant information measure
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

import invariant_info.infomeasure as infomeasure
from invariant_info.config import WITNESS_ANGLE, WITNESS_AXIS
from invariant_info.errors import ValidationError
from invariant_info.infomeasure import (
    ProbabilityDistribution,
    bz_from_povm,
    bz_measure,
    grouping_decompose,
    haar_average_bz,
    haar_closed_form,
    haar_moment_oracle,
    haar_square_sum_moment,
    info_report,
    shannon_entropy,
    shannon_sum,
    total_information,
    von_neumann_entropy,
)
from invariant_info.linalg import haar_unitary
from invariant_info.measurement import (
    ProjectiveMeasurement,
    eigenbasis_measurement,
    eq1_povm,
    measurement_probabilities,
    mub_set,
    qubit_rotation,
)
from invariant_info.state import density_from_matrix, maximally_mixed, purity, random_density


def dist(*values):
    return ProbabilityDistribution.from_values(values)


class TestShannonEntropy:
    @pytest.mark.parametrize('values, expected', [
        ((0.5, 0.5), 1.0),
        ((1.0, 0.0), 0.0),
        ((0.5, 0.25, 0.25), 1.5),
        ((0.25,) * 4, 2.0),
    ])
    def test_known_values(self, values, expected):
        assert shannon_entropy(dist(*values)) == pytest.approx(expected)

    def test_bounds(self):
        rng = np.random.default_rng(1)
        for n in range(1, 9):
            h = shannon_entropy(dist(*rng.dirichlet(np.ones(n))))
            assert 0 <= h <= np.log2(n) + 1e-12

    @pytest.mark.parametrize('values', [(0.5, 0.6), (1.2, -0.2), (np.nan, 1.0)])
    def test_invalid_distribution(self, values):
        with pytest.raises(ValidationError):
            dist(*values)

    def test_rejects_empty(self):
        with pytest.raises(ValidationError, match="non-empty"):
            ProbabilityDistribution.from_values([])


class TestGroupingDecomposition:
    def test_documented_split(self):
        parts = grouping_decompose(dist(0.5, 0.25, 0.25), [[0], [1, 2]])
        assert parts.coarse_bits == pytest.approx(1.0)
        assert parts.conditional_bits == pytest.approx(0.5)
        assert parts.total_bits == pytest.approx(1.5)

    def test_single_group(self):
        p = dist(0.2, 0.3, 0.5)
        parts = grouping_decompose(p, [[0, 1, 2]])
        assert parts.coarse_bits == 0.0
        assert parts.total_bits == pytest.approx(shannon_entropy(p))

    def test_zero_weight_group(self):
        parts = grouping_decompose(dist(0.0, 0.0, 1.0), [[0, 1], [2]])
        assert parts.total_bits == pytest.approx(0.0)

    def test_random_partitions(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            p = dist(*rng.dirichlet(np.ones(n)))
            labels = rng.integers(0, int(rng.integers(1, n + 1)), size=n)
            partition = [list(np.flatnonzero(labels == g)) for g in np.unique(labels)]
            parts = grouping_decompose(p, partition)
            assert abs(parts.total_bits - shannon_entropy(p)) <= 1e-12

    @pytest.mark.parametrize('partition', [
        [[0, 1], [1, 2]],
        [[0], [1]],
        [[0, 1, 2], []],
        [],
    ])
    def test_malformed_partition(self, partition):
        with pytest.raises(ValidationError, match="malformed partition"):
            grouping_decompose(dist(0.2, 0.3, 0.5), partition)


class TestVonNeumannEntropy:
    def test_pure_state(self, z_plus):
        assert von_neumann_entropy(z_plus) == 0.0

    @pytest.mark.parametrize('dim', [2, 3, 5])
    def test_maximally_mixed(self, dim):
        assert von_neumann_entropy(maximally_mixed(dim)) == pytest.approx(np.log2(dim))

    def test_diagonal_state(self):
        rho = density_from_matrix(np.diag([0.75, 0.25]))
        assert von_neumann_entropy(rho) == pytest.approx(0.811278, abs=1e-6)

    def test_unitary_invariance(self):
        rho = random_density(4, 3, 12)
        rotated = rho.rotated(haar_unitary(4, 1))
        assert von_neumann_entropy(rotated) == pytest.approx(von_neumann_entropy(rho), abs=1e-10)


class TestBzMeasure:
    def test_uniform_is_zero(self):
        assert bz_measure(dist(0.25, 0.25, 0.25, 0.25)) == 0.0

    def test_certain_outcome(self):
        assert bz_measure(dist(1.0, 0.0)) == pytest.approx(0.5)
        assert bz_measure(dist(1.0, 0.0, 0.0)) == pytest.approx(2 / 3)

    def test_two_thirds(self):
        assert bz_measure(dist(2 / 3, 1 / 3)) == pytest.approx(1 / 18)

    def test_normalized_maximum_is_one(self):
        assert bz_measure(dist(1.0, 0.0), normalized=True) == pytest.approx(1.0)
        assert bz_measure(dist(0.0, 1.0, 0.0, 0.0), normalized=True) == pytest.approx(1.0)

    def test_single_outcome(self):
        assert bz_measure(dist(1.0), normalized=True) == 0.0


class TestTotalInformation:
    def test_maximally_mixed(self):
        for dim in (2, 3, 5):
            assert abs(total_information(maximally_mixed(dim), mub_set(dim))) <= 1e-12

    def test_z_plus(self, z_plus, qubit_mubs):
        report = info_report(z_plus, qubit_mubs)
        assert [m.bz_value for m in report.basis_measures] == pytest.approx([0.5, 0.0, 0.0], abs=1e-12)
        assert report.i_total == pytest.approx(0.5)

    def test_pure_qutrit(self):
        rho = random_density(3, 1, 4)
        assert total_information(rho, mub_set(3)) == pytest.approx(2 / 3, abs=1e-10)

    @pytest.mark.parametrize('dim', [2, 3, 5, 7])
    def test_equals_purity_offset(self, dim):
        mubs = mub_set(dim)
        for seed in range(20):
            rho = random_density(dim, 1 + seed % dim, seed)
            assert total_information(rho, mubs) == pytest.approx(purity(rho) - 1 / dim, abs=1e-10)

    def test_normalized(self, z_plus, qubit_mubs):
        assert total_information(z_plus, qubit_mubs, normalized=True) == pytest.approx(1.0)

    @pytest.mark.parametrize('dim', [2, 3, 5])
    def test_independent_of_mub_choice(self, dim):
        canonical = mub_set(dim)
        for seed in range(20):
            rho = random_density(dim, dim, seed)
            first = total_information(rho, canonical.rotated(haar_unitary(dim, seed, (1,))))
            second = total_information(rho, canonical.rotated(haar_unitary(dim, seed, (2,))))
            assert first == pytest.approx(second, abs=1e-10)

    def test_dimension_mismatch(self, z_plus):
        with pytest.raises(ValidationError, match="dimension mismatch"):
            total_information(z_plus, mub_set(3))


class TestShannonWitness:
    def test_shannon_sum_depends_on_mub_choice(self, z_plus, qubit_mubs):
        rotated = qubit_mubs.rotated(qubit_rotation(WITNESS_AXIS, WITNESS_ANGLE))
        canonical_sum = shannon_sum(z_plus, qubit_mubs)
        rotated_sum = shannon_sum(z_plus, rotated)
        assert canonical_sum == pytest.approx(2.0)
        assert rotated_sum == pytest.approx(2.2018, abs=1e-3)
        assert abs(canonical_sum - rotated_sum) > 1e-3

    def test_total_information_does_not(self, z_plus, qubit_mubs):
        rotated = qubit_mubs.rotated(qubit_rotation(WITNESS_AXIS, WITNESS_ANGLE))
        assert total_information(z_plus, rotated) == pytest.approx(0.5, abs=1e-12)
        assert total_information(z_plus, qubit_mubs) == pytest.approx(0.5, abs=1e-12)


class TestEigenbasis:
    @pytest.mark.parametrize('dim', [2, 3, 4])
    def test_shannon_equals_von_neumann(self, dim):
        for seed in range(10):
            rho = random_density(dim, 1 + seed % dim, seed)
            p = measurement_probabilities(rho, eigenbasis_measurement(rho))
            assert shannon_entropy(p) == pytest.approx(von_neumann_entropy(rho), abs=1e-10)

    def test_eigenbasis_minimises_shannon(self):
        for seed in range(1000):
            dim = 2 + seed % 3
            rho = random_density(dim, dim, seed, (0,))
            basis = ProjectiveMeasurement(haar_unitary(dim, seed, (1,)))
            assert shannon_entropy(measurement_probabilities(rho, basis)) >= von_neumann_entropy(rho) - 1e-10

    @pytest.mark.parametrize('dim', [2, 3, 5])
    def test_single_measurement_carries_total(self, dim):
        rho = random_density(dim, 2, 31)
        p = measurement_probabilities(rho, eigenbasis_measurement(rho))
        assert bz_measure(p) == pytest.approx(total_information(rho, mub_set(dim)), abs=1e-10)


class TestPovmMeasure:
    def test_maximally_mixed(self, mixed_qubit, qubit_mubs):
        assert bz_from_povm(mixed_qubit, eq1_povm(qubit_mubs)) == pytest.approx(0.0, abs=1e-15)

    def test_pure_qubit(self, z_plus, qubit_mubs):
        assert bz_from_povm(z_plus, eq1_povm(qubit_mubs)) == pytest.approx(1 / 18)

    @pytest.mark.parametrize('dim', [2, 3])
    def test_rotation_invariant(self, dim):
        povm = eq1_povm(mub_set(dim))
        rho = random_density(dim, 1, 5)
        reference = bz_from_povm(rho, povm)
        assert reference == pytest.approx((purity(rho) - 1 / dim) / (dim + 1) ** 2, abs=1e-12)
        for seed in range(100):
            rotated = rho.rotated(haar_unitary(dim, seed))
            assert bz_from_povm(rotated, povm) == pytest.approx(reference, abs=1e-10)


class TestHaarAverage:
    def test_too_few_trials(self, z_plus):
        with pytest.raises(ValidationError, match="at least 100"):
            haar_average_bz(z_plus, 99, 0)

    def test_deterministic(self, z_plus):
        assert haar_average_bz(z_plus, 300, 5) == haar_average_bz(z_plus, 300, 5)

    def test_independent_of_chunk_size(self, z_plus, monkeypatch):
        reference = haar_average_bz(z_plus, 300, 5)
        monkeypatch.setattr(infomeasure, 'MONTE_CARLO_CHUNK', 7)
        chunked = haar_average_bz(z_plus, 300, 5)
        assert chunked.estimate == pytest.approx(reference.estimate, rel=1e-12)

    def test_maximally_mixed(self, mixed_qubit):
        result = haar_average_bz(mixed_qubit, 1000, 3)
        assert abs(result.estimate) <= 1e-12

    def test_closed_form_values(self, z_plus, mixed_qubit):
        assert haar_closed_form(z_plus) == pytest.approx(1 / 6)
        assert haar_closed_form(mixed_qubit) == pytest.approx(0.0, abs=1e-15)
        assert haar_closed_form(z_plus, normalized=True) == pytest.approx(1 / 3)

    def test_moment_oracle(self):
        rho = random_density(3, 2, 8)
        moment = haar_square_sum_moment(rho, 20_000, 4)
        assert abs(moment.estimate - haar_moment_oracle(rho)) <= 4 * moment.standard_error

    @pytest.mark.slow
    @pytest.mark.parametrize('dim', [2, 3])
    def test_converges_to_closed_form(self, dim):
        rho = random_density(dim, 1, 0)
        result = haar_average_bz(rho, 100_000, 42)
        assert result.trials == 100_000
        assert abs(result.estimate - haar_closed_form(rho)) <= 4 * result.standard_error


class TestInfoReport:
    def test_totals_match_per_basis_values(self):
        rho = random_density(5, 3, 1)
        report = info_report(rho, mub_set(5))
        assert report.i_total == pytest.approx(sum(m.bz_value for m in report.basis_measures))
        assert report.povm_bz == pytest.approx(report.i_total / 36, abs=1e-12)
        assert len(report.to_rows()) == 6

    def test_probabilities_recorded(self, z_plus, qubit_mubs):
        report = info_report(z_plus, qubit_mubs)
        assert_allclose(report.basis_measures[0].probabilities, [1.0, 0.0], atol=1e-12)
        assert report.to_dict()['basis_measures'][1]['label'] == 'x'
