"""
Invariant Information Package

Information measures for quantum measurements: Shannon and von Neumann
entropies, and the squared-deviation measure whose sum over a complete set of
mutually unbiased bases is invariant under the choice of that set.
"""

from .errors import (
    ConsistencyError,
    InvariantInfoError,
    NumericError,
    SchemaError,
    UnsupportedDimensionError,
    ValidationError,
)
from .linalg import EigenDecomposition, haar_unitary, hermitian_eig
from .state import (
    BlochVector,
    DensityMatrix,
    bloch_to_density,
    density_from_matrix,
    density_to_bloch,
    maximally_mixed,
    pure_state,
    purity,
    random_density,
)
from .probability import ProbabilityDistribution
from .measurement import (
    MubSet,
    Povm,
    ProjectiveMeasurement,
    eq1_povm,
    measurement_probabilities,
    mub_set,
    povm_probabilities,
    sequential_measure,
)
from .infomeasure import (
    InfoReport,
    bz_from_povm,
    bz_measure,
    grouping_decompose,
    haar_average_bz,
    info_report,
    shannon_entropy,
    total_information,
    von_neumann_entropy,
)
from .experiments import ExperimentConfig, ExperimentResult, run_experiment
from .state_parser import DensityMatrixParser, load_density, save_density
from .report_generator import ReportGenerator, save_report

__version__ = "1.0.0"


# Package-level convenience functions
def report_for_file(state_file_path, normalized=False):
    """Convenience function: InfoReport for a state JSON file against its canonical MUB set"""
    rho = load_density(state_file_path)
    return info_report(rho, mub_set(rho.dim), normalized)


def run_named_experiment(name, dim=2, trials=None, seed=0, tolerance=1e-10):
    """
    Convenience function to run one experiment by name

    Args:
        name: Registered experiment name, e.g. 'invariance'
        dim: Hilbert-space dimension
        trials: Trial count (None for the experiment's default)
        seed: 64-bit seed
        tolerance: Pass/fail tolerance

    Returns:
        ExperimentResult
    """
    return run_experiment(ExperimentConfig(name=name, dim=dim, trials=trials, seed=seed, tolerance=tolerance))


__all__ = [
    'InvariantInfoError',
    'ValidationError',
    'UnsupportedDimensionError',
    'SchemaError',
    'NumericError',
    'ConsistencyError',
    'EigenDecomposition',
    'hermitian_eig',
    'haar_unitary',
    'DensityMatrix',
    'BlochVector',
    'density_from_matrix',
    'bloch_to_density',
    'density_to_bloch',
    'maximally_mixed',
    'pure_state',
    'purity',
    'random_density',
    'ProbabilityDistribution',
    'ProjectiveMeasurement',
    'MubSet',
    'Povm',
    'mub_set',
    'measurement_probabilities',
    'povm_probabilities',
    'eq1_povm',
    'sequential_measure',
    'InfoReport',
    'shannon_entropy',
    'grouping_decompose',
    'von_neumann_entropy',
    'bz_measure',
    'total_information',
    'bz_from_povm',
    'haar_average_bz',
    'info_report',
    'ExperimentConfig',
    'ExperimentResult',
    'run_experiment',
    'DensityMatrixParser',
    'load_density',
    'save_density',
    'ReportGenerator',
    'save_report',
    'report_for_file',
    'run_named_experiment',
]
