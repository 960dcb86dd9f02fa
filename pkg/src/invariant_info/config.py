"""
Numeric tolerances and defaults shared across the package
"""

# Matrix validation (Hermiticity, unit trace, positivity)
VALIDATION_TOL = 1e-10
UNITARITY_TOL = 1e-12

# Probability distributions
DISTRIBUTION_SUM_TOL = 1e-9
RENORMALIZE_TOL = 1e-8
NEGATIVE_CLAMP_TOL = 1e-10

# Eigenvalues below this contribute nothing to entropies / rank
EIGENVALUE_FLOOR = 1e-12

MIN_DIM = 2
MAX_DIM = 16
SUPPORTED_MUB_DIMS = (2, 3, 5, 7, 11, 13)

DEFAULT_SEED = 0
DEFAULT_TOLERANCE = 1e-10

MIN_HAAR_TRIALS = 100
MIN_CONVERGENCE_TRIALS = 10_000
SIGMA_BAND = 3.0

# Haar unitaries are drawn in blocks of this many trials to bound memory
MONTE_CARLO_CHUNK = 4096

# Number of random bases probed per trial in the diagonal-basis experiment
RANDOM_BASES_PER_TRIAL = 50

# Shannon non-invariance witness: qubit |z+> vs MUBs rotated about y
WITNESS_AXIS = (0.0, 1.0, 0.0)
WITNESS_ANGLE = 0.7853981633974483  # pi / 4
WITNESS_MIN_GAP_BITS = 1e-3

DEFAULT_TRIALS = {
    'invariance': 500,
    'povm-invariant': 100,
    'diagonal-eq': 500,
    'grouping-demo': 1000,
    'haar-avg': 100_000,
    'witness': 1,
}

CSV_FLOAT_FORMAT = '%.17g'
