from __future__ import annotations

from enum import StrEnum

DOMAIN = "esym_order"
DEFAULT_NAME = "E-dominance verification toolkit"

# esym_core
DEFAULT_TOL_EQ = 1e-9
NEWTON_MACLAURIN_TOL = 1e-9

# scalar_functionals
DEFAULT_SIMPLEX_TOL = 1e-9
DEFAULT_GAP_THRESHOLD = 1e-4  # min pairwise relative gap for closed divided-difference forms
LOG1P_SERIES_THRESHOLD = 1e-4
DIVDIFF_BASE_DIGITS = 30  # mpmath digits before gap losses are added
SHANNON_LIMIT_STEP = 1e-6

# quadrature
DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-8
DEFAULT_MAX_DEPTH = 48
DEFAULT_MAX_EVALUATIONS = 200_000
GAUSS_ORDER = 10
HALFLINE_SPLIT = 1.0

# dominance_sampling
DEFAULT_SHRINK = 0.05
MAX_SHRINK = 0.2
DEFAULT_IMAG_TOL = 1e-8
DEFAULT_MAX_SAMPLER_ATTEMPTS = 200
LOG_UNIFORM_RANGE = (0.1, 10.0)
N2_PRODUCT_RANGE = (0.1, 10.0)
N2_SUM_FACTOR = 10.0
N3_MAX_PRODUCT = 1.0 / 27.0
CONGRUENCE_SPECTRUM_RANGE = (0.5, 2.0)

# matrix_ops
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60
SPD_SYMMETRY_TOL = 1e-12
SPD_RECONSTRUCTION_TOL = 1e-10
SPD_ORTHOGONALITY_TOL = 1e-12
DEFAULT_TRACE_TOL = 1e-9
MAX_DIMENSION = 16

# verification harness
DEFAULT_MARGIN_TOL = 1e-8
SCHUR_CONCAVE_TOL = 1e-10
GEN_FUNC_TOL = 1e-10
IDENTITY_TOL = 1e-6
CROSSCHECK_TOL = 1e-7
CONFLUENCE_TOL = 1e-6
MAX_REJECTION_SHARE = 0.05  # rejected trials a batch tolerates before it fails

DEFAULT_N = 4
DEFAULT_TRIALS = 1000
DEFAULT_SEED = 42
DEFAULT_WORKERS = 1

RENYI_ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.25, 1.5, 2.0)
DIVDIFF_ALPHAS = (0.25, 0.5, 0.75)
EQ7_ALPHAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
EQ8_ALPHAS = (1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9)
IDENTITY_S_GRID = (0.1, 0.5, 1.0, 2.0, 10.0)
GEN_FUNC_GRID_SIZE = 32
GEN_FUNC_GRID_RANGE = (1e-3, 1e3)

CONF_PROPERTY = "property"
CONF_N = "n"
CONF_TRIALS = "trials"
CONF_SEED = "seed"
CONF_ALPHA = "alpha"
CONF_OUT = "out"
CONF_SHRINK = "shrink"
CONF_MAX_SAMPLER_ATTEMPTS = "max_sampler_attempts"
CONF_WORKERS = "workers"
CONF_ENABLE_DEBUG_LOGGING = "enable_debug_logging"
CONF_COUNT = "count"
CONF_CONSTRAINT = "constraint"
CONF_TOL = "tol"
CONF_VALUES = "values"
CONF_INPUT = "input"
CONF_INDEX = "index"

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2


class PropertyId(StrEnum):
    """Verifiable claims the harness knows how to stress-test."""

    SSLI = "SSLI"
    RENYI = "RENYI"
    SHANNON = "SHANNON"
    POWER_SUM_DIRECTION = "POWER_SUM_DIRECTION"
    SUBENTROPY = "SUBENTROPY"
    DIVDIFF_POWER = "DIVDIFF_POWER"
    SCHUR_CONCAVE = "SCHUR_CONCAVE"
    GEN_FUNC = "GEN_FUNC"
    LOGDET = "LOGDET"
    RIEMANNIAN = "RIEMANNIAN"
    SDIV = "SDIV"
    QUANTUM_RENYI = "QUANTUM_RENYI"
    EQ7_IDENTITY = "EQ7_IDENTITY"
    EQ8_IDENTITY = "EQ8_IDENTITY"
    EQ10_IDENTITY = "EQ10_IDENTITY"
    EQ14_CROSSCHECK = "EQ14_CROSSCHECK"
    PSI_SUM = "PSI_SUM"
    LOGDET_LOGMAJ = "LOGDET_LOGMAJ"
