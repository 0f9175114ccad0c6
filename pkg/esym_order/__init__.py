"""Elementary-symmetric dominance order: functionals, samplers and a verification harness."""

from __future__ import annotations

from .const import DOMAIN, PropertyId
from .coordinator import (
    VerificationConfig,
    VerificationReport,
    library_version,
    load_report,
    run_verification,
    write_report,
)
from .dominance_sampling import DominancePair, PairConstraint, sample_pair, trial_rng
from .errors import (
    ConfigurationError,
    DomainError,
    EsymOrderError,
    NonConvergenceError,
    RejectedSampleError,
)
from .esym_core import (
    ComparisonTolerance,
    DominanceDirection,
    DominanceKind,
    DominanceVerdict,
    ESignature,
    PositiveVector,
    compare,
    esym_all,
    weakly_below,
)
from .matrix_ops import SpdMatrix, matrix_compare

__all__ = [
    "DOMAIN",
    "ComparisonTolerance",
    "ConfigurationError",
    "DominanceDirection",
    "DominanceKind",
    "DominancePair",
    "DominanceVerdict",
    "DomainError",
    "ESignature",
    "EsymOrderError",
    "NonConvergenceError",
    "PairConstraint",
    "PositiveVector",
    "PropertyId",
    "RejectedSampleError",
    "SpdMatrix",
    "VerificationConfig",
    "VerificationReport",
    "compare",
    "esym_all",
    "library_version",
    "load_report",
    "matrix_compare",
    "run_verification",
    "sample_pair",
    "trial_rng",
    "weakly_below",
    "write_report",
]
