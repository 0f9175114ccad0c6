"""Exceptions raised by the esym_order library."""

from __future__ import annotations


class EsymOrderError(Exception):
    """Base class for every library error."""


class DomainError(EsymOrderError, ValueError):
    """Input outside the domain of an operation."""


class DimensionMismatchError(DomainError):
    """Two operands of different dimension."""


class DegenerateSpectrumError(DomainError):
    """Entries too close for a closed divided-difference form."""

    def __init__(self, min_gap: float, threshold: float) -> None:
        super().__init__(
            f"Minimum pairwise relative gap {min_gap:.3e} is not above {threshold:.3e}; "
            "use the integral evaluator"
        )
        self.min_gap = min_gap
        self.threshold = threshold


class InfeasibleProductError(DomainError):
    """Requested product cannot be realised by a positive simplex vector."""


class ConfigurationError(EsymOrderError):
    """Invalid harness or command-line configuration."""


class NonConvergenceError(EsymOrderError, ArithmeticError):
    """Adaptive quadrature stopped before meeting its tolerance."""

    def __init__(
        self,
        message: str,
        best_estimate: float = float("nan"),
        achieved_error: float = float("inf"),
        evaluations: int = 0,
    ) -> None:
        super().__init__(message)
        self.best_estimate = best_estimate
        self.achieved_error = achieved_error
        self.evaluations = evaluations


class EigenNoConvergenceError(NonConvergenceError):
    """Jacobi sweeps exhausted, or a decomposition failed its own checks."""

    def __init__(self, message: str, sweeps: int = 0, off_diagonal: float = float("inf")) -> None:
        super().__init__(message, achieved_error=off_diagonal)
        self.sweeps = sweeps
        self.off_diagonal = off_diagonal


class RejectedSampleError(EsymOrderError):
    """Sampler draw rejected; the caller is expected to resample."""

    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


class SamplerExhaustedError(RejectedSampleError):
    """Every attempt of a sampler was rejected."""

    def __init__(self, attempts: int, last_reason: str) -> None:
        super().__init__(f"Sampler rejected {attempts} attempts; last reason: {last_reason}")
        self.attempts = attempts
        self.last_reason = last_reason


class RootSolverFailureError(EsymOrderError):
    """Polynomial root solver diverged or returned non-finite roots."""
