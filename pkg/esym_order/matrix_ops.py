"""Real symmetric positive definite matrices and their E-dominance geometry."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .const import (
    DEFAULT_TRACE_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_TOL,
    MAX_DIMENSION,
    SPD_ORTHOGONALITY_TOL,
    SPD_RECONSTRUCTION_TOL,
    SPD_SYMMETRY_TOL,
)
from .errors import DimensionMismatchError, DomainError, EigenNoConvergenceError
from .esym_core import ComparisonTolerance, DominanceVerdict, compare, esym_all
from .scalar_functionals import RenyiOrder, renyi_entropy

_LOGGER = logging.getLogger(__name__)

MatrixDominanceVerdict = DominanceVerdict


def _off_diagonal_norm(a: np.ndarray) -> float:
    return math.sqrt(2.0) * float(np.linalg.norm(np.triu(a, 1)))


def jacobi_eigh(
    a: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalise a real symmetric matrix by cyclic Jacobi rotations.

    Converged when the off-diagonal Frobenius mass is at most
    tol * ||a||_F. Returns eigenvalues ascending and the matching
    orthonormal eigenvectors as columns.
    """
    work = np.array(a, dtype=float)
    n = work.shape[0]
    vectors = np.eye(n)
    scale = float(np.linalg.norm(work))
    threshold = tol * scale

    sweeps = 0
    off = _off_diagonal_norm(work)
    while off > threshold:
        if sweeps >= max_sweeps:
            raise EigenNoConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})",
                sweeps=sweeps,
                off_diagonal=off,
            )
        sweeps += 1
        for k in range(n - 1):
            for l in range(k + 1, n):  # noqa: E741
                akl = work[k, l]
                if akl == 0.0:
                    continue
                diff = work[l, l] - work[k, k]
                if abs(akl) < abs(diff) * 1.0e-36:
                    t = akl / diff
                else:
                    phi = diff / (2.0 * akl)
                    t = 1.0 / (abs(phi) + math.hypot(phi, 1.0))
                    if phi < 0.0:
                        t = -t
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c

                col_k = work[:, k].copy()
                col_l = work[:, l].copy()
                work[:, k] = c * col_k - s * col_l
                work[:, l] = s * col_k + c * col_l
                row_k = work[k, :].copy()
                row_l = work[l, :].copy()
                work[k, :] = c * row_k - s * row_l
                work[l, :] = s * row_k + c * row_l
                work[k, l] = work[l, k] = 0.0

                vec_k = vectors[:, k].copy()
                vec_l = vectors[:, l].copy()
                vectors[:, k] = c * vec_k - s * vec_l
                vectors[:, l] = s * vec_k + c * vec_l
        off = _off_diagonal_norm(work)

    _LOGGER.debug("Jacobi converged after %d sweeps (n=%d)", sweeps, n)
    values = np.diag(work).copy()
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


@dataclass(frozen=True, eq=False)
class SpdMatrix:
    """Real symmetric positive definite matrix with a fixed spectral cache."""

    entries: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_array(cls, values: np.ndarray | list[list[float]]) -> SpdMatrix:
        """Validate, decompose and freeze a matrix."""
        a = np.array(values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DomainError(f"Expected a non-empty square matrix, got shape {a.shape}")
        n = a.shape[0]
        if n > MAX_DIMENSION:
            raise DomainError(f"Dimension {n} exceeds the supported maximum {MAX_DIMENSION}")
        if not np.all(np.isfinite(a)):
            raise DomainError("Matrix entries must be finite")

        norm = float(np.linalg.norm(a))
        asymmetry = float(np.max(np.abs(a - a.T)))
        if asymmetry > SPD_SYMMETRY_TOL * max(1.0, norm):
            raise DomainError(f"Matrix is not symmetric (max |a_ij - a_ji| = {asymmetry:.3e})")
        a = 0.5 * (a + a.T)

        eigenvalues, eigenvectors = jacobi_eigh(a)
        if not eigenvalues[0] > 0.0:
            raise DomainError(
                f"Matrix is not positive definite (min eigenvalue {eigenvalues[0]!r})"
            )

        residual = float(np.linalg.norm(eigenvectors @ np.diag(eigenvalues) @ eigenvectors.T - a))
        if residual > SPD_RECONSTRUCTION_TOL * norm:
            raise EigenNoConvergenceError(
                f"Spectral reconstruction error {residual:.3e} exceeds tolerance",
                off_diagonal=residual,
            )
        drift = float(np.linalg.norm(eigenvectors.T @ eigenvectors - np.eye(n)))
        if drift > SPD_ORTHOGONALITY_TOL * n:
            raise EigenNoConvergenceError(
                f"Eigenvectors lost orthogonality ({drift:.3e})", off_diagonal=drift
            )

        for array in (a, eigenvalues, eigenvectors):
            array.setflags(write=False)
        return cls(a, eigenvalues, eigenvectors)

    @classmethod
    def diagonal(cls, values: list[float] | tuple[float, ...] | np.ndarray) -> SpdMatrix:
        """Return diag(values)."""
        return cls.from_array(np.diag(np.asarray(values, dtype=float)))

    @property
    def n(self) -> int:
        """Return the dimension."""
        return self.entries.shape[0]

    @property
    def frobenius_norm(self) -> float:
        """Return ||A||_F."""
        return float(np.linalg.norm(self.entries))

    @property
    def trace(self) -> float:
        """Return the trace."""
        return math.fsum(np.diag(self.entries))

    @property
    def spectrum(self) -> tuple[float, ...]:
        """Return the eigenvalues, ascending."""
        return tuple(float(value) for value in self.eigenvalues)

    def as_array(self) -> np.ndarray:
        """Return a writable copy of the entries."""
        return np.array(self.entries)


def _same_dimension(a: SpdMatrix, b: SpdMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatchError(f"Dimensions differ: {a.n} != {b.n}")


def eigendecompose(a: SpdMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Return copies of the cached eigenvalues (ascending) and eigenvectors."""
    return np.array(a.eigenvalues), np.array(a.eigenvectors)


def matrix_function(a: SpdMatrix, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Return Q f(Lambda) Q^T from the spectral cache."""
    q = a.eigenvectors
    result = (q * np.asarray(f(a.eigenvalues), dtype=float)) @ q.T
    return 0.5 * (result + result.T)


def sqrtm(a: SpdMatrix) -> np.ndarray:
    """Return the SPD square root."""
    return matrix_function(a, np.sqrt)


def inv_sqrtm(a: SpdMatrix) -> np.ndarray:
    """Return the inverse SPD square root."""
    return matrix_function(a, lambda values: 1.0 / np.sqrt(values))


def logm(a: SpdMatrix) -> np.ndarray:
    """Return the principal matrix logarithm."""
    return matrix_function(a, np.log)


def congruence(a: np.ndarray | SpdMatrix, m: np.ndarray) -> np.ndarray:
    """Return M A M^T, symmetrised."""
    inner = a.entries if isinstance(a, SpdMatrix) else np.asarray(a, dtype=float)
    result = m @ inner @ m.T
    return 0.5 * (result + result.T)


def spectrum_of_product(a: SpdMatrix, c: SpdMatrix) -> np.ndarray:
    """Return the ascending spectrum of A C^-1, read off C^-1/2 A C^-1/2."""
    _same_dimension(a, c)
    values, _ = jacobi_eigh(congruence(a, inv_sqrtm(c)))
    return values


def exterior_trace(a: SpdMatrix, k: int) -> float:
    """Return trace of the k-th exterior power, i.e. e_k of the spectrum."""
    if not 1 <= k <= a.n:
        raise DomainError(f"k must lie in [1, {a.n}], got {k}")
    return esym_all(a.eigenvalues).e(k)


def matrix_compare(
    a: SpdMatrix, b: SpdMatrix, tol: ComparisonTolerance | None = None
) -> MatrixDominanceVerdict:
    """Compare the spectra of A and B under the E-dominance order."""
    _same_dimension(a, b)
    return compare(a.eigenvalues, b.eigenvalues, tol)


def logdet(a: SpdMatrix) -> float:
    """Return log det A as the sum of log eigenvalues."""
    return math.fsum(np.log(a.eigenvalues))


def logdet_I_plus(a: SpdMatrix) -> float:
    """Return log det(I + A) = sum_i log(1 + lambda_i)."""
    return math.fsum(np.log1p(a.eigenvalues))


def riemannian_distance(a: SpdMatrix, b: SpdMatrix) -> float:
    """Return ||log(B^-1/2 A B^-1/2)||_F."""
    values = spectrum_of_product(a, b)
    return math.sqrt(math.fsum(np.log(values) ** 2))


def s_divergence(a: SpdMatrix, b: SpdMatrix) -> float:
    """Return log det((A + B)/2) - (log det A + log det B)/2."""
    _same_dimension(a, b)
    midpoint = SpdMatrix.from_array(0.5 * (a.entries + b.entries))
    return logdet(midpoint) - 0.5 * (logdet(a) + logdet(b))


def quantum_renyi(
    x: SpdMatrix, order: RenyiOrder, trace_tol: float = DEFAULT_TRACE_TOL
) -> float:
    """Return the Renyi entropy of the spectrum of a unit-trace matrix."""
    trace = x.trace
    if abs(trace - 1.0) > trace_tol:
        raise DomainError(f"Trace must be 1 within {trace_tol:g}, got {trace!r}")
    return renyi_entropy(x.eigenvalues, order, simplex_tol=trace_tol)
