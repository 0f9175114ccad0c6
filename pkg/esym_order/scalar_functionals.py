"""Scalar functionals that are monotone under the E-dominance order.

Covers the sum of squared logarithms, Renyi and Shannon entropies, power
sums, subentropy (closed and integral evaluators), divided differences of
s**alpha, the integral representations used to certify them, and the
general sum of psi(x_i) built from a positive measure.
"""

from __future__ import annotations

import logging
import math
import threading
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import StrEnum

import mpmath
import numpy as np

from .const import (
    DEFAULT_ABS_TOL,
    DEFAULT_GAP_THRESHOLD,
    DEFAULT_REL_TOL,
    DEFAULT_SIMPLEX_TOL,
    DIVDIFF_BASE_DIGITS,
    LOG1P_SERIES_THRESHOLD,
)
from .errors import DegenerateSpectrumError, DomainError
from .esym_core import PositiveVector, VectorLike, as_positive_vector
from .quadrature import (
    PowerWeightTail,
    QuadratureProblem,
    integrate_halfline,
    integrate_interval,
    integrate_with_power_weight,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class RenyiOrder:
    """Order alpha of a Renyi entropy; alpha = 1 only through the Shannon marker."""

    alpha: float
    is_shannon: bool = False

    def __post_init__(self) -> None:
        """Validate the order."""
        if self.is_shannon:
            if self.alpha != 1.0:
                raise DomainError("The Shannon marker carries alpha = 1")
            return
        if not math.isfinite(self.alpha) or not 0.0 <= self.alpha <= 2.0:
            raise DomainError(f"Renyi order must lie in [0, 2], got {self.alpha!r}")
        if self.alpha == 1.0:
            raise DomainError("Renyi order 1 is the Shannon entropy; use RenyiOrder.shannon()")

    @classmethod
    def shannon(cls) -> RenyiOrder:
        """Return the marker for the alpha -> 1 limit."""
        return cls(1.0, is_shannon=True)

    @property
    def label(self) -> str:
        """Return a short name for reports."""
        return "shannon" if self.is_shannon else repr(self.alpha)


class IdentityId(StrEnum):
    """Integral identities used to certify the functionals."""

    EQ7 = "EQ7"
    EQ8 = "EQ8"
    EQ10 = "EQ10"


class PsiKernel(StrEnum):
    """Kernels of the measure-built functional psi."""

    ONE_PLUS_TS = "one_plus_ts"
    T_PLUS_S = "t_plus_s"


def log1p_minus_identity(z: np.ndarray | float) -> np.ndarray | float:
    """Return log(1 + z) - z, switching to a series for |z| < 1e-4."""
    arr = np.asarray(z, dtype=float)
    with np.errstate(invalid="ignore"):
        direct = np.log1p(arr) - arr
    series = arr * arr * (-0.5 + arr * (1 / 3 + arr * (-0.25 + arr * (0.2 - arr / 6))))
    result = np.where(np.abs(arr) < LOG1P_SERIES_THRESHOLD, series, direct)
    if np.ndim(z) == 0:
        return float(result)
    return result


@dataclass(frozen=True)
class IntegralRepresentation:
    """Integral identity: value(s) = prefactor * int_0^inf integrand(t, s) weight(t) dt."""

    identity_id: IdentityId
    integrand: Callable[[np.ndarray, float], np.ndarray]
    measure_weight: Callable[[np.ndarray], np.ndarray]
    prefactor: float
    alpha: float | None = None

    @classmethod
    def for_identity(
        cls, identity_id: IdentityId, alpha: float | None = None
    ) -> IntegralRepresentation:
        """Build the representation of s**alpha (EQ7, EQ8) or (log s)**2 (EQ10)."""
        identity_id = IdentityId(identity_id)
        if identity_id == IdentityId.EQ10:
            return cls(identity_id, _log_square_integrand, _inverse_weight, 1.0)

        if alpha is None:
            raise DomainError(f"{identity_id} needs an alpha")
        alpha = float(alpha)
        if identity_id == IdentityId.EQ7 and not 0.0 < alpha < 1.0:
            raise DomainError(f"EQ7 needs 0 < alpha < 1, got {alpha}")
        if identity_id == IdentityId.EQ8 and not 1.0 < alpha < 2.0:
            raise DomainError(f"EQ8 needs 1 < alpha < 2, got {alpha}")

        def weight(t: np.ndarray) -> np.ndarray:
            return t ** (-alpha - 1.0)

        integrand = _log1p_integrand if identity_id == IdentityId.EQ7 else _log1p_linear_integrand
        prefactor = alpha * math.sin(alpha * math.pi) / math.pi
        return cls(identity_id, integrand, weight, prefactor, alpha)

    def closed_form(self, s: float) -> float:
        """Return the value the identity must reproduce."""
        if self.identity_id == IdentityId.EQ10:
            return math.log(s) ** 2
        return s**self.alpha

    def check_argument(self, s: float) -> float:
        """Validate s against the identity's range."""
        s = float(s)
        lower_ok = s > 0.0 if self.identity_id == IdentityId.EQ10 else s >= 0.0
        if not math.isfinite(s) or not lower_ok:
            raise DomainError(f"s={s!r} outside the range of {self.identity_id}")
        return s


def _log1p_integrand(t: np.ndarray, s: float) -> np.ndarray:
    return np.log1p(t * s)


def _log1p_linear_integrand(t: np.ndarray, s: float) -> np.ndarray:
    return log1p_minus_identity(t * s)


def _log_square_integrand(t: np.ndarray, s: float) -> np.ndarray:
    # symmetric under t -> 1/t, so evaluate through z = min(t, 1/t)
    z = np.minimum(t, 1.0 / t)
    return np.log1p(z * s) + np.log1p(z / s) - 2.0 * np.log1p(z)


def _inverse_weight(t: np.ndarray) -> np.ndarray:
    return 1.0 / t


def eval_integral_identity(
    rep: IntegralRepresentation,
    s: float,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Integrate the representation numerically at s."""
    s = rep.check_argument(s)
    if s == 0.0:
        return 0.0

    def f(t: np.ndarray) -> np.ndarray:
        return rep.integrand(t, s)

    if rep.identity_id == IdentityId.EQ10:
        result = integrate_halfline(
            QuadratureProblem(
                lambda t: f(t) * rep.measure_weight(t),
                left_exponent=0.0,
                right_exponent=2.0,
                abs_tol=abs_tol,
                rel_tol=rel_tol,
            )
        )
    else:
        tail = (
            PowerWeightTail.LOGARITHMIC
            if rep.identity_id == IdentityId.EQ7
            else PowerWeightTail.LINEAR
        )
        result = integrate_with_power_weight(f, rep.alpha, tail, abs_tol=abs_tol, rel_tol=rel_tol)
    _LOGGER.debug(
        "%s at s=%r: %d evaluations, error %.3e",
        rep.identity_id,
        s,
        result.evaluations,
        result.error_estimate,
    )
    return rep.prefactor * result.value


def _simplex(x: VectorLike, tol: float = DEFAULT_SIMPLEX_TOL) -> PositiveVector:
    vector = as_positive_vector(x)
    total = math.fsum(vector.entries)
    if abs(total - 1.0) > tol:
        raise DomainError(f"Entries must sum to 1 within {tol:g}, got {total!r}")
    return vector


def sum_sq_logs(x: VectorLike) -> float:
    """Return sum_i (log x_i)**2."""
    return math.fsum(math.log(value) ** 2 for value in as_positive_vector(x))


def power_sum(x: VectorLike, alpha: float) -> float:
    """Return sum_i x_i**alpha for alpha in (0, 1) or (1, 2)."""
    if not (0.0 < alpha < 1.0 or 1.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (0, 1) or (1, 2), got {alpha!r}")
    return math.fsum(value**alpha for value in as_positive_vector(x))


def shannon_entropy(x: VectorLike, simplex_tol: float = DEFAULT_SIMPLEX_TOL) -> float:
    """Return -sum_i x_i log x_i of a probability vector."""
    vector = _simplex(x, simplex_tol)
    return -math.fsum(value * math.log(value) for value in vector)


def renyi_entropy(
    x: VectorLike, order: RenyiOrder, simplex_tol: float = DEFAULT_SIMPLEX_TOL
) -> float:
    """Return the Renyi entropy of a probability vector.

    Evaluated as log1p(sum_i x_i expm1((alpha-1) log x_i) / sum_i x_i) / (1-alpha),
    which equals log(sum_i x_i**alpha) / (1-alpha) on the simplex and stays
    accurate next to alpha = 1.
    """
    vector = _simplex(x, simplex_tol)
    if order.is_shannon:
        return shannon_entropy(vector, simplex_tol)
    if order.alpha == 0.0:
        return math.log(vector.n)
    beta = order.alpha - 1.0
    total = math.fsum(vector.entries)
    excess = math.fsum(value * math.expm1(beta * math.log(value)) for value in vector)
    return math.log1p(excess / total) / -beta


def min_relative_gap(x: VectorLike) -> float:
    """Return min over i < j of |x_i - x_j| / max(x_i, x_j); inf when n = 1."""
    values = sorted(as_positive_vector(x).entries)
    if len(values) < 2:
        return math.inf
    return min((b - a) / b for a, b in zip(values, values[1:], strict=False))


def _check_gap(vector: PositiveVector, gap_threshold: float) -> None:
    gap = min_relative_gap(vector)
    if not gap > gap_threshold:
        raise DegenerateSpectrumError(gap, gap_threshold)


_MP_CONTEXTS = threading.local()


def _mp_context(digits: int) -> mpmath.MPContext:
    """Return this thread's mpmath context set to `digits` decimal digits."""
    context = getattr(_MP_CONTEXTS, "context", None)
    if context is None:
        context = _MP_CONTEXTS.context = mpmath.MPContext()
    context.dps = digits
    return context


def divided_difference_digits(points: Sequence[float]) -> int:
    """Return the mpmath precision that keeps the Newton table exact to double precision.

    Level j of the table divides by node gaps, losing up to
    log10(scale / min gap) digits each time.
    """
    xs = sorted(float(point) for point in points)
    if len(xs) < 2:
        return DIVDIFF_BASE_DIGITS
    scale = max(abs(xs[0]), abs(xs[-1]), 1.0)
    gap = min(b - a for a, b in zip(xs, xs[1:], strict=False))
    if not gap > 0.0:
        raise DomainError("Divided differences need pairwise distinct points")
    lost = (len(xs) - 1) * max(0.0, math.log10(scale / gap))
    return DIVDIFF_BASE_DIGITS + math.ceil(lost)


def divided_difference(
    values: Sequence[float | mpmath.mpf],
    points: Sequence[float],
    digits: int | None = None,
) -> float:
    """Return the top divided difference f[p_1, ..., p_n] from the Newton table.

    The table runs in a per-thread mpmath context at `digits` decimal
    digits, by default enough for the node gaps. The divided difference is
    symmetric in its nodes, so the table is built over the ascending order;
    this fixes the operation sequence and makes the result bit-identical
    under any permutation of the input. Points must be pairwise distinct.
    """
    order = sorted(range(len(points)), key=lambda i: points[i])
    if digits is None:
        digits = divided_difference_digits(points)
    mp = _mp_context(digits)
    xs = [mp.mpf(points[i]) for i in order]
    column = [mp.mpf(values[i]) for i in order]
    for j in range(1, len(xs)):
        column = [(column[i + 1] - column[i]) / (xs[i + j] - xs[i]) for i in range(len(column) - 1)]
    return float(column[0])


def divided_difference_power(
    x: VectorLike, alpha: float, gap_threshold: float = DEFAULT_GAP_THRESHOLD
) -> float:
    """Return sum_i x_i**alpha / prod_{j != i} (x_i - x_j) for 0 < alpha < 1."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    vector = as_positive_vector(x)
    _check_gap(vector, gap_threshold)
    digits = divided_difference_digits(vector.entries)
    mp = _mp_context(digits)
    values = [mp.power(mp.mpf(value), alpha) for value in vector]
    return divided_difference(values, vector.entries, digits)


def subentropy_closed(x: VectorLike, gap_threshold: float = DEFAULT_GAP_THRESHOLD) -> float:
    """Return Q(x) = -sum_i x_i**n log x_i / prod_{j != i} (x_i - x_j).

    Only defined for well-separated spectra; confluent inputs raise
    DegenerateSpectrumError and need subentropy_integral.
    """
    vector = _simplex(x)
    _check_gap(vector, gap_threshold)
    n = vector.n
    digits = divided_difference_digits(vector.entries)
    mp = _mp_context(digits)
    values = [mp.power(point, n) * mp.log(point) for point in map(mp.mpf, vector)]
    return -divided_difference(values, vector.entries, digits)


def subentropy_integral(
    x: VectorLike,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Return Q(x) by quadrature; valid for repeated entries.

    Q = -int_0^inf [t**n / prod_j (t + x_j) - t / (t + e_1)] dt - e_1 log e_1.
    Beyond t = 1 the bracket is rewritten in u = 1/t through log1p(z) - z so
    that the two nearly equal products never get subtracted directly.
    """
    vector = _simplex(x)
    arr = vector.as_array()
    e1 = math.fsum(vector.entries)
    if vector.n == 1:
        return -e1 * math.log(e1)

    def bracket(t: np.ndarray) -> np.ndarray:
        near = t <= 1.0
        t_near = np.where(near, t, 1.0)
        head = np.prod(t_near[:, None] / (t_near[:, None] + arr[None, :]), axis=1) - t_near / (
            t_near + e1
        )
        u = np.where(near, 1.0, 1.0 / t)
        exponent = log1p_minus_identity(u * e1) - np.sum(
            log1p_minus_identity(u[:, None] * arr[None, :]), axis=1
        )
        tail = np.expm1(exponent) / (1.0 + u * e1)
        return np.where(near, head, tail)

    result = integrate_halfline(
        QuadratureProblem(
            bracket,
            left_exponent=1.0,
            right_exponent=2.0,
            abs_tol=abs_tol,
            rel_tol=rel_tol,
        )
    )
    _LOGGER.debug("Subentropy integral: %d evaluations", result.evaluations)
    return -result.value - e1 * math.log(e1)


def psi_uniform_closed(s: float, kernel: PsiKernel) -> float:
    """Return psi(s) for the uniform density on [0, 1]."""
    s = float(s)
    if not math.isfinite(s) or s <= 0.0:
        raise DomainError(f"s must be finite and > 0, got {s!r}")
    if kernel == PsiKernel.ONE_PLUS_TS:
        return ((1.0 + s) * math.log1p(s) - s) / s
    return (1.0 + s) * math.log1p(s) - s * math.log(s) - 1.0


def psi_sum(
    x: VectorLike,
    kernel: PsiKernel,
    upper: float = 1.0,
    density: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """Return sum_i psi(x_i), psi(s) = int_0^upper k(t, s) density(t) dt.

    k is log(1 + t s) or log(t + s) depending on the kernel; the density must
    be nonnegative on [0, upper] and defaults to 1.
    """
    vector = as_positive_vector(x)
    if not math.isfinite(upper) or upper <= 0.0:
        raise DomainError(f"upper must be finite and > 0, got {upper!r}")
    kernel = PsiKernel(kernel)

    def make(s: float) -> Callable[[np.ndarray], np.ndarray]:
        def integrand(t: np.ndarray) -> np.ndarray:
            base = np.log1p(t * s) if kernel == PsiKernel.ONE_PLUS_TS else np.log(t + s)
            return base if density is None else base * np.asarray(density(t), dtype=float)

        return integrand

    terms = [integrate_interval(make(value), 0.0, upper).value for value in vector]
    return math.fsum(terms)
