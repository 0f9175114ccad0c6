"""Adaptive Gauss-Legendre integration on finite intervals and on [0, inf)."""

from __future__ import annotations

import heapq
import itertools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from .const import (
    DEFAULT_ABS_TOL,
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_REL_TOL,
    GAUSS_ORDER,
    HALFLINE_SPLIT,
)
from .errors import DomainError, NonConvergenceError

_LOGGER = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray | float]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


@dataclass(frozen=True)
class QuadratureResult:
    """Integral estimate with its error bound and evaluation count."""

    value: float
    error_estimate: float
    evaluations: int

    def __add__(self, other: QuadratureResult) -> QuadratureResult:
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
        )

    def scaled(self, factor: float) -> QuadratureResult:
        """Return the result multiplied by a constant."""
        return QuadratureResult(
            self.value * factor, self.error_estimate * abs(factor), self.evaluations
        )


@dataclass(frozen=True)
class QuadratureProblem:
    """Integrand on (0, inf) with its endpoint behaviour.

    The integrand behaves like t**left_exponent near 0 and like
    t**(-right_exponent), possibly times log t, at infinity. It must accept
    a numpy array of abscissae and return values of the same shape.
    """

    integrand: Integrand
    left_exponent: float = 0.0
    right_exponent: float = 2.0
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    max_depth: int = DEFAULT_MAX_DEPTH
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS

    def __post_init__(self) -> None:
        """Validate integrability and tolerances."""
        if not self.left_exponent > -1.0:
            raise DomainError(f"left_exponent must be > -1, got {self.left_exponent}")
        if not self.right_exponent > 1.0:
            raise DomainError(f"right_exponent must be > 1, got {self.right_exponent}")
        _check_tolerances(self.abs_tol, self.rel_tol, self.max_depth)


class PowerWeightTail(StrEnum):
    """Shape of f in the weighted integral of f(t) t^(-alpha-1).

    LOGARITHMIC: f ~ t near 0 and grows like log t (the s**alpha identity, 0 < alpha < 1).
    LINEAR: f ~ t**2 near 0 and grows like t (the s**alpha identity, 1 < alpha < 2).
    """

    LOGARITHMIC = "logarithmic"
    LINEAR = "linear"


def _check_tolerances(abs_tol: float, rel_tol: float, max_depth: int) -> None:
    if not (math.isfinite(abs_tol) and abs_tol > 0.0):
        raise DomainError(f"abs_tol must be finite and > 0, got {abs_tol}")
    if not (math.isfinite(rel_tol) and rel_tol > 0.0):
        raise DomainError(f"rel_tol must be finite and > 0, got {rel_tol}")
    if max_depth < 1:
        raise DomainError(f"max_depth must be >= 1, got {max_depth}")


def _evaluate(f: Integrand, points: np.ndarray) -> np.ndarray:
    values = np.asarray(f(points), dtype=float)
    if values.shape != points.shape:
        values = np.broadcast_to(values, points.shape)
    if not np.all(np.isfinite(values)):
        raise NonConvergenceError(
            "Integrand returned non-finite values",
            achieved_error=math.inf,
            evaluations=points.size,
        )
    return values


def _panel(f: Integrand, left: float, right: float) -> float:
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    return half * float(np.dot(_WEIGHTS, _evaluate(f, mid + half * _NODES)))


def _power_substitution(f: Integrand, a: float, b: float, exponent: float) -> Integrand:
    power = 1.0 / (1.0 + exponent)
    width = b - a

    def substituted(v: np.ndarray) -> np.ndarray:
        t = a + width * v**power
        return np.asarray(f(t), dtype=float) * width * power * v ** (power - 1.0)

    return substituted


def integrate_interval(
    f: Integrand,
    a: float,
    b: float,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    left_exponent: float = 0.0,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> QuadratureResult:
    """Integrate f over [a, b] by globally adaptive bisection.

    Each panel is scored by the difference between its Gauss-Legendre value
    and the sum over its two halves; the worst panel is split until the
    summed estimate meets max(abs_tol, rel_tol * |value|). Nodes are interior,
    so f is never evaluated at a or b. A negative left_exponent p (f ~ (t-a)**p)
    is removed by the substitution t = a + (b - a) v**(1/(1+p)).
    """
    _check_tolerances(abs_tol, rel_tol, max_depth)
    if not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise DomainError(f"Need finite a <= b, got [{a}, {b}]")
    if not left_exponent > -1.0:
        raise DomainError(f"left_exponent must be > -1, got {left_exponent}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)

    if left_exponent < 0.0:
        g = _power_substitution(f, a, b, left_exponent)
        lo, hi = 0.0, 1.0
    else:
        g = f
        lo, hi = a, b

    counter = itertools.count()
    evaluations = 0

    def split(left: float, right: float) -> tuple[float, float, float]:
        nonlocal evaluations
        mid = 0.5 * (left + right)
        first = _panel(g, left, mid)
        second = _panel(g, mid, right)
        evaluations += 2 * GAUSS_ORDER
        return mid, first, second

    coarse = _panel(g, lo, hi)
    evaluations += GAUSS_ORDER
    mid, first, second = split(lo, hi)
    # heap entries: (-error, tie, left, mid, right, depth, first, second, error)
    error = abs(coarse - (first + second))
    heap = [(-error, next(counter), lo, mid, hi, 1, first, second, error)]
    running_value = first + second
    running_error = error

    while True:
        if running_error <= max(abs_tol, rel_tol * abs(running_value)):
            value = math.fsum(entry[6] + entry[7] for entry in heap)
            total_error = math.fsum(entry[8] for entry in heap)
            if total_error <= max(abs_tol, rel_tol * abs(value)):
                _LOGGER.debug(
                    "Integral over [%s, %s] converged: value=%r error=%.3e evaluations=%d",
                    a,
                    b,
                    value,
                    total_error,
                    evaluations,
                )
                return QuadratureResult(value, total_error, evaluations)
            running_value, running_error = value, total_error

        _, _, left, mid, right, depth, first, second, error = heapq.heappop(heap)
        if depth >= max_depth or evaluations >= max_evaluations:
            value = math.fsum([first, second, *(entry[6] + entry[7] for entry in heap)])
            total_error = math.fsum([error, *(entry[8] for entry in heap)])
            reason = "max_depth" if depth >= max_depth else "max_evaluations"
            raise NonConvergenceError(
                f"Quadrature over [{a}, {b}] stopped at {reason}: "
                f"estimate {value!r}, error {total_error:.3e}",
                best_estimate=value,
                achieved_error=total_error,
                evaluations=evaluations,
            )

        running_value -= first + second
        running_error -= error
        for child_left, child_right, child_coarse in (
            (left, mid, first),
            (mid, right, second),
        ):
            child_mid, a_half, b_half = split(child_left, child_right)
            child_error = abs(child_coarse - (a_half + b_half))
            heapq.heappush(
                heap,
                (
                    -child_error,
                    next(counter),
                    child_left,
                    child_mid,
                    child_right,
                    depth + 1,
                    a_half,
                    b_half,
                    child_error,
                ),
            )
            running_value += a_half + b_half
            running_error += child_error


def integrate_halfline(problem: QuadratureProblem) -> QuadratureResult:
    """Integrate over [0, inf) by splitting at t = 1 and inverting the tail.

    The tail [1, inf) is mapped to (0, 1] by t = w**(-k), with k = 1 when the
    decay exponent q is at least 2 and k = 1/(q - 1) otherwise, which leaves a
    bounded integrand at w = 0.
    """
    f = problem.integrand
    abs_tol = 0.5 * problem.abs_tol

    head = integrate_interval(
        f,
        0.0,
        HALFLINE_SPLIT,
        abs_tol=abs_tol,
        rel_tol=problem.rel_tol,
        max_depth=problem.max_depth,
        left_exponent=problem.left_exponent,
        max_evaluations=problem.max_evaluations,
    )

    q = problem.right_exponent
    k = 1.0 if q >= 2.0 else 1.0 / (q - 1.0)

    def tail(w: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            t = HALFLINE_SPLIT * w ** (-k)
            finite = np.isfinite(t)
            safe_t = np.where(finite, t, 1.0)
            values = np.asarray(f(safe_t), dtype=float) * safe_t * k / w
        return np.where(finite, values, 0.0)

    rest = integrate_interval(
        tail,
        0.0,
        1.0,
        abs_tol=abs_tol,
        rel_tol=problem.rel_tol,
        max_depth=problem.max_depth,
        max_evaluations=max(problem.max_evaluations - head.evaluations, 1),
    )
    return head + rest


def integrate_with_power_weight(
    f: Integrand,
    alpha_exponent: float,
    tail: PowerWeightTail,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> QuadratureResult:
    """Integrate f(t) * t**(-alpha-1) over (0, inf).

    The tail flag fixes the endpoint exponents: LOGARITHMIC gives p = -alpha,
    q = 1 + alpha and needs 0 < alpha < 1; LINEAR gives p = 1 - alpha,
    q = alpha and needs 1 < alpha < 2.
    """
    alpha = float(alpha_exponent)
    if tail == PowerWeightTail.LOGARITHMIC:
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"Logarithmic tail needs 0 < alpha < 1, got {alpha}")
        p, q = -alpha, 1.0 + alpha
    else:
        if not 1.0 < alpha < 2.0:
            raise DomainError(f"Linear tail needs 1 < alpha < 2, got {alpha}")
        p, q = 1.0 - alpha, alpha

    def weighted(t: np.ndarray) -> np.ndarray:
        return np.asarray(f(t), dtype=float) * t ** (-alpha - 1.0)

    return integrate_halfline(
        QuadratureProblem(
            weighted,
            left_exponent=p,
            right_exponent=q,
            abs_tol=abs_tol,
            rel_tol=rel_tol,
        )
    )
