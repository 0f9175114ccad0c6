from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import pytest

from esym_order.errors import DomainError, NonConvergenceError
from esym_order.quadrature import (
    PowerWeightTail,
    QuadratureProblem,
    integrate_halfline,
    integrate_interval,
    integrate_with_power_weight,
)

MAX_CALIBRATION_EVALUATIONS = 20_000


def test_integrate_interval_sine() -> None:
    result = integrate_interval(np.sin, 0.0, math.pi)
    assert result.value == pytest.approx(2.0, abs=1e-12)
    assert result.error_estimate <= 1e-10


def test_integrate_interval_empty() -> None:
    result = integrate_interval(np.exp, 1.0, 1.0)
    assert result.value == 0.0
    assert result.evaluations == 0


def test_integrate_interval_singular_left_endpoint() -> None:
    result = integrate_interval(lambda t: t**-0.5, 0.0, 1.0, left_exponent=-0.5)
    assert result.value == pytest.approx(2.0, rel=1e-9)


@pytest.mark.parametrize(
    ("integrand", "expected"),
    [
        (lambda t: np.exp(-t), 1.0),
        (lambda t: 1.0 / (1.0 + t) ** 2, 1.0),
    ],
)
def test_integrate_halfline_calibration(
    integrand: Callable[[np.ndarray], np.ndarray], expected: float
) -> None:
    result = integrate_halfline(QuadratureProblem(integrand))
    assert result.value == pytest.approx(expected, abs=1e-10)
    assert result.error_estimate <= max(1e-10, 1e-8 * abs(result.value))
    assert result.evaluations <= MAX_CALIBRATION_EVALUATIONS


def test_integrate_halfline_log_square_identity() -> None:
    s = 2.0

    def integrand(t: np.ndarray) -> np.ndarray:
        z = np.minimum(t, 1.0 / t)
        return (np.log1p(z * s) + np.log1p(z / s) - 2.0 * np.log1p(z)) / t

    result = integrate_halfline(QuadratureProblem(integrand))
    assert result.value == pytest.approx(math.log(2.0) ** 2, abs=1e-9)
    assert result.evaluations <= MAX_CALIBRATION_EVALUATIONS


@pytest.mark.parametrize(("s", "expected"), [(1.0, 1.0), (2.0, math.sqrt(2.0))])
def test_integrate_with_power_weight_logarithmic(s: float, expected: float) -> None:
    alpha = 0.5
    prefactor = alpha * math.sin(alpha * math.pi) / math.pi
    result = integrate_with_power_weight(
        lambda t: np.log1p(s * t), alpha, PowerWeightTail.LOGARITHMIC
    )
    assert prefactor * result.value == pytest.approx(expected, rel=1e-7)
    assert result.evaluations <= MAX_CALIBRATION_EVALUATIONS


def test_integrate_with_power_weight_linear() -> None:
    alpha = 1.5
    prefactor = alpha * math.sin(alpha * math.pi) / math.pi
    result = integrate_with_power_weight(
        lambda t: np.log1p(t) - t, alpha, PowerWeightTail.LINEAR
    )
    assert prefactor * result.value == pytest.approx(1.0, rel=1e-7)


def test_integrate_with_power_weight_zero_function() -> None:
    result = integrate_with_power_weight(np.zeros_like, 0.5, PowerWeightTail.LOGARITHMIC)
    assert result.value == 0.0


@pytest.mark.parametrize(
    ("alpha", "tail"),
    [(1.5, PowerWeightTail.LOGARITHMIC), (0.5, PowerWeightTail.LINEAR), (0.0, "logarithmic")],
)
def test_integrate_with_power_weight_rejects_alpha(alpha: float, tail: PowerWeightTail) -> None:
    with pytest.raises(DomainError):
        integrate_with_power_weight(np.log1p, alpha, PowerWeightTail(tail))


def test_quadrature_is_deterministic() -> None:
    problem = QuadratureProblem(lambda t: np.log1p(t) / (1.0 + t) ** 2)
    assert integrate_halfline(problem) == integrate_halfline(problem)


@pytest.mark.parametrize("factor", [2.0, 10.0])
def test_quadrature_is_linear(factor: float) -> None:
    def base(t: np.ndarray) -> np.ndarray:
        return np.exp(-t) * np.cos(t)

    plain = integrate_halfline(QuadratureProblem(base)).value
    scaled = integrate_halfline(QuadratureProblem(lambda t: factor * base(t))).value
    assert scaled == pytest.approx(factor * plain, rel=2e-8)
    assert plain == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"left_exponent": -1.0},
        {"right_exponent": 1.0},
        {"abs_tol": 0.0},
        {"rel_tol": -1e-8},
        {"max_depth": 0},
    ],
)
def test_quadrature_problem_validation(kwargs: dict[str, float]) -> None:
    with pytest.raises(DomainError):
        QuadratureProblem(np.exp, **kwargs)


def test_non_convergence_reports_best_estimate() -> None:
    with pytest.raises(NonConvergenceError) as info:
        integrate_interval(
            lambda t: np.abs(t - 0.3) ** 0.1, 0.0, 1.0, abs_tol=1e-15, rel_tol=1e-15, max_depth=2
        )
    err = info.value
    assert math.isfinite(err.best_estimate)
    assert err.achieved_error > 0.0
    assert err.evaluations > 0


def test_non_finite_integrand_raises() -> None:
    with pytest.raises(NonConvergenceError):
        integrate_interval(lambda t: np.full_like(t, np.nan), 0.0, 1.0)


def test_non_convergence_is_arithmetic_error() -> None:
    with pytest.raises(ArithmeticError):
        integrate_interval(lambda t: 1.0 / np.abs(t - 1.0 / 3.0), 0.0, 1.0, max_evaluations=200)
