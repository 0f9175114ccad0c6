from __future__ import annotations

import math
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esym_order.errors import DegenerateSpectrumError, DomainError
from esym_order.scalar_functionals import (
    IdentityId,
    IntegralRepresentation,
    PsiKernel,
    RenyiOrder,
    divided_difference,
    divided_difference_digits,
    divided_difference_power,
    eval_integral_identity,
    log1p_minus_identity,
    min_relative_gap,
    power_sum,
    psi_sum,
    psi_uniform_closed,
    renyi_entropy,
    shannon_entropy,
    subentropy_closed,
    subentropy_integral,
    sum_sq_logs,
)

SKEWED = (0.5, 0.25, 0.25)


@pytest.mark.parametrize(
    ("x", "expected"),
    [
        ((1.0, 1.0, 1.0), 0.0),
        ((math.e, 1.0 / math.e), 2.0),
        ((2.0, 0.5), 2.0 * math.log(2.0) ** 2),
    ],
)
def test_sum_sq_logs(x: tuple[float, ...], expected: float) -> None:
    assert sum_sq_logs(x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 1.5, 2.0])
def test_renyi_entropy_uniform(n: int, alpha: float) -> None:
    assert renyi_entropy([1.0 / n] * n, RenyiOrder(alpha)) == pytest.approx(math.log(n))


def test_renyi_entropy_single_outcome() -> None:
    for alpha in (0.0, 0.5, 2.0):
        assert renyi_entropy([1.0], RenyiOrder(alpha)) == pytest.approx(0.0, abs=1e-15)


def test_renyi_entropy_collision() -> None:
    assert renyi_entropy(SKEWED, RenyiOrder(2.0)) == pytest.approx(-math.log(0.375))


def test_renyi_entropy_order_zero_is_log_support() -> None:
    assert renyi_entropy((0.7, 0.2, 0.1), RenyiOrder(0.0)) == pytest.approx(math.log(3.0))


def test_shannon_entropy() -> None:
    assert shannon_entropy([0.25] * 4) == pytest.approx(math.log(4.0))
    assert shannon_entropy([1.0]) == 0.0
    assert shannon_entropy(SKEWED) == pytest.approx(1.5 * math.log(2.0))
    assert renyi_entropy(SKEWED, RenyiOrder.shannon()) == shannon_entropy(SKEWED)


@pytest.mark.parametrize("step", [1e-6, -1e-6])
def test_shannon_is_renyi_limit(step: float) -> None:
    x = (0.6, 0.3, 0.1)
    assert abs(renyi_entropy(x, RenyiOrder(1.0 + step)) - shannon_entropy(x)) <= 1e-5


@pytest.mark.parametrize("alpha", [-0.1, 1.0, 2.5, math.nan])
def test_renyi_order_validation(alpha: float) -> None:
    with pytest.raises(DomainError):
        RenyiOrder(alpha)


def test_renyi_order_labels() -> None:
    assert RenyiOrder.shannon().label == "shannon"
    assert RenyiOrder(0.5).label == "0.5"


def test_entropies_require_simplex() -> None:
    with pytest.raises(DomainError):
        renyi_entropy([0.5, 0.6], RenyiOrder(2.0))
    with pytest.raises(DomainError):
        shannon_entropy([1.0, 1.0])


@pytest.mark.parametrize(
    ("x", "alpha", "expected"),
    [((1.0, 1.0), 0.5, 2.0), ((4.0,), 0.5, 2.0), (SKEWED, 1.5, 0.5**1.5 + 2 * 0.25**1.5)],
)
def test_power_sum(x: tuple[float, ...], alpha: float, expected: float) -> None:
    assert power_sum(x, alpha) == pytest.approx(expected)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0])
def test_power_sum_rejects_alpha(alpha: float) -> None:
    with pytest.raises(DomainError):
        power_sum([1.0], alpha)


def test_divided_difference_power_examples() -> None:
    assert divided_difference_power([4.0, 1.0], 0.5) == pytest.approx(1.0 / 3.0)
    assert divided_difference_power([1.0, 4.0], 0.5) == pytest.approx(1.0 / 3.0)
    assert divided_difference_power([9.0], 0.5) == pytest.approx(3.0)


def test_divided_difference_power_rejects_confluent_points() -> None:
    with pytest.raises(DegenerateSpectrumError):
        divided_difference_power([1.0, 1.0 + 1e-9], 0.5)
    with pytest.raises(DomainError):
        divided_difference_power([1.0, 2.0], 1.5)


def test_divided_difference_of_quadratic_is_leading_coefficient() -> None:
    points = [1.0, 2.0, 3.0]
    assert divided_difference([3 * t * t + t for t in points], points) == pytest.approx(3.0)


@given(
    st.lists(st.integers(min_value=1, max_value=60), min_size=1, max_size=6, unique=True),
    st.randoms(use_true_random=False),
)
@settings(max_examples=60, deadline=None)
def test_divided_difference_is_permutation_invariant(ticks: list[int], rnd: Random) -> None:
    points = [tick / 10.0 for tick in ticks]
    shuffled = list(points)
    rnd.shuffle(shuffled)
    values = [math.exp(-p) for p in points]
    shuffled_values = [math.exp(-p) for p in shuffled]
    assert divided_difference(shuffled_values, shuffled) == divided_difference(values, points)


def test_min_relative_gap() -> None:
    assert min_relative_gap([1.0, 2.0, 4.0]) == pytest.approx(0.5)
    assert min_relative_gap([3.0]) == math.inf


def test_subentropy_two_point_closed_form() -> None:
    x = (2.0 / 3.0, 1.0 / 3.0)
    expected = -((4 / 9) * math.log(2 / 3) - (1 / 9) * math.log(1 / 3)) / (1 / 3)
    assert subentropy_closed(x) == pytest.approx(expected, rel=1e-12)
    assert subentropy_integral(x) == pytest.approx(expected, abs=1e-7)


def test_subentropy_single_outcome() -> None:
    assert subentropy_integral([1.0]) == 0.0


def test_subentropy_closed_rejects_near_degenerate() -> None:
    with pytest.raises(DegenerateSpectrumError):
        subentropy_closed([0.5 + 1e-9, 0.5 - 1e-9])


def test_subentropy_confluent_limit() -> None:
    confluent = subentropy_integral([0.5, 0.5])
    assert confluent == pytest.approx(math.log(2.0) - 0.5, abs=1e-7)
    eps = 1e-4
    assert abs(subentropy_closed([0.5 + eps, 0.5 - eps]) - confluent) <= 1e-6


@pytest.mark.parametrize(
    "x",
    [(0.5, 0.3, 0.2), (0.7, 0.2, 0.1), (0.4, 0.3, 0.2, 0.1), (0.35, 0.25, 0.2, 0.12, 0.08)],
)
def test_subentropy_evaluators_agree(x: tuple[float, ...]) -> None:
    assert subentropy_integral(x) == pytest.approx(subentropy_closed(x), abs=1e-7)


def _normalised(weights: list[float]) -> tuple[float, ...]:
    total = math.fsum(weights)
    return tuple(weight / total for weight in weights)


@pytest.mark.parametrize(
    "x",
    [
        (0.2, 0.2004, 0.2008, 0.1992, 0.1996),
        _normalised([1.0, 1.0002, 1.0004, 0.9998]),
        _normalised([1.0, 1.0015, 1.003, 0.9985, 0.997, 1.0045, 0.9955]),
    ],
)
def test_subentropy_evaluators_agree_on_clustered_spectra(x: tuple[float, ...]) -> None:
    assert min_relative_gap(x) > 1e-4
    assert abs(subentropy_closed(x) - subentropy_integral(x)) <= 1e-7


def test_divided_difference_digits_grow_with_clustering() -> None:
    assert divided_difference_digits([2.0]) == 30
    assert divided_difference_digits([0.2, 0.2002, 0.2004]) > divided_difference_digits(
        [0.2, 0.4, 0.6]
    )
    with pytest.raises(DomainError):
        divided_difference_digits([0.5, 0.5])


def test_divided_difference_power_on_close_nodes() -> None:
    low, high = 1.0, 1.0005
    expected = (math.sqrt(high) - math.sqrt(low)) / (high - low)
    assert divided_difference_power([high, low], 0.5) == pytest.approx(expected, rel=1e-9)


def test_subentropy_uniform_three() -> None:
    # repeated entries only go through the integral form
    value = subentropy_integral([1 / 3] * 3)
    assert 0.0 < value < math.log(3.0)


def test_log1p_minus_identity() -> None:
    assert log1p_minus_identity(0.5) == pytest.approx(math.log(1.5) - 0.5, rel=1e-14)
    z = 1e-6
    assert log1p_minus_identity(z) == pytest.approx(-z * z / 2 + z**3 / 3, rel=1e-12)
    assert isinstance(log1p_minus_identity(0.1), float)


def test_eq10_identity_at_one_is_zero() -> None:
    rep = IntegralRepresentation.for_identity(IdentityId.EQ10)
    assert eval_integral_identity(rep, 1.0) == 0.0


@pytest.mark.parametrize(
    ("identity_id", "alpha", "s"),
    [
        (IdentityId.EQ7, 0.5, 1.0),
        (IdentityId.EQ7, 0.3, 10.0),
        (IdentityId.EQ8, 1.5, 2.0),
        (IdentityId.EQ8, 1.9, 0.1),
        (IdentityId.EQ10, None, 2.0),
        (IdentityId.EQ10, None, 0.1),
    ],
)
def test_integral_identities_match_closed_forms(
    identity_id: IdentityId, alpha: float | None, s: float
) -> None:
    rep = IntegralRepresentation.for_identity(identity_id, alpha)
    expected = rep.closed_form(s)
    assert abs(eval_integral_identity(rep, s) - expected) <= max(1e-6, 1e-6 * abs(expected))


def test_eq8_prefactor_is_negative() -> None:
    assert IntegralRepresentation.for_identity(IdentityId.EQ8, 1.5).prefactor < 0.0


@pytest.mark.parametrize(
    ("identity_id", "alpha"),
    [(IdentityId.EQ7, 1.5), (IdentityId.EQ8, 0.5), (IdentityId.EQ7, None)],
)
def test_integral_representation_validates_alpha(
    identity_id: IdentityId, alpha: float | None
) -> None:
    with pytest.raises(DomainError):
        IntegralRepresentation.for_identity(identity_id, alpha)


def test_eq10_rejects_zero_argument() -> None:
    rep = IntegralRepresentation.for_identity(IdentityId.EQ10)
    with pytest.raises(DomainError):
        eval_integral_identity(rep, 0.0)
    eq7 = IntegralRepresentation.for_identity(IdentityId.EQ7, 0.5)
    assert eval_integral_identity(eq7, 0.0) == 0.0


@pytest.mark.parametrize("kernel", list(PsiKernel))
def test_psi_sum_uniform_density_matches_closed_form(kernel: PsiKernel) -> None:
    x = (0.5, 2.0, 3.0)
    expected = math.fsum(psi_uniform_closed(value, kernel) for value in x)
    assert psi_sum(x, kernel) == pytest.approx(expected, rel=1e-8)


def test_psi_sum_custom_density() -> None:
    # density 2t on [0, 1]: int_0^1 2 t log(1 + t) dt = 1/2
    assert psi_sum([1.0], PsiKernel.ONE_PLUS_TS, density=lambda t: 2.0 * t) == pytest.approx(
        0.5, rel=1e-9
    )
    with pytest.raises(DomainError):
        psi_sum([1.0], PsiKernel.T_PLUS_S, upper=0.0)
