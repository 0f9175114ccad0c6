from __future__ import annotations

import math

import numpy as np
import pytest

from esym_order.dominance_sampling import random_orthogonal, random_spd, trial_rng
from esym_order.errors import DimensionMismatchError, DomainError, EigenNoConvergenceError
from esym_order.esym_core import DominanceKind, compare
from esym_order.matrix_ops import (
    SpdMatrix,
    congruence,
    eigendecompose,
    exterior_trace,
    inv_sqrtm,
    jacobi_eigh,
    logdet,
    logdet_I_plus,
    logm,
    matrix_compare,
    quantum_renyi,
    riemannian_distance,
    s_divergence,
    spectrum_of_product,
    sqrtm,
)
from esym_order.scalar_functionals import RenyiOrder, renyi_entropy


def _random(index: int, n: int = 4) -> SpdMatrix:
    return random_spd(trial_rng(2024, index), n, (0.2, 5.0))


def test_jacobi_diagonal_input() -> None:
    values, vectors = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert values == pytest.approx([1.0, 2.0, 3.0])
    assert np.allclose(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_two_by_two() -> None:
    values, _ = jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert values == pytest.approx([1.0, 3.0], abs=1e-14)


def test_jacobi_reports_non_convergence() -> None:
    a = random_spd(trial_rng(1, 0), 6).as_array()
    with pytest.raises(EigenNoConvergenceError) as info:
        jacobi_eigh(a, max_sweeps=0)
    assert info.value.sweeps == 0
    assert info.value.off_diagonal > 0.0


def test_eigendecompose_examples() -> None:
    values, vectors = eigendecompose(SpdMatrix.diagonal([1.0, 2.0, 3.0]))
    assert values == pytest.approx([1.0, 2.0, 3.0])
    assert np.allclose(np.abs(vectors), np.eye(3))
    identity_values, _ = eigendecompose(SpdMatrix.from_array(np.eye(5)))
    assert identity_values == pytest.approx([1.0] * 5)


@pytest.mark.parametrize("index", range(5))
@pytest.mark.parametrize("n", [2, 5, 8])
def test_eigendecompose_reconstructs(index: int, n: int) -> None:
    a = _random(index, n)
    values, vectors = eigendecompose(a)
    residual = np.linalg.norm(vectors @ np.diag(values) @ vectors.T - a.entries)
    assert residual <= 1e-10 * a.frobenius_norm
    assert np.allclose(vectors.T @ vectors, np.eye(n), atol=1e-12)


@pytest.mark.parametrize(
    "values",
    [
        [[1.0, 2.0]],
        [[1.0, 0.5], [0.4, 1.0]],
        [[1.0, 2.0], [2.0, 1.0]],
        [[1.0, math.nan], [math.nan, 1.0]],
        np.eye(17),
    ],
)
def test_spd_matrix_validation(values: list[list[float]]) -> None:
    with pytest.raises(DomainError):
        SpdMatrix.from_array(values)


def test_spd_matrix_is_read_only() -> None:
    a = SpdMatrix.diagonal([1.0, 2.0])
    with pytest.raises(ValueError):
        a.entries[0, 0] = 5.0
    copy = a.as_array()
    copy[0, 0] = 5.0
    assert a.entries[0, 0] == 1.0
    assert a.trace == pytest.approx(3.0)
    assert a.spectrum == pytest.approx((1.0, 2.0))


def test_spectral_calculus() -> None:
    a = _random(0)
    root = sqrtm(a)
    assert np.allclose(root @ root, a.entries, atol=1e-12)
    assert np.allclose(inv_sqrtm(a) @ a.entries @ inv_sqrtm(a), np.eye(4), atol=1e-12)
    assert np.trace(logm(a)) == pytest.approx(logdet(a))


def test_exterior_trace() -> None:
    a = SpdMatrix.diagonal([1.0, 2.0, 3.0])
    assert exterior_trace(a, 2) == pytest.approx(11.0)
    assert exterior_trace(a, 3) == pytest.approx(6.0)
    b = _random(1)
    assert exterior_trace(b, 1) == pytest.approx(b.trace, rel=1e-10)
    assert exterior_trace(b, 4) == pytest.approx(np.linalg.det(b.entries), rel=1e-10)
    with pytest.raises(DomainError):
        exterior_trace(a, 0)


def test_matrix_compare() -> None:
    a = SpdMatrix.diagonal([2.0, 0.5])
    b = SpdMatrix.diagonal([4.0, 0.25])
    assert matrix_compare(a, b).kind == DominanceKind.STRICT_ORDER
    assert matrix_compare(a, a).kind == DominanceKind.EQUAL


@pytest.mark.parametrize("index", range(4))
def test_matrix_compare_matches_spectral_compare(index: int) -> None:
    a, b = _random(index), _random(index + 10)
    assert matrix_compare(a, b) == compare(a.eigenvalues, b.eigenvalues)


def test_matrix_compare_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        matrix_compare(SpdMatrix.diagonal([1.0]), SpdMatrix.diagonal([1.0, 2.0]))


def test_logdet_I_plus() -> None:
    assert logdet_I_plus(SpdMatrix.from_array(np.eye(2))) == pytest.approx(2.0 * math.log(2.0))
    assert logdet_I_plus(SpdMatrix.diagonal([1.0, 2.0, 3.0])) == pytest.approx(math.log(24.0))
    a = _random(3, 6)
    sign, expected = np.linalg.slogdet(np.eye(6) + a.entries)
    assert sign == 1.0
    assert logdet_I_plus(a) == pytest.approx(expected, rel=1e-9)


def test_riemannian_distance() -> None:
    a = SpdMatrix.diagonal([math.e, math.e])
    identity = SpdMatrix.from_array(np.eye(2))
    assert riemannian_distance(a, identity) == pytest.approx(math.sqrt(2.0))
    b = _random(4)
    assert riemannian_distance(b, b) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("index", range(3))
def test_riemannian_distance_is_symmetric_and_invariant(index: int) -> None:
    a, b = _random(index), _random(index + 20)
    assert riemannian_distance(a, b) == pytest.approx(riemannian_distance(b, a), rel=1e-9)
    w = random_orthogonal(trial_rng(7, index), 4) * 1.5
    moved_a = SpdMatrix.from_array(congruence(a, w))
    moved_b = SpdMatrix.from_array(congruence(b, w))
    assert riemannian_distance(moved_a, moved_b) == pytest.approx(
        riemannian_distance(a, b), rel=1e-9
    )


def test_spectrum_of_product() -> None:
    a = SpdMatrix.diagonal([2.0, 6.0])
    c = SpdMatrix.diagonal([1.0, 2.0])
    assert spectrum_of_product(a, c) == pytest.approx([2.0, 3.0])


def test_s_divergence() -> None:
    expected = math.log(2.5) - 0.5 * math.log(4.0)
    assert s_divergence(SpdMatrix.diagonal([4.0]), SpdMatrix.diagonal([1.0])) == pytest.approx(
        expected
    )
    a = _random(5)
    assert s_divergence(a, a) == pytest.approx(0.0, abs=1e-12)
    assert s_divergence(a, _random(6)) > 0.0


def test_quantum_renyi() -> None:
    order = RenyiOrder(0.5)
    assert quantum_renyi(SpdMatrix.from_array(np.eye(4) / 4), order) == pytest.approx(
        math.log(4.0)
    )
    diagonal = (0.5, 0.3, 0.2)
    assert quantum_renyi(SpdMatrix.diagonal(diagonal), order) == pytest.approx(
        renyi_entropy(diagonal, order), rel=1e-12
    )


def test_quantum_renyi_is_conjugation_invariant() -> None:
    x = SpdMatrix.diagonal([0.4, 0.35, 0.15, 0.1])
    w = random_orthogonal(trial_rng(3, 0), 4)
    rotated = SpdMatrix.from_array(congruence(x, w))
    for alpha in (0.0, 0.5, 2.0):
        order = RenyiOrder(alpha)
        assert quantum_renyi(rotated, order) == pytest.approx(quantum_renyi(x, order), abs=1e-9)


def test_quantum_renyi_requires_unit_trace() -> None:
    with pytest.raises(DomainError):
        quantum_renyi(SpdMatrix.diagonal([0.5, 0.6]), RenyiOrder(2.0))


def test_quantum_renyi_honours_loose_trace_tolerance() -> None:
    x = SpdMatrix.diagonal([0.5, 0.5 + 1e-6])
    with pytest.raises(DomainError):
        quantum_renyi(x, RenyiOrder(2.0))
    assert quantum_renyi(x, RenyiOrder(2.0), trace_tol=1e-5) == pytest.approx(
        math.log(2.0), abs=1e-5
    )
    assert quantum_renyi(x, RenyiOrder.shannon(), trace_tol=1e-5) == pytest.approx(
        math.log(2.0), abs=1e-5
    )
