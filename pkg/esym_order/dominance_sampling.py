"""Seeded generators of certified E-dominance pairs, majorization pairs and SPD triples.

Every generator takes a numpy Generator; batch code derives one per trial
with trial_rng(seed, index) so draws do not depend on scheduling order.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from .const import (
    CONGRUENCE_SPECTRUM_RANGE,
    DEFAULT_IMAG_TOL,
    DEFAULT_MAX_SAMPLER_ATTEMPTS,
    DEFAULT_SHRINK,
    DEFAULT_SIMPLEX_TOL,
    LOG_UNIFORM_RANGE,
    MAX_SHRINK,
    N2_PRODUCT_RANGE,
    N2_SUM_FACTOR,
    N3_MAX_PRODUCT,
)
from .errors import (
    DomainError,
    InfeasibleProductError,
    RejectedSampleError,
    RootSolverFailureError,
    SamplerExhaustedError,
)
from .esym_core import (
    ComparisonTolerance,
    DominanceVerdict,
    PositiveVector,
    VectorLike,
    as_positive_vector,
    compare,
    esym_all,
)
from .matrix_ops import SpdMatrix, congruence, sqrtm

_LOGGER = logging.getLogger(__name__)


class PairConstraint(StrEnum):
    """Relation a sampled pair must satisfy."""

    FULL_STRICT = "FullStrict"
    WEAK_ONLY = "WeakOnly"
    SIMPLEX_STRICT = "SimplexStrict"
    SIMPLEX_WEAK = "SimplexWeak"

    @property
    def is_strict(self) -> bool:
        """Return True when e_n must be equal."""
        return self in (PairConstraint.FULL_STRICT, PairConstraint.SIMPLEX_STRICT)

    @property
    def is_simplex(self) -> bool:
        """Return True when e_1 must equal 1 for both vectors."""
        return self in (PairConstraint.SIMPLEX_STRICT, PairConstraint.SIMPLEX_WEAK)

    @property
    def min_n(self) -> int:
        """Return the smallest dimension with non-trivial pairs."""
        # with n = 2, fixing e_1 and e_2 forces x = y
        return 3 if self == PairConstraint.SIMPLEX_STRICT else 2

    def check_dimension(self, n: int) -> None:
        """Raise DomainError when the constraint is infeasible at n."""
        if n < self.min_n:
            raise DomainError(f"{self} needs n >= {self.min_n}, got {n}")


@dataclass(frozen=True)
class DominancePair:
    """Pair (x, y) with a recomputed verdict that matches its constraint."""

    x: PositiveVector
    y: PositiveVector
    constraint: PairConstraint
    verdict: DominanceVerdict

    @classmethod
    def certify(
        cls,
        x: VectorLike,
        y: VectorLike,
        constraint: PairConstraint,
        tol: ComparisonTolerance | None = None,
    ) -> DominancePair:
        """Recompute the verdict and reject pairs that miss the constraint."""
        vx = as_positive_vector(x)
        vy = as_positive_vector(y)
        constraint = PairConstraint(constraint)
        verdict = compare(vx, vy, tol)
        holds = verdict.left_strictly_below if constraint.is_strict else verdict.left_weakly_below
        if not holds:
            raise RejectedSampleError(
                f"verdict {verdict.kind}/{verdict.direction} for {constraint}"
            )
        if constraint.is_simplex:
            for name, vector in (("x", vx), ("y", vy)):
                e1 = math.fsum(vector.entries)
                if abs(e1 - 1.0) > DEFAULT_SIMPLEX_TOL:
                    raise RejectedSampleError(f"e_1({name}) = {e1!r} is off the simplex")
        return cls(vx, vy, constraint, verdict)

    @property
    def n(self) -> int:
        """Return the dimension."""
        return self.x.n


@dataclass(frozen=True)
class RootednessCheck:
    """Whether polynomial roots are real and negative, i.e. recover a positive x."""

    roots: tuple[complex, ...]
    imag_tol: float
    accepted: bool
    reason: str = ""

    @classmethod
    def evaluate(cls, roots: np.ndarray, imag_tol: float = DEFAULT_IMAG_TOL) -> RootednessCheck:
        """Classify roots; |Im r| <= imag_tol * max(|r|, 1) and Re(-r) > 0 for all r."""
        values = tuple(complex(root) for root in np.asarray(roots))
        for root in values:
            if abs(root.imag) > imag_tol * max(abs(root), 1.0):
                return cls(values, imag_tol, False, f"complex root {root!r}")
            if not -root.real > 0.0:
                return cls(values, imag_tol, False, f"non-negative root {root!r}")
        return cls(values, imag_tol, True)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Return the generator of trial `index` within a batch seeded by `seed`."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def log_uniform(
    rng: np.random.Generator, n: int, bounds: tuple[float, float] = LOG_UNIFORM_RANGE
) -> np.ndarray:
    """Return n entries with log-uniform distribution on bounds."""
    low, high = bounds
    return np.exp(rng.uniform(math.log(low), math.log(high), size=n))


def pair_n2_from_coefficients(product: float, sum_x: float, sum_y: float) -> DominancePair:
    """Return the roots of t^2 - s t + p for s = sum_x and s = sum_y.

    The larger root is taken from the quadratic formula and the smaller as
    p / larger, which avoids cancellation.
    """
    if not product > 0.0:
        raise DomainError(f"product must be > 0, got {product!r}")
    floor = 2.0 * math.sqrt(product)
    if not floor * (1.0 - 1e-12) <= sum_x <= sum_y:
        raise DomainError(f"Need 2 sqrt(p) <= s_x <= s_y, got {sum_x!r}, {sum_y!r}")

    def roots(total: float) -> tuple[float, float]:
        larger = 0.5 * (total + math.sqrt(max(total * total - 4.0 * product, 0.0)))
        return larger, product / larger

    return DominancePair.certify(roots(sum_x), roots(sum_y), PairConstraint.FULL_STRICT)


def pair_n2(
    rng: np.random.Generator,
    product_range: tuple[float, float] = N2_PRODUCT_RANGE,
    sum_factor: float = N2_SUM_FACTOR,
) -> DominancePair:
    """Sample a FullStrict pair at n = 2; never rejects."""
    product = rng.uniform(*product_range)
    root = math.sqrt(product)
    sum_x, sum_y = sorted(rng.uniform(2.0 * root, sum_factor * root, size=2))
    return pair_n2_from_coefficients(product, float(sum_x), float(sum_y))


def _cubic_discriminant(c: float, p: float) -> float:
    """Discriminant of t^3 - t^2 + c t - p."""
    return 18.0 * c * p - 4.0 * p + c * c - 4.0 * c**3 - 27.0 * p * p


def _check_product(p: float) -> None:
    if not 0.0 < p <= N3_MAX_PRODUCT * (1.0 + 1e-12):
        raise InfeasibleProductError(f"e_3 must lie in (0, 1/27], got {p!r}")


def feasible_e2_interval(p: float, iterations: int = 200) -> tuple[float, float]:
    """Return [c_min, c_max] such that t^3 - t^2 + c t - p has three positive roots.

    The discriminant is a cubic in c with its maximum at
    c* = (1 + sqrt(1 + 216 p)) / 12; each endpoint is found by bisection on
    one side of c*, returning the feasible end of the final bracket.
    """
    _check_product(p)
    peak = min((1.0 + math.sqrt(1.0 + 216.0 * p)) / 12.0, 1.0 / 3.0)
    if _cubic_discriminant(peak, p) < 0.0:
        # p at 1/27 up to rounding: only the uniform spectrum remains
        return peak, peak

    low, high = 0.0, peak
    for _ in range(iterations):
        mid = 0.5 * (low + high)
        if mid in (low, high):
            break
        if _cubic_discriminant(mid, p) >= 0.0:
            high = mid
        else:
            low = mid
    c_min = high

    low, high = peak, 1.0 / 3.0
    for _ in range(iterations):
        mid = 0.5 * (low + high)
        if mid in (low, high):
            break
        if _cubic_discriminant(mid, p) >= 0.0:
            low = mid
        else:
            high = mid
    c_max = low
    return c_min, c_max


def _exact_simplex_triple(roots: Sequence[float], p: float) -> tuple[float, ...]:
    """Rebuild three roots around the most isolated one so e_1 = 1 and e_3 = p exactly.

    Near a double root the trigonometric pair is only accurate to about
    sqrt(eps); the isolated root is well conditioned, and the pair is then
    recovered from its sum 1 - u and product p / u.
    """
    values = sorted(roots, reverse=True)
    gaps = [min(abs(values[i] - values[j]) for j in range(3) if j != i) for i in range(3)]
    isolated = values[max(range(3), key=gaps.__getitem__)]
    if isolated <= 0.0:
        return tuple(values)
    rest = 1.0 - isolated
    pair_product = p / isolated
    larger = 0.5 * (rest + math.sqrt(max(rest * rest - 4.0 * pair_product, 0.0)))
    return tuple(sorted((isolated, larger, pair_product / larger), reverse=True))


def cubic_simplex_roots(c: float, p: float) -> tuple[float, ...]:
    """Return the three real roots of t^3 - t^2 + c t - p, descending.

    Uses the trigonometric form of the depressed cubic z^3 + P z + Q with
    t = z + 1/3, P = c - 1/3 and Q = -2/27 + c/3 - p, then fixes the sum
    and product of the roots exactly.
    """
    big_p = c - 1.0 / 3.0
    big_q = -2.0 / 27.0 + c / 3.0 - p
    if big_p >= 0.0:
        z = float(np.cbrt(-big_q))
        return _exact_simplex_triple((1.0 / 3.0 + z,) * 3, p)
    radius = 2.0 * math.sqrt(-big_p / 3.0)
    argument = (3.0 * big_q / (2.0 * big_p)) * math.sqrt(-3.0 / big_p)
    theta = math.acos(min(1.0, max(-1.0, argument)))
    roots = [
        1.0 / 3.0 + radius * math.cos(theta / 3.0 - 2.0 * math.pi * k / 3.0) for k in range(3)
    ]
    return _exact_simplex_triple(roots, p)


def pair_n3_from_coefficients(p: float, c_x: float, c_y: float) -> DominancePair:
    """Return the SimplexStrict pair with e = (1, c_x, p) and (1, c_y, p)."""
    c_min, c_max = feasible_e2_interval(p)
    slack = 1e-12
    if not c_min - slack <= c_x <= c_y <= c_max + slack:
        raise DomainError(f"Need {c_min!r} <= c_x <= c_y <= {c_max!r}, got {c_x!r}, {c_y!r}")
    x = cubic_simplex_roots(min(max(c_x, c_min), c_max), p)
    y = cubic_simplex_roots(min(max(c_y, c_min), c_max), p)
    if min(x) <= 0.0 or min(y) <= 0.0:
        raise RejectedSampleError("cubic produced a non-positive root")
    return DominancePair.certify(x, y, PairConstraint.SIMPLEX_STRICT)


def pair_n3_simplex(rng: np.random.Generator) -> DominancePair:
    """Sample a SimplexStrict pair at n = 3 from e_3 and two feasible e_2 values."""
    p = N3_MAX_PRODUCT * (1.0 - rng.uniform())
    if p <= 0.0:
        p = N3_MAX_PRODUCT
    c_min, c_max = feasible_e2_interval(p)
    c_x, c_y = sorted(rng.uniform(c_min, c_max, size=2))
    return pair_n3_from_coefficients(p, float(c_x), float(c_y))


def pair_general(
    rng: np.random.Generator,
    n: int,
    constraint: PairConstraint,
    shrink: float = DEFAULT_SHRINK,
    imag_tol: float = DEFAULT_IMAG_TOL,
) -> DominancePair:
    """Draw y, shrink its e_k targets and recover x from the shrunk polynomial.

    Targets are c_k = (1 - shrink u_k) e_k(y) with c_n held for strict kinds
    and c_1 held for simplex kinds. x is the negated roots of
    t^n + c_1 t^(n-1) + ... + c_n; draws whose roots are not real and
    negative raise RejectedSampleError.
    """
    constraint = PairConstraint(constraint)
    constraint.check_dimension(n)
    if not 0.0 <= shrink <= MAX_SHRINK:
        raise DomainError(f"shrink must lie in [0, {MAX_SHRINK}], got {shrink!r}")

    y = log_uniform(rng, n)
    if constraint.is_simplex:
        y = y / math.fsum(y)
    targets = np.array(esym_all(y).values)
    theta = 1.0 - shrink * rng.uniform(size=n)
    if constraint.is_strict:
        theta[-1] = 1.0
    if constraint.is_simplex:
        theta[0] = 1.0
    coefficients = np.concatenate(([1.0], theta * targets))

    roots = np.roots(coefficients)
    if roots.shape != (n,) or not np.all(np.isfinite(roots)):
        raise RootSolverFailureError(f"Root solver returned {roots!r}")
    check = RootednessCheck.evaluate(roots, imag_tol)
    if not check.accepted:
        raise RejectedSampleError(check.reason)
    x = np.sort(-roots.real)
    return DominancePair.certify(x, y, constraint)


def _lower_triple(rng: np.random.Generator, values: np.ndarray, indices: np.ndarray) -> None:
    """Lower e_2 of three entries in place, keeping their sum and product."""
    triple = values[indices]
    total = math.fsum(triple)
    unit = triple / total
    p = min(float(np.prod(unit)), N3_MAX_PRODUCT)
    c = float(unit[0] * unit[1] + unit[0] * unit[2] + unit[1] * unit[2])
    c_min, c_max = feasible_e2_interval(p)
    current = min(max(c, c_min), c_max)
    target = current - rng.uniform() * (current - c_min)
    values[indices] = total * np.array(cubic_simplex_roots(target, p))


def _spread_pair(rng: np.random.Generator, values: np.ndarray) -> None:
    """Move mass from the smaller of two entries to the larger, keeping their sum."""
    first, second = rng.choice(values.size, size=2, replace=False)
    low, high = (first, second) if values[first] <= values[second] else (second, first)
    step = 0.5 * rng.uniform() * values[low]
    values[high] += step
    values[low] -= step


def pair_local(
    rng: np.random.Generator,
    n: int,
    constraint: PairConstraint,
    moves: int | None = None,
) -> DominancePair:
    """Build x from y by moves that can only lower e_2, ..., e_(n-1).

    Each move takes three entries with sum s and product q and lowers their
    pairwise sum inside the feasible interval of the normalised cubic, so
    e_1 and e_n stay fixed while every other e_k of the whole vector drops.
    Weak kinds finish with one sum-preserving spread of two entries, which
    also lowers e_n. The roots are real by construction; only rounding can
    make certify reject.
    """
    constraint = PairConstraint(constraint)
    constraint.check_dimension(n)
    if constraint.is_strict and n < 3:
        raise DomainError(f"Local moves keep e_n fixed only for n >= 3, got {n}")

    y = log_uniform(rng, n)
    if constraint.is_simplex:
        y = y / math.fsum(y)
    x = y.copy()
    if n >= 3:
        for _ in range(n if moves is None else moves):
            _lower_triple(rng, x, rng.choice(n, size=3, replace=False))
    if not constraint.is_strict:
        _spread_pair(rng, x)
    return DominancePair.certify(x, y, constraint)


def sample_pair(
    rng: np.random.Generator,
    n: int,
    constraint: PairConstraint,
    shrink: float = DEFAULT_SHRINK,
    max_attempts: int = DEFAULT_MAX_SAMPLER_ATTEMPTS,
) -> tuple[DominancePair, int]:
    """Return a certified pair and the number of draws it took.

    n = 2 FullStrict and n = 3 SimplexStrict use the analytic generators.
    Otherwise odd attempts draw from pair_general and even attempts from
    pair_local, so a rejected shrink draw costs one extra draw at most
    whatever n is. Every draw counts against max_attempts.
    """
    constraint = PairConstraint(constraint)
    constraint.check_dimension(n)

    reason = "no attempts"
    for attempt in range(1, max_attempts + 1):
        try:
            if n == 2 and constraint == PairConstraint.FULL_STRICT:
                pair = pair_n2(rng)
            elif n == 3 and constraint == PairConstraint.SIMPLEX_STRICT:
                pair = pair_n3_simplex(rng)
            elif attempt % 2:
                pair = pair_general(rng, n, constraint, shrink)
            else:
                pair = pair_local(rng, n, constraint)
        except RejectedSampleError as err:
            reason = err.reason
            _LOGGER.debug("Rejected draw %d (n=%d, %s): %s", attempt, n, constraint, reason)
            continue
        return pair, attempt
    raise SamplerExhaustedError(max_attempts, reason)


def _t_transforms(rng: np.random.Generator, values: np.ndarray, count: int) -> np.ndarray:
    out = np.array(values, dtype=float)
    n = out.size
    for _ in range(count):
        i, j = rng.choice(n, size=2, replace=False)
        weight = rng.uniform()
        first, second = out[i], out[j]
        out[i] = weight * first + (1.0 - weight) * second
        out[j] = weight * second + (1.0 - weight) * first
    return out


def majorization_pair(
    rng: np.random.Generator, n: int, transforms: int | None = None
) -> tuple[PositiveVector, PositiveVector]:
    """Return (x, y) with x majorized by y, via random T-transforms of y (2n by default)."""
    if n < 2:
        raise DomainError(f"Majorization pairs need n >= 2, got {n}")
    count = 2 * n if transforms is None else transforms
    y = log_uniform(rng, n)
    x = _t_transforms(rng, y, count)
    return PositiveVector.of(x), PositiveVector.of(y)


def log_majorization_pair(
    rng: np.random.Generator, n: int, transforms: int | None = None
) -> tuple[PositiveVector, PositiveVector]:
    """Return (x, y) with log x majorized by log y; products agree."""
    if n < 2:
        raise DomainError(f"Majorization pairs need n >= 2, got {n}")
    count = 2 * n if transforms is None else transforms
    y = log_uniform(rng, n)
    x = np.exp(_t_transforms(rng, np.log(y), count))
    return PositiveVector.of(x), PositiveVector.of(y)


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Return a Haar-distributed orthogonal matrix (QR of a Gaussian, signs fixed)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs


def random_spd(
    rng: np.random.Generator,
    n: int,
    spectrum_range: tuple[float, float] = CONGRUENCE_SPECTRUM_RANGE,
) -> SpdMatrix:
    """Return W diag(d) W^T with W orthogonal and d uniform on spectrum_range."""
    w = random_orthogonal(rng, n)
    spectrum = rng.uniform(*spectrum_range, size=n)
    return SpdMatrix.from_array(congruence(np.diag(spectrum), w))


@dataclass(frozen=True)
class MatrixTriple:
    """Matrices with spec(A C^-1) = x and spec(B C^-1) = y."""

    a: SpdMatrix
    b: SpdMatrix
    c: SpdMatrix
    pair: DominancePair


def matrix_triple_from(
    pair: DominancePair, u: np.ndarray, v: np.ndarray, c: SpdMatrix
) -> MatrixTriple:
    """Return A = C^1/2 U diag(x) U^T C^1/2 and B likewise with V and y."""
    root = sqrtm(c)
    a = SpdMatrix.from_array(congruence(congruence(np.diag(pair.x.as_array()), u), root))
    b = SpdMatrix.from_array(congruence(congruence(np.diag(pair.y.as_array()), v), root))
    return MatrixTriple(a, b, c, pair)


def matrix_triple(
    rng: np.random.Generator,
    n: int,
    constraint: PairConstraint = PairConstraint.FULL_STRICT,
    shrink: float = DEFAULT_SHRINK,
    max_attempts: int = DEFAULT_MAX_SAMPLER_ATTEMPTS,
) -> tuple[MatrixTriple, int]:
    """Sample a triple whose relative spectra form a certified pair."""
    pair, attempts = sample_pair(rng, n, constraint, shrink, max_attempts)
    u = random_orthogonal(rng, n)
    v = random_orthogonal(rng, n)
    c = random_spd(rng, n)
    return matrix_triple_from(pair, u, v, c), attempts


@dataclass(frozen=True)
class UnitTracePair:
    """Unit-trace SPD matrices whose spectra form a SimplexStrict pair."""

    x: SpdMatrix
    y: SpdMatrix
    pair: DominancePair


def unit_trace_pair(
    rng: np.random.Generator,
    n: int,
    shrink: float = DEFAULT_SHRINK,
    max_attempts: int = DEFAULT_MAX_SAMPLER_ATTEMPTS,
) -> tuple[UnitTracePair, int]:
    """Sample X = U diag(x) U^T and Y = V diag(y) V^T with (x, y) SimplexStrict."""
    pair, attempts = sample_pair(rng, n, PairConstraint.SIMPLEX_STRICT, shrink, max_attempts)
    x = SpdMatrix.from_array(congruence(np.diag(pair.x.as_array()), random_orthogonal(rng, n)))
    y = SpdMatrix.from_array(congruence(np.diag(pair.y.as_array()), random_orthogonal(rng, n)))
    return UnitTracePair(x, y, pair), attempts
