"""Elementary symmetric polynomials and the dominance order they induce.

x is below y (x ≺_E y) when e_k(x) <= e_k(y) for k < n and e_n(x) = e_n(y);
relaxing the last equality to <= gives the weak order x ⪯_E y.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np

from .const import DEFAULT_TOL_EQ, NEWTON_MACLAURIN_TOL
from .errors import DimensionMismatchError, DomainError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class PositiveVector:
    """Strictly positive real vector with at least one entry."""

    entries: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate the domain."""
        if len(self.entries) < 1:
            raise DomainError("A positive vector needs at least one entry")
        for index, value in enumerate(self.entries):
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"Entry {index} must be finite and > 0, got {value!r}")

    @classmethod
    def of(cls, values: Iterable[Any]) -> PositiveVector:
        """Build a vector from any iterable of numbers."""
        if isinstance(values, PositiveVector):
            return values
        try:
            entries = tuple(float(value) for value in values)
        except (TypeError, ValueError) as ex:
            raise DomainError(f"Cannot read a real vector from {values!r}: {ex}") from ex
        return cls(entries)

    @property
    def n(self) -> int:
        """Return the dimension."""
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        """Return a fresh float64 array of the entries."""
        return np.array(self.entries, dtype=float)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[float]:
        return iter(self.entries)


VectorLike = PositiveVector | Sequence[float] | np.ndarray


def as_positive_vector(x: VectorLike) -> PositiveVector:
    """Coerce input to a validated PositiveVector."""
    return PositiveVector.of(x)


@dataclass(frozen=True)
class ESignature:
    """Values (e_1, ..., e_n) of a vector."""

    values: tuple[float, ...]

    @property
    def n(self) -> int:
        """Return the dimension."""
        return len(self.values)

    def e(self, k: int) -> float:
        """Return e_k, with e_0 = 1."""
        if k == 0:
            return 1.0
        if not 1 <= k <= self.n:
            raise DomainError(f"k must lie in [0, {self.n}], got {k}")
        return self.values[k - 1]

    def full(self) -> tuple[float, ...]:
        """Return (e_0, e_1, ..., e_n)."""
        return (1.0, *self.values)


class DominanceKind(StrEnum):
    """Outcome classes of a comparison."""

    EQUAL = "Equal"
    STRICT_ORDER = "StrictOrder"
    WEAK_ORDER = "WeakOrder"
    INCOMPARABLE = "Incomparable"


class DominanceDirection(StrEnum):
    """Which argument is the dominated one."""

    LEFT_BELOW_RIGHT = "LeftBelowRight"
    RIGHT_BELOW_LEFT = "RightBelowLeft"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class ComparisonTolerance:
    """Relative tolerance used by compare; scale_k = max(|e_k(x)|, |e_k(y)|, 1)."""

    tol_eq: float = DEFAULT_TOL_EQ

    def __post_init__(self) -> None:
        """Validate the tolerance."""
        if not math.isfinite(self.tol_eq) or self.tol_eq <= 0.0:
            raise DomainError(f"tol_eq must be finite and > 0, got {self.tol_eq!r}")

    @staticmethod
    def scale(ex: float, ey: float) -> float:
        """Return the comparison scale for one coefficient."""
        return max(abs(ex), abs(ey), 1.0)


@dataclass(frozen=True)
class DominanceVerdict:
    """Result of comparing two signatures."""

    kind: DominanceKind
    direction: DominanceDirection
    margins: tuple[float, ...]

    @property
    def left_weakly_below(self) -> bool:
        """Return True when x ⪯_E y holds (Equal included)."""
        if self.kind == DominanceKind.EQUAL:
            return True
        return (
            self.kind in (DominanceKind.STRICT_ORDER, DominanceKind.WEAK_ORDER)
            and self.direction == DominanceDirection.LEFT_BELOW_RIGHT
        )

    @property
    def left_strictly_below(self) -> bool:
        """Return True when x ≺_E y holds (Equal included)."""
        if self.kind == DominanceKind.EQUAL:
            return True
        return (
            self.kind == DominanceKind.STRICT_ORDER
            and self.direction == DominanceDirection.LEFT_BELOW_RIGHT
        )

    def mirrored(self) -> DominanceVerdict:
        """Return the verdict with the arguments swapped."""
        direction = {
            DominanceDirection.LEFT_BELOW_RIGHT: DominanceDirection.RIGHT_BELOW_LEFT,
            DominanceDirection.RIGHT_BELOW_LEFT: DominanceDirection.LEFT_BELOW_RIGHT,
        }.get(self.direction, self.direction)
        return DominanceVerdict(self.kind, direction, tuple(-m for m in self.margins))

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "kind": str(self.kind),
            "direction": str(self.direction),
            "margins": list(self.margins),
        }


def esym_all(x: VectorLike) -> ESignature:
    """Return (e_1, ..., e_n) via the product expansion of prod(1 + t x_i).

    Coefficients are updated one entry at a time; every update only adds
    nonnegative terms, so no cancellation occurs.
    """
    vector = as_positive_vector(x)
    n = vector.n
    coeffs = np.zeros(n + 1, dtype=float)
    coeffs[0] = 1.0
    for i, xi in enumerate(vector.entries):
        # right-hand side is evaluated before assignment, so this reads old values
        coeffs[1 : i + 2] = coeffs[1 : i + 2] + xi * coeffs[: i + 1]
    return ESignature(tuple(float(value) for value in coeffs[1:]))


def esym_full(x: VectorLike) -> tuple[float, ...]:
    """Return (e_0, e_1, ..., e_n) with e_0 = 1."""
    return esym_all(x).full()


def _check_t(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    return t


def gen_poly_one_plus_t(x: VectorLike, t: float) -> float:
    """Return prod_i (1 + t x_i) = sum_k t^k e_k(x)."""
    arr = as_positive_vector(x).as_array()
    return float(np.prod(1.0 + _check_t(t) * arr))


def gen_poly_t_plus_x(x: VectorLike, t: float) -> float:
    """Return prod_i (t + x_i) = sum_k t^k e_{n-k}(x)."""
    arr = as_positive_vector(x).as_array()
    return float(np.prod(_check_t(t) + arr))


def compare(
    x: VectorLike,
    y: VectorLike,
    tol: ComparisonTolerance | None = None,
) -> DominanceVerdict:
    """Classify the pair (x, y) under ≺_E and ⪯_E."""
    tol = tol or ComparisonTolerance()
    ex = esym_all(x).values
    ey = esym_all(y).values
    if len(ex) != len(ey):
        raise DimensionMismatchError(f"Dimensions differ: {len(ex)} != {len(ey)}")

    n = len(ex)
    margins = tuple(b - a for a, b in zip(ex, ey, strict=True))
    bounds = [tol.tol_eq * tol.scale(a, b) for a, b in zip(ex, ey, strict=True)]
    last_equal = abs(ex[-1] - ey[-1]) <= tol.tol_eq * max(ex[-1], ey[-1])

    if last_equal and all(abs(m) <= b for m, b in zip(margins[:-1], bounds[:-1], strict=True)):
        return DominanceVerdict(DominanceKind.EQUAL, DominanceDirection.NOT_APPLICABLE, margins)

    if n == 1:
        # no strict indices: only e_1 equality decides
        return DominanceVerdict(
            DominanceKind.INCOMPARABLE, DominanceDirection.NOT_APPLICABLE, margins
        )

    for sign, direction in (
        (1.0, DominanceDirection.LEFT_BELOW_RIGHT),
        (-1.0, DominanceDirection.RIGHT_BELOW_LEFT),
    ):
        if not all(sign * m >= -b for m, b in zip(margins[:-1], bounds[:-1], strict=True)):
            continue
        if last_equal:
            return DominanceVerdict(DominanceKind.STRICT_ORDER, direction, margins)
        if sign * margins[-1] >= -bounds[-1]:
            return DominanceVerdict(DominanceKind.WEAK_ORDER, direction, margins)

    return DominanceVerdict(DominanceKind.INCOMPARABLE, DominanceDirection.NOT_APPLICABLE, margins)


def weakly_below(x: VectorLike, y: VectorLike, tol: ComparisonTolerance | None = None) -> bool:
    """Return True when x ⪯_E y (Equal included)."""
    return compare(x, y, tol).left_weakly_below


def verify_generating_inequality(
    x: VectorLike,
    y: VectorLike,
    t_grid: Iterable[float],
    relative: bool = True,
) -> float:
    """Return the worst margin of both generating-function products over a grid.

    For each t the margins are prod(1 + t y) - prod(1 + t x) and
    prod(t + y) - prod(t + x). With relative=True each margin is divided by
    the larger of its two products, which keeps large t comparable to small t.
    The caller is responsible for x ⪯_E y; the result is only guaranteed
    nonnegative under that hypothesis.
    """
    vx = as_positive_vector(x)
    vy = as_positive_vector(y)
    if vx.n != vy.n:
        raise DimensionMismatchError(f"Dimensions differ: {vx.n} != {vy.n}")

    worst = math.inf
    for t in t_grid:
        for low, high in (
            (gen_poly_one_plus_t(vx, t), gen_poly_one_plus_t(vy, t)),
            (gen_poly_t_plus_x(vx, t), gen_poly_t_plus_x(vy, t)),
        ):
            margin = high - low
            if relative:
                margin /= max(low, high)
            worst = min(worst, margin)
    return worst


def log_spaced_grid(
    count: int, low: float, high: float, include_zero: bool = True
) -> tuple[float, ...]:
    """Return count log-spaced points in [low, high], optionally preceded by 0."""
    points = tuple(float(t) for t in np.geomspace(low, high, count))
    return (0.0, *points) if include_zero else points


def newton_maclaurin_gaps(signature: ESignature) -> tuple[float, ...]:
    """Return normalised Newton gaps for k = 1..n-1.

    Each gap is ((E_k)^2 - E_{k-1} E_{k+1}) / (E_k)^2 with E_k = e_k / C(n, k);
    derived signatures of positive vectors give values >= 0.
    """
    n = signature.n
    full = signature.full()
    normalised = [full[k] / math.comb(n, k) for k in range(n + 1)]
    gaps = []
    for k in range(1, n):
        square = normalised[k] ** 2
        gaps.append((square - normalised[k - 1] * normalised[k + 1]) / square)
    return tuple(gaps)


def satisfies_newton_maclaurin(signature: ESignature, tol: float = NEWTON_MACLAURIN_TOL) -> bool:
    """Return True when every Newton gap is >= -tol."""
    gaps = newton_maclaurin_gaps(signature)
    ok = all(gap >= -tol for gap in gaps)
    if not ok:
        _LOGGER.debug("Newton-Maclaurin chain violated: gaps=%s", gaps)
    return ok
