"""Per-property trial evaluators for the verification harness.

Every evaluator draws what it needs from its own trial generator and returns
a signed margin: (side claimed larger) - (side claimed smaller), normalised
by max(|larger|, |smaller|, 1). A trial passes when its margin is at least
-tolerance of its property.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any

import numpy as np

from .const import (
    CROSSCHECK_TOL,
    DEFAULT_GAP_THRESHOLD,
    DEFAULT_MARGIN_TOL,
    DIVDIFF_ALPHAS,
    EQ7_ALPHAS,
    EQ8_ALPHAS,
    GEN_FUNC_GRID_RANGE,
    GEN_FUNC_GRID_SIZE,
    GEN_FUNC_TOL,
    IDENTITY_S_GRID,
    IDENTITY_TOL,
    RENYI_ALPHAS,
    SCHUR_CONCAVE_TOL,
    SHANNON_LIMIT_STEP,
    PropertyId,
)
from .dominance_sampling import (
    DominancePair,
    MatrixTriple,
    PairConstraint,
    log_majorization_pair,
    majorization_pair,
    matrix_triple,
    random_orthogonal,
    sample_pair,
    unit_trace_pair,
)
from .errors import ConfigurationError, SamplerExhaustedError
from .esym_core import esym_all, log_spaced_grid, verify_generating_inequality
from .matrix_ops import (
    SpdMatrix,
    congruence,
    logdet_I_plus,
    matrix_compare,
    quantum_renyi,
    riemannian_distance,
    s_divergence,
)
from .scalar_functionals import (
    IdentityId,
    IntegralRepresentation,
    PsiKernel,
    RenyiOrder,
    divided_difference_power,
    eval_integral_identity,
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

if TYPE_CHECKING:
    from .coordinator import VerificationConfig

_LOGGER = logging.getLogger(__name__)

GEN_FUNC_GRID = log_spaced_grid(GEN_FUNC_GRID_SIZE, *GEN_FUNC_GRID_RANGE, include_zero=False)


@dataclass(frozen=True)
class TrialOutcome:
    """Margin and witness of one trial."""

    margin: float
    witness: dict[str, Any]
    attempts: int = 1
    components: tuple[float, ...] = ()


@dataclass(frozen=True)
class BatchSummary:
    """Batch-level adjustments produced by a property's finalize hook."""

    outcomes: list[TrialOutcome]
    direction: str | None = None
    notes: list[str] = field(default_factory=list)


Evaluator = Callable[[np.random.Generator, int, "VerificationConfig"], TrialOutcome]
Finalizer = Callable[[list[TrialOutcome], "VerificationConfig"], BatchSummary]


@dataclass(frozen=True)
class PropertySpec:
    """How the harness runs one property."""

    evaluator: Evaluator
    min_n: int = 2
    tolerance: float = DEFAULT_MARGIN_TOL
    grid_size: int | None = None
    finalize: Finalizer | None = None
    notes: Callable[[VerificationConfig], list[str]] | None = None
    uses_alphas: bool = False


def relative_margin(larger: float, smaller: float) -> float:
    """Return (larger - smaller) / max(|larger|, |smaller|, 1)."""
    return (larger - smaller) / max(abs(larger), abs(smaller), 1.0)


def _floats(values: Sequence[float] | np.ndarray) -> list[float]:
    return [float(value) for value in values]


def _pair_witness(pair: DominancePair) -> dict[str, Any]:
    return {
        "x": list(pair.x.entries),
        "y": list(pair.y.entries),
        "constraint": str(pair.constraint),
        "verdict": str(pair.verdict.kind),
    }


def _draw(
    rng: np.random.Generator,
    config: VerificationConfig,
    constraint: PairConstraint,
    accept: Callable[[DominancePair], str | None] | None = None,
) -> tuple[DominancePair, int]:
    """Draw a certified pair, resampling until `accept` returns None."""
    used = 0
    reason = "no attempts"
    while used < config.max_sampler_attempts:
        try:
            pair, attempts = sample_pair(
                rng, config.n, constraint, config.shrink, config.max_sampler_attempts - used
            )
        except SamplerExhaustedError as err:
            raise SamplerExhaustedError(config.max_sampler_attempts, err.last_reason) from err
        used += attempts
        reason = accept(pair) if accept is not None else None
        if reason is None:
            return pair, used
        _LOGGER.debug("Discarded pair after %d draws: %s", used, reason)
    raise SamplerExhaustedError(used, reason)


def _alternating(index: int) -> PairConstraint:
    return PairConstraint.FULL_STRICT if index % 2 == 0 else PairConstraint.WEAK_ONLY


def _renyi_orders(config: VerificationConfig) -> list[RenyiOrder]:
    alphas = config.alphas if config.alphas is not None else RENYI_ALPHAS
    orders = [RenyiOrder.shannon() if alpha == 1.0 else RenyiOrder(alpha) for alpha in alphas]
    if config.alphas is None:
        orders.append(RenyiOrder.shannon())
    return orders


def _zero_boundary_note(config: VerificationConfig) -> list[str]:
    alphas = config.alphas if config.alphas is not None else RENYI_ALPHAS
    if 0.0 in alphas:
        return ["alpha=0 is a boundary order: H_0 = log n for every positive vector"]
    return []


def _power_sum_alphas(config: VerificationConfig) -> list[float]:
    alphas = config.alphas if config.alphas is not None else RENYI_ALPHAS
    usable = [alpha for alpha in alphas if 0.0 < alpha < 1.0 or 1.0 < alpha < 2.0]
    if not usable:
        raise ConfigurationError("POWER_SUM_DIRECTION needs an alpha in (0, 1) or (1, 2)")
    return usable


def _divdiff_alphas(config: VerificationConfig) -> list[float]:
    alphas = config.alphas if config.alphas is not None else DIVDIFF_ALPHAS
    if any(not 0.0 < alpha < 1.0 for alpha in alphas):
        raise ConfigurationError("DIVDIFF_POWER alphas must lie in (0, 1)")
    return list(alphas)


def _ssli(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(rng, config, PairConstraint.FULL_STRICT)
    low, high = sum_sq_logs(pair.x), sum_sq_logs(pair.y)
    witness = _pair_witness(pair) | {"L_x": low, "L_y": high}
    return TrialOutcome(relative_margin(high, low), witness, attempts)


def _renyi(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(rng, config, PairConstraint.SIMPLEX_STRICT)
    margins = {}
    for order in _renyi_orders(config):
        margins[order.label] = relative_margin(
            renyi_entropy(pair.y, order), renyi_entropy(pair.x, order)
        )
    witness = _pair_witness(pair) | {"margins": margins}
    return TrialOutcome(min(margins.values()), witness, attempts)


def _shannon(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(rng, config, PairConstraint.SIMPLEX_STRICT)
    h_x, h_y = shannon_entropy(pair.x), shannon_entropy(pair.y)
    deviation = max(
        abs(shannon_entropy(vector) - renyi_entropy(vector, RenyiOrder(1.0 + step)))
        for vector in (pair.x, pair.y)
        for step in (-SHANNON_LIMIT_STEP, SHANNON_LIMIT_STEP)
    )
    # the alpha -> 1 limit must agree within 1e-5
    margin = min(relative_margin(h_y, h_x), 1e-5 - deviation)
    witness = _pair_witness(pair) | {"H_x": h_x, "H_y": h_y, "limit_deviation": deviation}
    return TrialOutcome(margin, witness, attempts)


def _power_sum_direction(
    rng: np.random.Generator, index: int, config: VerificationConfig
) -> TrialOutcome:
    pair, attempts = _draw(rng, config, PairConstraint.SIMPLEX_STRICT)
    margins = {}
    for alpha in _power_sum_alphas(config):
        p_x, p_y = power_sum(pair.x, alpha), power_sum(pair.y, alpha)
        # the inequality reverses for alpha > 1
        larger, smaller = (p_y, p_x) if alpha < 1.0 else (p_x, p_y)
        margins[repr(alpha)] = relative_margin(larger, smaller)
    witness = _pair_witness(pair) | {"margins": margins}
    return TrialOutcome(min(margins.values()), witness, attempts)


def _subentropy(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(rng, config, PairConstraint.SIMPLEX_WEAK)
    q_x, q_y = subentropy_integral(pair.x), subentropy_integral(pair.y)
    witness = _pair_witness(pair) | {"Q_x": q_x, "Q_y": q_y}
    return TrialOutcome(relative_margin(q_y, q_x), witness, attempts)


def _separated(threshold: float) -> Callable[[DominancePair], str | None]:
    def accept(pair: DominancePair) -> str | None:
        gap = min(min_relative_gap(pair.x), min_relative_gap(pair.y))
        return None if gap > threshold else f"relative gap {gap:.3e} <= {threshold:g}"

    return accept


def _divdiff(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(
        rng, config, PairConstraint.FULL_STRICT, _separated(DEFAULT_GAP_THRESHOLD)
    )
    differences = {}
    for alpha in _divdiff_alphas(config):
        d_x = divided_difference_power(pair.x, alpha)
        d_y = divided_difference_power(pair.y, alpha)
        differences[repr(alpha)] = relative_margin(d_x, d_y)
    witness = _pair_witness(pair) | {"differences": differences}
    components = tuple(differences.values())
    return TrialOutcome(min(components), witness, attempts, components)


def _divdiff_finalize(outcomes: list[TrialOutcome], config: VerificationConfig) -> BatchSummary:
    tolerance = PROPERTIES[PropertyId.DIVDIFF_POWER].tolerance
    values = [value for outcome in outcomes for value in outcome.components]
    above = sum(1 for value in values if value > tolerance)
    below = sum(1 for value in values if value < -tolerance)
    if above == below == 0:
        sign, direction = 1.0, "tie"
    elif above >= below:
        sign, direction = 1.0, "x_ge_y"
    else:
        sign, direction = -1.0, "x_le_y"

    adjusted = [
        replace(outcome, margin=min(sign * value for value in outcome.components))
        if outcome.components
        else outcome
        for outcome in outcomes
    ]
    notes = [
        f"divided differences of s**alpha: {above} comparisons with D(x) > D(y), "
        f"{below} with D(x) < D(y) at n={config.n}"
    ]
    if above and below:
        notes.append("mixed direction: the minority comparisons count as failures")
    return BatchSummary(adjusted, direction, notes)


def _schur_concave(
    rng: np.random.Generator, index: int, config: VerificationConfig
) -> TrialOutcome:
    x, y = majorization_pair(rng, config.n)
    e_x, e_y = esym_all(x).values, esym_all(y).values
    margins = [relative_margin(a, b) for a, b in zip(e_x, e_y, strict=True)]
    witness = {"x": list(x.entries), "y": list(y.entries), "margins": margins}
    return TrialOutcome(min(margins), witness)


def _gen_func(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(rng, config, _alternating(index))
    margin = verify_generating_inequality(pair.x, pair.y, GEN_FUNC_GRID, relative=True)
    return TrialOutcome(margin, _pair_witness(pair), attempts)


def _conjugated(rng: np.random.Generator, values: Sequence[float]) -> SpdMatrix:
    u = random_orthogonal(rng, len(values))
    return SpdMatrix.from_array(congruence(np.diag(np.asarray(values, dtype=float)), u))


def _matrix_witness(**matrices: SpdMatrix) -> dict[str, Any]:
    return {name: [_floats(row) for row in matrix.entries] for name, matrix in matrices.items()}


def _logdet(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(rng, config, _alternating(index))
    a = _conjugated(rng, pair.x.entries)
    b = _conjugated(rng, pair.y.entries)
    verdict = matrix_compare(a, b)
    low, high = logdet_I_plus(a), logdet_I_plus(b)
    margin = relative_margin(high, low)
    if not verdict.left_weakly_below:
        # spectra drifted out of the order; report it as a failing trial
        margin = -math.inf
    witness = (
        _pair_witness(pair)
        | {"matrix_verdict": str(verdict.kind), "logdet_A": low, "logdet_B": high}
        | _matrix_witness(A=a, B=b)
    )
    return TrialOutcome(margin, witness, attempts)


def _logdet_logmaj(
    rng: np.random.Generator, index: int, config: VerificationConfig
) -> TrialOutcome:
    x, y = log_majorization_pair(rng, config.n)
    a = _conjugated(rng, x.entries)
    b = _conjugated(rng, y.entries)
    low, high = logdet_I_plus(a), logdet_I_plus(b)
    witness = {"x": list(x.entries), "y": list(y.entries), "logdet_A": low, "logdet_B": high}
    return TrialOutcome(relative_margin(high, low), witness | _matrix_witness(A=a, B=b))


def _triple(rng: np.random.Generator, config: VerificationConfig) -> tuple[MatrixTriple, int]:
    return matrix_triple(
        rng, config.n, PairConstraint.FULL_STRICT, config.shrink, config.max_sampler_attempts
    )


def _riemannian(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    triple, attempts = _triple(rng, config)
    d_a, d_b = riemannian_distance(triple.a, triple.c), riemannian_distance(triple.b, triple.c)
    witness = (
        _pair_witness(triple.pair)
        | {"delta_A": d_a, "delta_B": d_b}
        | _matrix_witness(A=triple.a, B=triple.b, C=triple.c)
    )
    return TrialOutcome(relative_margin(d_b, d_a), witness, attempts)


def _sdiv(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    triple, attempts = _triple(rng, config)
    d_a, d_b = s_divergence(triple.a, triple.c), s_divergence(triple.b, triple.c)
    witness = (
        _pair_witness(triple.pair)
        | {"delta_A": d_a, "delta_B": d_b}
        | _matrix_witness(A=triple.a, B=triple.b, C=triple.c)
    )
    return TrialOutcome(relative_margin(d_b, d_a), witness, attempts)


def _quantum_renyi(
    rng: np.random.Generator, index: int, config: VerificationConfig
) -> TrialOutcome:
    matrices, attempts = unit_trace_pair(rng, config.n, config.shrink, config.max_sampler_attempts)
    margins = {}
    for order in _renyi_orders(config):
        margins[order.label] = relative_margin(
            quantum_renyi(matrices.y, order), quantum_renyi(matrices.x, order)
        )
    witness = (
        _pair_witness(matrices.pair)
        | {"margins": margins}
        | _matrix_witness(X=matrices.x, Y=matrices.y)
    )
    return TrialOutcome(min(margins.values()), witness, attempts)


def _identity_grid(identity_id: IdentityId) -> list[tuple[float | None, float]]:
    if identity_id == IdentityId.EQ10:
        return [(None, s) for s in IDENTITY_S_GRID]
    alphas = EQ7_ALPHAS if identity_id == IdentityId.EQ7 else EQ8_ALPHAS
    return list(itertools.product(alphas, IDENTITY_S_GRID))


def _identity(identity_id: IdentityId) -> Evaluator:
    grid = _identity_grid(identity_id)

    def evaluate(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
        alpha, s = grid[index % len(grid)]
        rep = IntegralRepresentation.for_identity(identity_id, alpha)
        expected = rep.closed_form(s)
        value = eval_integral_identity(rep, s)
        deviation = abs(value - expected)
        allowed = max(IDENTITY_TOL, IDENTITY_TOL * abs(expected))
        witness = {"alpha": alpha, "s": s, "quadrature": value, "closed_form": expected}
        return TrialOutcome(allowed - deviation, witness)

    return evaluate


def _crosscheck(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(
        rng, config, PairConstraint.SIMPLEX_WEAK, _separated(DEFAULT_GAP_THRESHOLD)
    )
    deviations = {}
    for name, vector in (("x", pair.x), ("y", pair.y)):
        deviations[name] = abs(subentropy_closed(vector) - subentropy_integral(vector))
    witness = _pair_witness(pair) | {"deviations": deviations}
    return TrialOutcome(CROSSCHECK_TOL - max(deviations.values()), witness, attempts)


def _psi_sum(rng: np.random.Generator, index: int, config: VerificationConfig) -> TrialOutcome:
    pair, attempts = _draw(rng, config, PairConstraint.WEAK_ONLY)
    margins = {}
    closed = {}
    for kernel in PsiKernel:
        low, high = psi_sum(pair.x, kernel), psi_sum(pair.y, kernel)
        margins[str(kernel)] = relative_margin(high, low)
        closed[str(kernel)] = [
            math.fsum(psi_uniform_closed(value, kernel) for value in vector)
            for vector in (pair.x, pair.y)
        ]
    witness = _pair_witness(pair) | {"margins": margins, "closed_form": closed}
    return TrialOutcome(min(margins.values()), witness, attempts)


PROPERTIES: dict[PropertyId, PropertySpec] = {
    PropertyId.SSLI: PropertySpec(_ssli),
    PropertyId.RENYI: PropertySpec(_renyi, min_n=3, notes=_zero_boundary_note, uses_alphas=True),
    PropertyId.SHANNON: PropertySpec(_shannon, min_n=3),
    PropertyId.POWER_SUM_DIRECTION: PropertySpec(
        _power_sum_direction, min_n=3, uses_alphas=True
    ),
    PropertyId.SUBENTROPY: PropertySpec(_subentropy),
    PropertyId.DIVDIFF_POWER: PropertySpec(_divdiff, finalize=_divdiff_finalize, uses_alphas=True),
    PropertyId.SCHUR_CONCAVE: PropertySpec(_schur_concave, tolerance=SCHUR_CONCAVE_TOL),
    PropertyId.GEN_FUNC: PropertySpec(_gen_func, tolerance=GEN_FUNC_TOL),
    PropertyId.LOGDET: PropertySpec(_logdet),
    PropertyId.RIEMANNIAN: PropertySpec(_riemannian),
    PropertyId.SDIV: PropertySpec(_sdiv),
    PropertyId.QUANTUM_RENYI: PropertySpec(
        _quantum_renyi, min_n=3, notes=_zero_boundary_note, uses_alphas=True
    ),
    PropertyId.EQ7_IDENTITY: PropertySpec(
        _identity(IdentityId.EQ7),
        min_n=1,
        tolerance=0.0,
        grid_size=len(_identity_grid(IdentityId.EQ7)),
    ),
    PropertyId.EQ8_IDENTITY: PropertySpec(
        _identity(IdentityId.EQ8),
        min_n=1,
        tolerance=0.0,
        grid_size=len(_identity_grid(IdentityId.EQ8)),
    ),
    PropertyId.EQ10_IDENTITY: PropertySpec(
        _identity(IdentityId.EQ10), min_n=1, tolerance=0.0, grid_size=len(IDENTITY_S_GRID)
    ),
    PropertyId.EQ14_CROSSCHECK: PropertySpec(_crosscheck, tolerance=0.0),
    PropertyId.PSI_SUM: PropertySpec(_psi_sum),
    PropertyId.LOGDET_LOGMAJ: PropertySpec(_logdet_logmaj),
}


def validate_alphas(property_id: PropertyId, config: VerificationConfig) -> None:
    """Raise ConfigurationError when the alpha grid does not suit the property."""
    if config.alphas is None:
        return
    if property_id == PropertyId.DIVDIFF_POWER:
        _divdiff_alphas(config)
    elif property_id == PropertyId.POWER_SUM_DIRECTION:
        _power_sum_alphas(config)
