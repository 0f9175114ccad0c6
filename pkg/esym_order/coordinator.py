"""Seeded trial batches and their aggregated verification reports."""

from __future__ import annotations

import functools
import json
import logging
import math
import time
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    DEFAULT_MAX_SAMPLER_ATTEMPTS,
    DEFAULT_N,
    DEFAULT_SEED,
    DEFAULT_SHRINK,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    DOMAIN,
    MAX_REJECTION_SHARE,
    PropertyId,
)
from .dominance_sampling import trial_rng
from .errors import (
    ConfigurationError,
    EsymOrderError,
    NonConvergenceError,
    RejectedSampleError,
    SamplerExhaustedError,
)
from .properties import PROPERTIES, PropertySpec, TrialOutcome, validate_alphas

_LOGGER = logging.getLogger(__name__)

MANIFEST_PATH = Path(__file__).with_name("manifest.json")


@functools.cache
def library_version() -> str:
    """Return the version recorded in manifest.json."""
    return json.loads(MANIFEST_PATH.read_text(encoding="utf-8"))["version"]


def _finite_or_none(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


REPORT_SCHEMA = vol.Schema(
    {
        vol.Required("property"): vol.In([str(item) for item in PropertyId]),
        vol.Required("seed"): int,
        vol.Required("n"): int,
        vol.Required("trials"): vol.All(int, vol.Range(min=0)),
        vol.Required("passes"): vol.All(int, vol.Range(min=0)),
        vol.Required("failures"): vol.All(int, vol.Range(min=0)),
        vol.Required("rejections"): vol.All(int, vol.Range(min=0)),
        vol.Required("sampler_attempts"): vol.All(int, vol.Range(min=0)),
        vol.Required("worst_margin"): vol.Any(None, float, int),
        vol.Required("worst_witness"): vol.Any(None, dict),
        vol.Required("direction"): vol.Any(None, vol.In(["x_ge_y", "x_le_y", "tie"])),
        vol.Required("notes"): [str],
        vol.Required("wall_time_ms"): vol.All(int, vol.Range(min=0)),
        vol.Required("library_version"): str,
    }
)


@dataclass(frozen=True)
class VerificationConfig:
    """Validated settings of one batch."""

    property: PropertyId
    n: int = DEFAULT_N
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    alphas: tuple[float, ...] | None = None
    shrink: float = DEFAULT_SHRINK
    max_sampler_attempts: int = DEFAULT_MAX_SAMPLER_ATTEMPTS
    workers: int = DEFAULT_WORKERS
    enable_debug_logging: bool = False

    @property
    def spec(self) -> PropertySpec:
        """Return the harness entry of the property."""
        return PROPERTIES[self.property]

    def validate(self) -> VerificationConfig:
        """Raise ConfigurationError for settings the property cannot run with."""
        spec = self.spec
        if self.n < spec.min_n:
            raise ConfigurationError(f"{self.property} needs n >= {spec.min_n}, got {self.n}")
        if self.trials < 0:
            raise ConfigurationError(f"trials must be >= 0, got {self.trials}")
        if self.alphas is not None and not spec.uses_alphas:
            _LOGGER.info("%s ignores the alpha grid", self.property)
        validate_alphas(self.property, self)
        return self


@dataclass(frozen=True)
class VerificationReport:
    """Aggregated result of one seeded batch."""

    property: PropertyId
    seed: int
    n: int
    trials: int
    passes: int
    failures: int
    rejections: int
    sampler_attempts: int
    worst_margin: float | None
    worst_witness: dict[str, Any] | None
    direction: str | None = None
    notes: list[str] = field(default_factory=list)
    wall_time_ms: int = 0
    library_version: str = ""

    @property
    def ok(self) -> bool:
        """Return True when no trial failed and rejections stayed within their share."""
        return self.failures == 0 and self.rejections <= MAX_REJECTION_SHARE * self.trials

    def as_dict(self) -> dict[str, Any]:
        """Return the JSON payload, validated against REPORT_SCHEMA."""
        payload = {
            "property": str(self.property),
            "seed": self.seed,
            "n": self.n,
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures,
            "rejections": self.rejections,
            "sampler_attempts": self.sampler_attempts,
            "worst_margin": _finite_or_none(self.worst_margin),
            "worst_witness": self.worst_witness,
            "direction": self.direction,
            "notes": list(self.notes),
            "wall_time_ms": self.wall_time_ms,
            "library_version": self.library_version,
        }
        return REPORT_SCHEMA(payload)

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> VerificationReport:
        """Build a report from a validated payload."""
        data = REPORT_SCHEMA(dict(payload))
        return cls(**{**data, "property": PropertyId(data["property"])})

    def summary(self) -> str:
        """Return a one-line summary."""
        return (
            f"{self.property} n={self.n} seed={self.seed} trials={self.trials} "
            f"passes={self.passes} failures={self.failures} rejections={self.rejections} "
            f"worst_margin={self.worst_margin!r}"
            + (f" direction={self.direction}" if self.direction else "")
        )


def write_report(report: VerificationReport, path: Path | str) -> Path:
    """Write a report as indented JSON and return the path."""
    target = Path(path)
    if target.parent != Path():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8")
    return target


def load_report(path: Path | str) -> VerificationReport:
    """Read and validate a report written by write_report."""
    return VerificationReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class _TrialResult:
    index: int
    outcome: TrialOutcome | None
    attempts: int
    rejected: bool = False
    error: str | None = None


class VerificationCoordinator:
    """Run one property over a seeded batch of trials."""

    def __init__(self, config: VerificationConfig) -> None:
        """Initialize the coordinator."""
        self._config = config.validate()
        self._spec = config.spec

    @property
    def config(self) -> VerificationConfig:
        """Return the batch settings."""
        return self._config

    def _debug_log(self, message: str, *args: Any) -> None:
        """Emit debug log only when debug logging option is enabled."""
        if self._config.enable_debug_logging:
            _LOGGER.debug(message, *args)
            if not _LOGGER.isEnabledFor(logging.DEBUG):
                _LOGGER.warning(f"[{DOMAIN} debug] " + message, *args)

    @property
    def trial_count(self) -> int:
        """Return the number of trials actually run (identity grids cap it)."""
        if self._spec.grid_size is None:
            return self._config.trials
        return min(self._config.trials, self._spec.grid_size)

    def run_trial(self, index: int) -> _TrialResult:
        """Run trial `index` on its own generator."""
        config = self._config
        rng = trial_rng(config.seed, index)
        try:
            outcome = self._spec.evaluator(rng, index, config)
        except RejectedSampleError as err:
            _LOGGER.warning("Trial %d of %s rejected: %s", index, config.property, err)
            attempts = err.attempts if isinstance(err, SamplerExhaustedError) else 1
            return _TrialResult(index, None, attempts, rejected=True)
        except NonConvergenceError as err:
            _LOGGER.warning("Trial %d of %s did not converge: %s", index, config.property, err)
            witness = {"error": str(err), "best_estimate": _finite_or_none(err.best_estimate)}
            return _TrialResult(index, TrialOutcome(-math.inf, witness), 1, error=str(err))
        except EsymOrderError as err:
            _LOGGER.warning(
                "Trial %d of %s raised %s: %s", index, config.property, type(err).__name__, err
            )
            witness = {"error": f"{type(err).__name__}: {err}"}
            return _TrialResult(index, TrialOutcome(-math.inf, witness), 1, error=str(err))
        self._debug_log(
            "Trial %d of %s: margin=%r attempts=%d",
            index,
            config.property,
            outcome.margin,
            outcome.attempts,
        )
        return _TrialResult(index, outcome, outcome.attempts)

    def _run_all(self) -> list[_TrialResult]:
        indices = range(self.trial_count)
        if self._config.workers <= 1:
            return [self.run_trial(index) for index in indices]
        with ThreadPoolExecutor(max_workers=self._config.workers) as executor:
            return list(executor.map(self.run_trial, indices))

    def run(self) -> VerificationReport:
        """Run the batch and aggregate the report."""
        config = self._config
        started = time.perf_counter()
        results = self._run_all()

        evaluated = [result for result in results if result.outcome is not None]
        outcomes = [result.outcome for result in evaluated]
        notes = list(self._spec.notes(config)) if self._spec.notes else []
        direction = None
        if self._spec.finalize is not None and outcomes:
            summary = self._spec.finalize(outcomes, config)
            outcomes = summary.outcomes
            direction = summary.direction
            notes.extend(summary.notes)

        if self.trial_count < config.trials:
            notes.append(f"trials capped at the {self.trial_count}-point evaluation grid")
        errors = [result for result in evaluated if result.error is not None]
        if errors:
            notes.append(f"{len(errors)} trials raised a numerical error")
        rejections = sum(1 for result in results if result.rejected)
        if rejections > MAX_REJECTION_SHARE * self.trial_count:
            notes.append(
                f"{rejections} of {self.trial_count} trials rejected by the sampler, "
                f"above the {MAX_REJECTION_SHARE:.0%} limit"
            )

        tolerance = self._spec.tolerance
        passes = sum(1 for outcome in outcomes if outcome.margin >= -tolerance)
        worst = min(outcomes, key=lambda outcome: outcome.margin, default=None)
        report = VerificationReport(
            property=config.property,
            seed=config.seed,
            n=config.n,
            trials=self.trial_count,
            passes=passes,
            failures=len(outcomes) - passes,
            rejections=rejections,
            sampler_attempts=sum(result.attempts for result in results),
            worst_margin=worst.margin if worst is not None else None,
            worst_witness=worst.witness if worst is not None else None,
            direction=direction,
            notes=notes,
            wall_time_ms=round((time.perf_counter() - started) * 1000),
            library_version=library_version(),
        )
        _LOGGER.info(report.summary())
        return report


def run_verification(config: VerificationConfig) -> VerificationReport:
    """Run a batch with the given settings."""
    return VerificationCoordinator(config).run()
