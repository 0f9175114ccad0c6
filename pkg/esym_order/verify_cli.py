"""Command-line harness: calculators, seeded verification batches and corpora."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections.abc import Callable, Sequence
from typing import Any

import voluptuous as vol

from .const import (
    CONF_ALPHA,
    CONF_CONSTRAINT,
    CONF_COUNT,
    CONF_ENABLE_DEBUG_LOGGING,
    CONF_INDEX,
    CONF_INPUT,
    CONF_MAX_SAMPLER_ATTEMPTS,
    CONF_N,
    CONF_OUT,
    CONF_PROPERTY,
    CONF_SEED,
    CONF_SHRINK,
    CONF_TOL,
    CONF_TRIALS,
    CONF_VALUES,
    CONF_WORKERS,
    DEFAULT_MAX_SAMPLER_ATTEMPTS,
    DEFAULT_N,
    DEFAULT_SEED,
    DEFAULT_SHRINK,
    DEFAULT_SIMPLEX_TOL,
    DEFAULT_TOL_EQ,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    DOMAIN,
    EXIT_OK,
    EXIT_PROPERTY_FAILURE,
    EXIT_USAGE,
    MAX_DIMENSION,
    MAX_SHRINK,
    RENYI_ALPHAS,
    PropertyId,
)
from .coordinator import VerificationConfig, library_version, run_verification, write_report
from .corpus import (
    generate_pair_corpus,
    generate_triple_blocks,
    read_matrix_blocks,
    write_matrix_blocks,
    write_pair_corpus,
)
from .dominance_sampling import PairConstraint
from .errors import DegenerateSpectrumError, DomainError, EsymOrderError
from .esym_core import ComparisonTolerance, as_positive_vector, compare, esym_all
from .matrix_ops import (
    SpdMatrix,
    logdet_I_plus,
    matrix_compare,
    riemannian_distance,
    s_divergence,
)
from .scalar_functionals import (
    RenyiOrder,
    power_sum,
    renyi_entropy,
    shannon_entropy,
    subentropy_closed,
    subentropy_integral,
    sum_sq_logs,
)

_LOGGER = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1

_DIMENSION = vol.All(vol.Coerce(int), vol.Range(min=1, max=MAX_DIMENSION))
_SEED = vol.All(vol.Coerce(int), vol.Range(min=0, max=MAX_SEED))
_ALPHA = vol.All(vol.Coerce(float), vol.Range(min=0.0, max=2.0))
_SHRINK = vol.All(vol.Coerce(float), vol.Range(min=0.0, max=MAX_SHRINK, min_included=False))
_CONSTRAINT = vol.Coerce(PairConstraint)

ESYM_SCHEMA = vol.Schema({vol.Required(CONF_VALUES): [vol.Coerce(float)]})

DOMINANCE_SCHEMA = vol.Schema(
    {
        vol.Required("x"): [vol.Coerce(float)],
        vol.Required("y"): [vol.Coerce(float)],
        vol.Optional(CONF_TOL, default=DEFAULT_TOL_EQ): vol.All(
            vol.Coerce(float), vol.Range(min=0.0, min_included=False)
        ),
    }
)

FUNCTIONALS_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_VALUES): [vol.Coerce(float)],
        vol.Optional(CONF_ALPHA, default=list(RENYI_ALPHAS)): [_ALPHA],
    }
)

VERIFY_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_PROPERTY): vol.All(str, vol.Upper, vol.Coerce(PropertyId)),
        vol.Optional(CONF_N, default=DEFAULT_N): _DIMENSION,
        vol.Optional(CONF_TRIALS, default=DEFAULT_TRIALS): vol.All(
            vol.Coerce(int), vol.Range(min=0)
        ),
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): _SEED,
        vol.Optional(CONF_ALPHA): [_ALPHA],
        vol.Optional(CONF_SHRINK, default=DEFAULT_SHRINK): _SHRINK,
        vol.Optional(CONF_MAX_SAMPLER_ATTEMPTS, default=DEFAULT_MAX_SAMPLER_ATTEMPTS): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Optional(CONF_WORKERS, default=DEFAULT_WORKERS): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Optional(CONF_ENABLE_DEBUG_LOGGING, default=False): bool,
        vol.Optional(CONF_OUT): str,
    }
)

CORPUS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_N, default=DEFAULT_N): _DIMENSION,
        vol.Required(CONF_COUNT): vol.All(vol.Coerce(int), vol.Range(min=0)),
        vol.Optional(CONF_CONSTRAINT, default=PairConstraint.FULL_STRICT): _CONSTRAINT,
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): _SEED,
        vol.Optional(CONF_SHRINK, default=DEFAULT_SHRINK): _SHRINK,
        vol.Optional(CONF_MAX_SAMPLER_ATTEMPTS, default=DEFAULT_MAX_SAMPLER_ATTEMPTS): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Required(CONF_OUT): str,
    }
)

MATRIX_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_INPUT): str,
        vol.Optional(CONF_INDEX, default=0): vol.All(vol.Coerce(int), vol.Range(min=0)),
        vol.Optional(CONF_TOL, default=DEFAULT_TOL_EQ): vol.All(
            vol.Coerce(float), vol.Range(min=0.0, min_included=False)
        ),
    }
)


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, separators=(",", ":")))


def _options(args: argparse.Namespace, *names: str) -> dict[str, Any]:
    """Return the given argparse values that were actually supplied."""
    return {
        name: getattr(args, name)
        for name in names
        if getattr(args, name, None) is not None
    }


def cmd_esym(args: argparse.Namespace) -> int:
    """Print the elementary symmetric signature of a vector."""
    data = ESYM_SCHEMA(_options(args, CONF_VALUES))
    signature = esym_all(data[CONF_VALUES])
    _emit({"n": signature.n, "e": list(signature.values)})
    return EXIT_OK


def cmd_dominance(args: argparse.Namespace) -> int:
    """Print the verdict of comparing x and y."""
    data = DOMINANCE_SCHEMA(_options(args, "x", "y", CONF_TOL))
    verdict = compare(data["x"], data["y"], ComparisonTolerance(data[CONF_TOL]))
    _emit({"n": len(data["x"]), **verdict.as_dict()})
    return EXIT_OK


def _optional(func: Callable[[], float]) -> float | None:
    try:
        return func()
    except DegenerateSpectrumError as err:
        _LOGGER.info("Skipping closed form: %s", err)
        return None


def cmd_functionals(args: argparse.Namespace) -> int:
    """Print every scalar functional defined for the vector."""
    data = FUNCTIONALS_SCHEMA(_options(args, CONF_VALUES, CONF_ALPHA))
    vector = as_positive_vector(data[CONF_VALUES])
    alphas = data[CONF_ALPHA]

    payload: dict[str, Any] = {
        "n": vector.n,
        "sum_sq_logs": sum_sq_logs(vector),
        "power_sums": {
            repr(alpha): power_sum(vector, alpha)
            for alpha in alphas
            if 0.0 < alpha < 1.0 or 1.0 < alpha < 2.0
        },
    }
    if abs(math.fsum(vector.entries) - 1.0) <= DEFAULT_SIMPLEX_TOL:
        orders = [RenyiOrder(alpha) for alpha in alphas if alpha != 1.0]
        payload["renyi"] = {order.label: renyi_entropy(vector, order) for order in orders}
        payload["shannon"] = shannon_entropy(vector)
        payload["subentropy"] = {
            "closed": _optional(lambda: subentropy_closed(vector)),
            "integral": subentropy_integral(vector),
        }
    else:
        _LOGGER.info("Entries do not sum to 1; entropies skipped")
    _emit(payload)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Run one seeded batch and print its summary."""
    data = VERIFY_SCHEMA(
        _options(
            args,
            CONF_PROPERTY,
            CONF_N,
            CONF_TRIALS,
            CONF_SEED,
            CONF_ALPHA,
            CONF_SHRINK,
            CONF_MAX_SAMPLER_ATTEMPTS,
            CONF_WORKERS,
            CONF_ENABLE_DEBUG_LOGGING,
            CONF_OUT,
        )
    )
    alphas = data.get(CONF_ALPHA)
    config = VerificationConfig(
        property=data[CONF_PROPERTY],
        n=data[CONF_N],
        trials=data[CONF_TRIALS],
        seed=data[CONF_SEED],
        alphas=tuple(alphas) if alphas is not None else None,
        shrink=data[CONF_SHRINK],
        max_sampler_attempts=data[CONF_MAX_SAMPLER_ATTEMPTS],
        workers=data[CONF_WORKERS],
        enable_debug_logging=data[CONF_ENABLE_DEBUG_LOGGING],
    )
    report = run_verification(config)
    if CONF_OUT in data:
        path = write_report(report, data[CONF_OUT])
        _LOGGER.info("Report written to %s", path)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_PROPERTY_FAILURE


def _corpus_options(args: argparse.Namespace) -> dict[str, Any]:
    return CORPUS_SCHEMA(
        _options(
            args,
            CONF_N,
            CONF_COUNT,
            CONF_CONSTRAINT,
            CONF_SEED,
            CONF_SHRINK,
            CONF_MAX_SAMPLER_ATTEMPTS,
            CONF_OUT,
        )
    )


def cmd_pairs(args: argparse.Namespace) -> int:
    """Write a seeded CSV corpus of certified pairs."""
    data = _corpus_options(args)
    records = generate_pair_corpus(
        data[CONF_N],
        data[CONF_COUNT],
        data[CONF_CONSTRAINT],
        data[CONF_SEED],
        data[CONF_SHRINK],
        data[CONF_MAX_SAMPLER_ATTEMPTS],
    )
    count = write_pair_corpus(data[CONF_OUT], data[CONF_N], records)
    _emit({"out": data[CONF_OUT], "rows": count})
    return EXIT_OK


def cmd_triples(args: argparse.Namespace) -> int:
    """Write seeded (A, B, C) triples as matrix blocks."""
    data = _corpus_options(args)
    data[CONF_CONSTRAINT].check_dimension(data[CONF_N])
    blocks = generate_triple_blocks(
        data[CONF_N],
        data[CONF_COUNT],
        data[CONF_CONSTRAINT],
        data[CONF_SEED],
        data[CONF_SHRINK],
        data[CONF_MAX_SAMPLER_ATTEMPTS],
    )
    count = write_matrix_blocks(data[CONF_OUT], blocks)
    _emit({"out": data[CONF_OUT], "blocks": count})
    return EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    """Compare the A and B blocks of a matrix file, and measure both against C."""
    data = MATRIX_SCHEMA(_options(args, CONF_INPUT, CONF_INDEX, CONF_TOL))
    index = data[CONF_INDEX]
    named = {
        block.name: block
        for block in read_matrix_blocks(data[CONF_INPUT])
        if block.index == index
    }
    missing = [name for name in ("A", "B") if name not in named]
    if missing:
        raise DomainError(f"No block {', '.join(missing)} with index {index} in {data[CONF_INPUT]}")

    a = SpdMatrix.from_array(named["A"].values)
    b = SpdMatrix.from_array(named["B"].values)
    verdict = matrix_compare(a, b, ComparisonTolerance(data[CONF_TOL]))
    payload: dict[str, Any] = {
        "n": a.n,
        "index": index,
        "verdict": verdict.as_dict(),
        "logdet_I_plus": {"A": logdet_I_plus(a), "B": logdet_I_plus(b)},
    }
    if "C" in named:
        c = SpdMatrix.from_array(named["C"].values)
        payload["riemannian"] = {"A": riemannian_distance(a, c), "B": riemannian_distance(b, c)}
        payload["s_divergence"] = {"A": s_divergence(a, c), "B": s_divergence(b, c)}
    _emit(payload)
    return EXIT_OK


def _add_corpus_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help=f"dimension (default {DEFAULT_N})")
    parser.add_argument("--count", type=int, required=True, help="number of samples")
    parser.add_argument(
        "--constraint",
        choices=[str(item) for item in PairConstraint],
        help="relation every pair satisfies (default FullStrict)",
    )
    parser.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    parser.add_argument("--shrink", type=float, help=f"sampler shrink (default {DEFAULT_SHRINK})")
    parser.add_argument(
        "--max-sampler-attempts", dest=CONF_MAX_SAMPLER_ATTEMPTS, type=int, help="draws per sample"
    )
    parser.add_argument("--out", required=True, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the esym-order command."""
    parser = argparse.ArgumentParser(
        prog="esym-order",
        description="Elementary-symmetric dominance calculators and verification harness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {library_version()}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO")
    parser.add_argument("--debug", action="store_true", help="log at DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    esym = commands.add_parser("esym", help="print e_1..e_n of a vector")
    esym.add_argument(CONF_VALUES, nargs="+", help="positive entries")
    esym.set_defaults(handler=cmd_esym)

    dominance = commands.add_parser(
        "dominance", help="compare two vectors", usage="%(prog)s [--tol TOL] X... -- Y..."
    )
    dominance.add_argument("x", nargs="+", help="entries of x")
    dominance.add_argument(
        "--tol", type=float, help=f"relative tolerance (default {DEFAULT_TOL_EQ})"
    )
    dominance.set_defaults(handler=cmd_dominance)

    functionals = commands.add_parser("functionals", help="evaluate the scalar functionals")
    functionals.add_argument(CONF_VALUES, nargs="+", help="positive entries")
    functionals.add_argument("--alpha", nargs="+", help="orders in [0, 2]")
    functionals.set_defaults(handler=cmd_functionals)

    verify = commands.add_parser("verify", help="run a seeded verification batch")
    verify.add_argument(
        "--property", required=True, choices=[str(item) for item in PropertyId], type=str.upper
    )
    verify.add_argument("--n", type=int, help=f"dimension (default {DEFAULT_N})")
    verify.add_argument("--trials", type=int, help=f"trial count (default {DEFAULT_TRIALS})")
    verify.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    verify.add_argument("--alpha", nargs="+", help="override the property's alpha grid")
    verify.add_argument("--shrink", type=float, help=f"sampler shrink (default {DEFAULT_SHRINK})")
    verify.add_argument(
        "--max-sampler-attempts", dest=CONF_MAX_SAMPLER_ATTEMPTS, type=int, help="draws per trial"
    )
    verify.add_argument("--workers", type=int, help="threads running trials")
    verify.add_argument("--out", help="write the JSON report here")
    verify.set_defaults(handler=cmd_verify)

    pairs = commands.add_parser("pairs", help="write a CSV corpus of certified pairs")
    _add_corpus_arguments(pairs)
    pairs.set_defaults(handler=cmd_pairs)

    triples = commands.add_parser("triples", help="write sampled (A, B, C) matrix blocks")
    _add_corpus_arguments(triples)
    triples.set_defaults(handler=cmd_triples)

    matrix = commands.add_parser("matrix", help="compare the A and B blocks of a matrix file")
    matrix.add_argument("--in", dest=CONF_INPUT, required=True, help="matrix-block CSV")
    matrix.add_argument("--index", type=int, help="block index to read (default 0)")
    matrix.add_argument("--tol", type=float, help=f"relative tolerance (default {DEFAULT_TOL_EQ})")
    matrix.set_defaults(handler=cmd_matrix)
    return parser


def _split_vectors(argv: list[str]) -> tuple[list[str], list[str] | None]:
    """Split `dominance X... -- Y...` at the separator argparse cannot see."""
    if "--" not in argv:
        return argv, None
    position = argv.index("--")
    return argv[:position], argv[position + 1 :]


def configure_logging(verbose: bool, debug: bool) -> None:
    """Send log records to standard error at the requested level."""
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""
    head, tail = _split_vectors(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(head)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else EXIT_USAGE

    configure_logging(args.verbose, args.debug)
    if args.command == "dominance":
        if not tail:
            print(f"{DOMAIN}: dominance needs X... -- Y...", file=sys.stderr)
            return EXIT_USAGE
        args.y = tail
    elif tail is not None:
        print(f"{DOMAIN}: unexpected '--' for {args.command}", file=sys.stderr)
        return EXIT_USAGE
    args.enable_debug_logging = args.debug

    try:
        return args.handler(args)
    except vol.Invalid as err:
        print(f"{DOMAIN}: invalid option: {err}", file=sys.stderr)
    except EsymOrderError as err:
        print(f"{DOMAIN}: {err}", file=sys.stderr)
    except OSError as err:
        print(f"{DOMAIN}: {err}", file=sys.stderr)
    return EXIT_USAGE
