"""CSV corpora of sampled pairs and dense matrix blocks."""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from .const import DEFAULT_MAX_SAMPLER_ATTEMPTS, DEFAULT_SHRINK
from .dominance_sampling import (
    DominancePair,
    PairConstraint,
    matrix_triple,
    sample_pair,
    trial_rng,
)
from .errors import DomainError

_LOGGER = logging.getLogger(__name__)

MATRIX_TAG = "matrix"


def format_float(value: float) -> str:
    """Return value with 17 significant digits."""
    return format(float(value), ".17g")


def pair_header(n: int) -> list[str]:
    """Return the header row of an n-dimensional pair corpus."""
    return [
        "n",
        "constraint",
        "seed",
        "index",
        *(f"x_{i}" for i in range(1, n + 1)),
        *(f"y_{i}" for i in range(1, n + 1)),
    ]


@dataclass(frozen=True)
class PairRecord:
    """One corpus row."""

    n: int
    constraint: PairConstraint
    seed: int
    index: int
    x: tuple[float, ...]
    y: tuple[float, ...]

    @classmethod
    def from_pair(cls, pair: DominancePair, seed: int, index: int) -> PairRecord:
        """Wrap a sampled pair."""
        return cls(pair.n, pair.constraint, seed, index, pair.x.entries, pair.y.entries)

    def certify(self) -> DominancePair:
        """Recompute the verdict of the stored vectors."""
        return DominancePair.certify(self.x, self.y, self.constraint)

    def as_row(self) -> list[str]:
        """Return the CSV cells."""
        return [
            str(self.n),
            str(self.constraint),
            str(self.seed),
            str(self.index),
            *(format_float(value) for value in self.x),
            *(format_float(value) for value in self.y),
        ]


@dataclass(frozen=True, eq=False)
class MatrixBlock:
    """Named dense matrix with its corpus index."""

    name: str
    index: int
    values: np.ndarray

    @property
    def n(self) -> int:
        """Return the dimension."""
        return self.values.shape[0]


def _writer(handle: TextIO) -> Any:
    return csv.writer(handle, lineterminator="\n")


def write_pair_corpus(path: Path | str, n: int, records: Iterable[PairRecord]) -> int:
    """Write records to path and return the row count."""
    count = 0
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        writer.writerow(pair_header(n))
        for record in records:
            if record.n != n:
                raise DomainError(f"Record {record.index} has n={record.n}, corpus has n={n}")
            writer.writerow(record.as_row())
            count += 1
    _LOGGER.debug("Wrote %d pairs to %s", count, path)
    return count


def read_pair_corpus(path: Path | str) -> list[PairRecord]:
    """Read a corpus written by write_pair_corpus."""
    with Path(path).open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or rows[0][:4] != ["n", "constraint", "seed", "index"]:
        raise DomainError(f"{path} is not a pair corpus")
    n = (len(rows[0]) - 4) // 2
    if rows[0] != pair_header(n):
        raise DomainError(f"{path} has a malformed header")

    records = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != 4 + 2 * n:
            raise DomainError(f"{path}:{line}: expected {4 + 2 * n} cells, got {len(row)}")
        try:
            values = [float(cell) for cell in row[4:]]
            record = PairRecord(
                int(row[0]),
                PairConstraint(row[1]),
                int(row[2]),
                int(row[3]),
                tuple(values[:n]),
                tuple(values[n:]),
            )
        except ValueError as ex:
            raise DomainError(f"{path}:{line}: {ex}") from ex
        records.append(record)
    return records


def generate_pair_corpus(
    n: int,
    count: int,
    constraint: PairConstraint,
    seed: int,
    shrink: float = DEFAULT_SHRINK,
    max_attempts: int = DEFAULT_MAX_SAMPLER_ATTEMPTS,
) -> list[PairRecord]:
    """Sample `count` pairs, row i drawn from trial_rng(seed, i)."""
    constraint = PairConstraint(constraint)
    constraint.check_dimension(n)
    records = []
    for index in range(count):
        pair, _ = sample_pair(trial_rng(seed, index), n, constraint, shrink, max_attempts)
        records.append(PairRecord.from_pair(pair, seed, index))
    return records


def write_matrix_blocks(path: Path | str, blocks: Iterable[MatrixBlock]) -> int:
    """Write blocks as a `matrix,<name>,<n>,<index>` row followed by n value rows."""
    count = 0
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        for block in blocks:
            writer.writerow([MATRIX_TAG, block.name, str(block.n), str(block.index)])
            for row in block.values:
                writer.writerow([format_float(value) for value in row])
            count += 1
    return count


def read_matrix_blocks(path: Path | str) -> list[MatrixBlock]:
    """Read blocks written by write_matrix_blocks; the index cell is optional."""
    with Path(path).open(encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]

    blocks = []
    position = 0
    while position < len(rows):
        header = rows[position]
        if header[0] != MATRIX_TAG or len(header) not in (3, 4):
            raise DomainError(f"{path}: expected a matrix header at row {position + 1}")
        try:
            n = int(header[2])
            index = int(header[3]) if len(header) == 4 else 0
            body = rows[position + 1 : position + 1 + n]
            values = np.array([[float(cell) for cell in row] for row in body], dtype=float)
        except ValueError as ex:
            raise DomainError(f"{path}: bad block {header[1]!r}: {ex}") from ex
        if values.shape != (n, n):
            raise DomainError(f"{path}: block {header[1]!r} is not {n}x{n}")
        blocks.append(MatrixBlock(header[1], index, values))
        position += 1 + n
    return blocks


def generate_triple_blocks(
    n: int,
    count: int,
    constraint: PairConstraint,
    seed: int,
    shrink: float = DEFAULT_SHRINK,
    max_attempts: int = DEFAULT_MAX_SAMPLER_ATTEMPTS,
) -> list[MatrixBlock]:
    """Sample `count` (A, B, C) triples as blocks named A, B and C."""
    blocks = []
    for index in range(count):
        triple, _ = matrix_triple(trial_rng(seed, index), n, constraint, shrink, max_attempts)
        for name, matrix in (("A", triple.a), ("B", triple.b), ("C", triple.c)):
            blocks.append(MatrixBlock(name, index, matrix.as_array()))
    return blocks
