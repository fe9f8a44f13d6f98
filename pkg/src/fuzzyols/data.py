"""Datasets and cross-validation folds."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DataFormatError

logger = logging.getLogger(__name__)

MISSING_TOKENS = frozenset({"", "?", "na", "nan", "null"})


@dataclass(frozen=True)
class Dataset:
    """N input-output pairs with column names."""

    X: np.ndarray
    y: np.ndarray
    input_names: tuple[str, ...]
    output_name: str = "y"
    source: str = ""

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise ValueError("X and y have different numbers of rows")
        if X.shape[0] < 1:
            raise ValueError("a dataset needs at least one row")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("dataset cells must be finite")
        names = tuple(self.input_names) or tuple(f"v{j + 1}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise ValueError("one name per input column expected")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "input_names", names)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.X.shape[1]

    @property
    def ranges(self) -> tuple[tuple[float, float], ...]:
        return tuple((float(lo), float(hi)) for lo, hi in zip(self.X.min(axis=0), self.X.max(axis=0)))

    @property
    def output_range(self) -> tuple[float, float]:
        return float(self.y.min()), float(self.y.max())

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.X[rows], self.y[rows], self.input_names, self.output_name, self.source)


def load_csv(path, output_column: str | int | None = None) -> Dataset:
    """Read a comma-separated file with a header row.

    The output column defaults to the last one. Rows holding a missing-value
    marker (empty, ``?``, ``NA``, ``NaN``) are dropped with a warning; any other
    non-numeric cell is an error naming its line and column.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if output_column is None:
            out_idx = len(header) - 1
        elif isinstance(output_column, int) or str(output_column).lstrip("-").isdigit():
            out_idx = int(output_column) % len(header)
        elif output_column in header:
            out_idx = header.index(output_column)
        else:
            raise DataFormatError(f"{path}: no column named {output_column!r}; columns are {header}")
        rows = []
        dropped = 0
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DataFormatError(f"{path}: line {line_no} has {len(row)} cells, header has {len(header)}")
            values = []
            missing = False
            for col, cell in zip(header, row):
                cell = cell.strip()
                if cell.lower() in MISSING_TOKENS:
                    missing = True
                    break
                try:
                    v = float(cell)
                except ValueError:
                    raise DataFormatError(
                        f"{path}: line {line_no}, column {col!r}: non-numeric value {cell!r}"
                    ) from None
                if not math.isfinite(v):
                    raise DataFormatError(f"{path}: line {line_no}, column {col!r}: non-finite value {cell!r}")
                values.append(v)
            if missing:
                dropped += 1
                continue
            rows.append(values)
    if dropped:
        logger.warning("%s: dropped %d row(s) with missing values", path, dropped)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    table = np.array(rows, dtype=float)
    in_idx = [j for j in range(len(header)) if j != out_idx]
    return Dataset(table[:, in_idx], table[:, out_idx], tuple(header[j] for j in in_idx), header[out_idx], str(path))


@dataclass(frozen=True)
class FoldPlan:
    seed: int
    k: int
    assignment: np.ndarray

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)

    def fold_sizes(self) -> list[int]:
        return np.bincount(self.assignment, minlength=self.k).tolist()


def make_folds(n_or_dataset, k: int = 10, seed: int = 42) -> FoldPlan:
    """Random split of the row indices into ``k`` folds whose sizes differ by at most one."""
    n = n_or_dataset.n_samples if isinstance(n_or_dataset, Dataset) else int(n_or_dataset)
    if k < 2:
        raise ValueError("at least two folds are needed")
    if n < k:
        raise ValueError(f"cannot split {n} rows into {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    assignment[perm] = np.arange(n) % k
    return FoldPlan(seed, k, assignment)


def train_test(dataset: Dataset, plan: FoldPlan, fold: int) -> tuple[Dataset, Dataset]:
    if not 0 <= fold < plan.k:
        raise ValueError(f"fold must be in [0, {plan.k})")
    return dataset.subset(plan.train_rows(fold)), dataset.subset(plan.test_rows(fold))
