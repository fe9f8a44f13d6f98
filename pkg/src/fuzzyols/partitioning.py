"""Fuzzy partitions from data: 1-D k-means, standardized partitions, hierarchies
and the per-sample Gaussian candidates of the original algorithm."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .exceptions import DegenerateColumnError, InsufficientDistinctValuesError
from .fis import FuzzyPartition, Rule

logger = logging.getLogger(__name__)

DEFAULT_GAUSSIAN_SCALE = 0.2


@dataclass(frozen=True)
class KMeansResult:
    centers: np.ndarray
    labels: np.ndarray
    n_iter: int
    collapsed: int = 0

    @property
    def k(self) -> int:
        return len(self.centers)


def kmeans_1d_fit(values, k: int, seed: int = 0, init: str = "uniform", max_iter: int = 1000) -> KMeansResult:
    """Cluster scalars into ``k`` groups; centers come back sorted.

    ``init="uniform"`` spaces the starting centroids evenly between the
    minimum and maximum value and ignores ``seed``; ``init="random"`` draws
    ``k`` distinct values with ``numpy.random.default_rng(seed)``.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("k-means needs at least one value")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    distinct = np.unique(v)
    if k > distinct.size:
        raise InsufficientDistinctValuesError(
            f"insufficient distinct values: k={k} but only {distinct.size} distinct values"
        )
    if init == "uniform":
        start = np.linspace(v.min(), v.max(), k) if k > 1 else np.array([v.min()])
    elif init == "random":
        rng = np.random.default_rng(seed)
        start = np.sort(rng.choice(distinct, size=k, replace=False))
    else:
        raise ValueError(f"unknown init {init!r}")
    # sorted input makes the result independent of sample order, including
    # the re-seeding tie-break and the summation order of the means
    perm = np.argsort(v, kind="stable")
    centers, sorted_labels, n_iter = kernels.kmeans_lloyd(v[perm], start, max_iter)
    labels = np.empty_like(sorted_labels)
    labels[perm] = sorted_labels
    order = np.argsort(centers, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(k)
    centers = centers[order]
    labels = rank[labels]
    uniq = np.unique(centers)
    collapsed = k - uniq.size
    if collapsed:
        logger.warning("k-means produced %d duplicate centers; partition size reduced to %d", collapsed, uniq.size)
        labels = np.searchsorted(uniq, centers)[labels]
        centers = uniq
    return KMeansResult(centers, labels, n_iter, collapsed)


def kmeans_1d(values, k: int, seed: int = 0) -> np.ndarray:
    """Sorted k-means centers of a list of scalars."""
    return kmeans_1d_fit(values, k, seed).centers


def within_cluster_sse(values, centers) -> float:
    v = np.asarray(values, dtype=float).ravel()
    c = np.asarray(centers, dtype=float)
    return float(np.sum(np.min((v[:, None] - c[None, :]) ** 2, axis=1)))


def build_standardized_partition(values, k: int, seed: int = 0, variable_index: int = 0) -> FuzzyPartition:
    """Standardized partition whose centers are the k-means centers of ``values``."""
    return FuzzyPartition.standardized_from_centers(variable_index, kmeans_1d(values, k, seed))


@dataclass(frozen=True)
class PartitionHierarchy:
    """Partitions of increasing size for one variable, keyed by size."""

    variable_index: int
    partitions_by_size: dict[int, FuzzyPartition] = field(default_factory=dict)

    @property
    def max_size(self) -> int:
        return max(self.partitions_by_size)

    def __getitem__(self, size: int) -> FuzzyPartition:
        return self.partitions_by_size[size]

    def sizes(self) -> list[int]:
        return sorted(self.partitions_by_size)


def build_partition_hierarchy(values, n_max: int, seed: int = 0, variable_index: int = 0) -> PartitionHierarchy:
    """Partitions of sizes 1..min(n_max, distinct values).

    If k-means collapses duplicate centers for some size, the reduced
    partition is kept only when that size is not already present.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    v = np.asarray(values, dtype=float).ravel()
    cap = min(n_max, np.unique(v).size)
    by_size: dict[int, FuzzyPartition] = {}
    for k in range(1, cap + 1):
        part = build_standardized_partition(v, k, seed, variable_index)
        by_size.setdefault(part.size, part)
    return PartitionHierarchy(variable_index, by_size)


def gaussian_sigmas(X, s: float = DEFAULT_GAUSSIAN_SCALE) -> np.ndarray:
    """Per-column spread ``s * (max - min)``."""
    X = np.asarray(X, dtype=float)
    if s <= 0:
        raise ValueError(f"scale factor must be positive, got {s}")
    spread = X.max(axis=0) - X.min(axis=0)
    bad = np.flatnonzero(spread <= 0)
    if bad.size:
        raise DegenerateColumnError(f"degenerate column(s) {bad.tolist()}: constant input, sigma would be 0")
    return s * spread


def build_gaussian_candidate_rules(X, y, s: float = DEFAULT_GAUSSIAN_SCALE):
    """One Gaussian-premise rule per sample.

    Returns ``(sigmas, partitions, rules)``. Partition ``j`` holds one
    Gaussian per distinct value of column ``j``; rule ``i`` points at the sets
    centered on sample ``i`` and concludes ``y[i]``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("dataset must be a non-empty 2-D array")
    sigmas = gaussian_sigmas(X, s)
    partitions = []
    index = np.empty(X.shape, dtype=np.int64)
    for j in range(X.shape[1]):
        centers, inverse = np.unique(X[:, j], return_inverse=True)
        partitions.append(FuzzyPartition.gaussian(j, centers, sigmas[j]))
        index[:, j] = inverse.ravel()
    rules = [
        Rule(tuple((j, int(index[i, j])) for j in range(X.shape[1])), y[i]) for i in range(X.shape[0])
    ]
    return sigmas, partitions, rules
