"""Output vocabulary reduction: snap rule conclusions onto k-means levels of y."""
from __future__ import annotations

import numpy as np

from .exceptions import InsufficientDistinctValuesError
from .partitioning import kmeans_1d


def snap_to_levels(values, levels) -> np.ndarray:
    """Nearest level for each value; ties go to the smaller level."""
    v = np.asarray(values, dtype=float)
    lv = np.sort(np.asarray(levels, dtype=float))
    dist = np.abs(v[:, None] - lv[None, :])
    return lv[np.argmin(dist, axis=1)]


def output_levels(y, c: int, seed: int = 0) -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if c > np.unique(y).size:
        raise InsufficientDistinctValuesError(
            f"c={c} exceeds the {np.unique(y).size} distinct output values"
        )
    return kmeans_1d(y, c, seed)


def reduce_vocabulary(fis, y, c: int, seed: int = 0):
    """Copy of ``fis`` whose conclusions are the nearest of ``c`` output levels.

    The levels are k-means centroids of the training outputs ``y``, so every
    new conclusion lies within [min y, max y].
    """
    levels = output_levels(y, c, seed)
    if fis.n_rules == 0:
        return fis
    return fis.with_conclusions(snap_to_levels(fis.conclusions, levels))
