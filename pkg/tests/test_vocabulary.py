import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyols.exceptions import InsufficientDistinctValuesError
from fuzzyols.fis import FuzzyInferenceSystem, FuzzyPartition, Rule
from fuzzyols.partitioning import kmeans_1d
from fuzzyols.vocabulary import reduce_vocabulary, snap_to_levels


def fis_with(conclusions):
    part = FuzzyPartition.standardized_from_centers(0, list(range(max(2, len(conclusions)))))
    return FuzzyInferenceSystem((part,), tuple(Rule(((0, k),), c) for k, c in enumerate(conclusions)))


def test_single_level_is_mean():
    y = np.array([1.0, 2.0, 6.0])
    red = reduce_vocabulary(fis_with([-5.0, 40.0]), y, 1)
    assert red.conclusions.tolist() == [3.0, 3.0]


def test_fixed_point():
    y = np.array([1.0, 2.0, 9.0, 10.0])
    fis = fis_with([1.5, 9.5, 1.5])
    assert reduce_vocabulary(fis, y, 2) == fis


def test_ties_go_to_smaller_level():
    assert snap_to_levels([5.0], [7.0, 3.0]).tolist() == [3.0]


def test_too_many_levels():
    with pytest.raises(InsufficientDistinctValuesError):
        reduce_vocabulary(fis_with([1.0]), [1.0, 1.0, 2.0], 3)


def test_premises_untouched():
    y = np.arange(20.0)
    fis = fis_with([0.3, 7.7, 19.0, -4.0])
    red = reduce_vocabulary(fis, y, 3)
    assert [r.premise for r in red.rules] == [r.premise for r in fis.rules]


@given(
    st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=12),
    st.lists(st.integers(-500, 500), min_size=2, max_size=40),
    st.integers(1, 6),
)
def test_properties(conclusions, ys, c):
    y = np.array(ys, dtype=float)
    c = min(c, np.unique(y).size)
    fis = fis_with(conclusions)
    red = reduce_vocabulary(fis, y, c, seed=5)
    new = red.conclusions
    levels = kmeans_1d(y, c, 5)
    assert len(set(new.tolist())) <= c
    assert np.all((new >= y.min()) & (new <= y.max()))
    assert reduce_vocabulary(red, y, c, seed=5) == red
    for old, v in zip(fis.conclusions, new):
        assert np.all(abs(v - old) <= np.abs(levels - old) + 1e-12)
