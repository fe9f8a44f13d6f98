import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyols.exceptions import DegenerateColumnError, InsufficientDistinctValuesError
from fuzzyols.partitioning import (
    build_gaussian_candidate_rules,
    build_partition_hierarchy,
    build_standardized_partition,
    gaussian_sigmas,
    kmeans_1d,
    kmeans_1d_fit,
    within_cluster_sse,
)


def exhaustive_kmeans_sse(values, k):
    """Global optimum of 1-D k-means: best split of the sorted values into k contiguous runs."""
    v = np.sort(np.asarray(values, dtype=float))
    best = np.inf
    for cuts in itertools.combinations(range(1, v.size), k - 1):
        best = min(best, sum(float(((p - p.mean()) ** 2).sum()) for p in np.split(v, cuts)))
    return best


def assert_fixed_point(values, res, tol=1e-12):
    v = np.asarray(values, dtype=float)
    for j, c in enumerate(res.centers):
        members = v[res.labels == j]
        assert members.size > 0
        assert abs(members.mean() - c) <= tol * max(1.0, abs(c))
    d = np.abs(v[:, None] - res.centers[None, :])
    assert np.all(d[np.arange(v.size), res.labels] <= d.min(axis=1) + 1e-12)


class TestKMeans:
    def test_two_clusters_match_exhaustive_oracle(self):
        # oracle: exhaustive search over the 2-splits of (1, 2, 9, 10)
        assert kmeans_1d([1, 2, 9, 10], 2).tolist() == [1.5, 9.5]

    def test_three_clusters_match_exhaustive_oracle(self):
        # oracle: exhaustive search gives (4/3, 7.5, 94/3) with SSE 5.8333...
        vals = [1, 1, 2, 7, 8, 30, 31, 33]
        c = kmeans_1d(vals, 3)
        assert np.allclose(c, [1.3333333333333333, 7.5, 31.333333333333332], rtol=0, atol=1e-12)
        assert within_cluster_sse(vals, c) == pytest.approx(exhaustive_kmeans_sse(vals, 3), abs=1e-9)

    def test_identical_values(self):
        assert kmeans_1d([4, 4, 4], 1).tolist() == [4.0]

    def test_k_equals_distinct(self):
        assert kmeans_1d([9, 1, 5], 3).tolist() == [1.0, 5.0, 9.0]
        assert within_cluster_sse([9, 1, 5, 5], kmeans_1d([9, 1, 5, 5], 3)) == 0.0

    def test_too_many_clusters(self):
        with pytest.raises(InsufficientDistinctValuesError):
            kmeans_1d([1, 1, 2], 3)

    def test_random_init_is_seeded(self, rng):
        v = rng.normal(size=200)
        a = kmeans_1d_fit(v, 4, seed=3, init="random")
        b = kmeans_1d_fit(v, 4, seed=3, init="random")
        assert np.array_equal(a.centers, b.centers)
        assert_fixed_point(v, a)

    @given(st.lists(st.integers(-50, 50), min_size=2, max_size=12), st.integers(1, 4))
    def test_fixed_point_and_oracle_bound(self, values, k):
        k = min(k, len(set(values)))
        res = kmeans_1d_fit(values, k)
        assert np.all(np.diff(res.centers) > 0)
        assert_fixed_point(values, res)
        assert within_cluster_sse(values, res.centers) >= exhaustive_kmeans_sse(values, res.k) - 1e-9

    @given(st.lists(st.integers(0, 20), min_size=3, max_size=30), st.integers(1, 5), st.randoms())
    def test_order_free(self, values, k, rnd):
        k = min(k, len(set(values)))
        shuffled = list(values)
        rnd.shuffle(shuffled)
        assert np.array_equal(kmeans_1d(sorted(values), k), kmeans_1d(shuffled, k))


class TestStandardized:
    def test_two_sets(self):
        part = build_standardized_partition([1, 2, 9, 10], 2)
        assert [(m.kind, m.params) for m in part.mfs] == [
            ("semi-trapezoid-left", (1.5, 9.5)), ("semi-trapezoid-right", (1.5, 9.5))]

    def test_singleton_clusters(self):
        part = build_standardized_partition([0, 5, 10], 3)
        assert [(m.kind, m.params) for m in part.mfs] == [
            ("semi-trapezoid-left", (0.0, 5.0)), ("triangular", (0.0, 5.0, 10.0)),
            ("semi-trapezoid-right", (5.0, 10.0))]

    def test_one_set_is_universal(self, rng):
        part = build_standardized_partition(rng.normal(size=30), 1)
        assert part.size == 1 and part.mfs[0].kind == "universal"

    @given(st.lists(st.floats(-100, 100), min_size=2, max_size=40), st.integers(1, 7))
    def test_centers_are_kmeans_centers(self, values, k):
        k = min(k, len(set(values)))
        part = build_standardized_partition(values, k)
        assert part.centers == tuple(kmeans_1d(values, k).tolist())


class TestHierarchy:
    def test_capped_by_distinct_values(self):
        assert build_partition_hierarchy([1, 2, 9, 10], 7).sizes() == [1, 2, 3, 4]

    def test_n_max_one(self):
        assert build_partition_hierarchy([1, 2, 9, 10], 1).sizes() == [1]

    def test_cap_not_reached(self):
        h = build_partition_hierarchy(np.arange(100.0), 7, variable_index=3)
        assert h.sizes() == list(range(1, 8))
        assert h.max_size == 7 and h[5].variable_index == 3


class TestGaussian:
    def test_sigma(self):
        assert gaussian_sigmas(np.array([[0.0], [10.0], [4.0]]), 0.2).tolist() == [2.0]

    def test_degenerate_column(self):
        with pytest.raises(DegenerateColumnError):
            gaussian_sigmas(np.array([[1.0, 3.0], [2.0, 3.0]]))

    def test_one_rule_per_sample(self):
        X = np.array([[5.0, 1.0], [0.0, 2.0], [10.0, 2.0]])
        y = np.array([1.2, 3.0, 4.0])
        sigmas, parts, rules = build_gaussian_candidate_rules(X, y, 0.2)
        assert len(rules) == 3
        first = rules[0]
        assert first.conclusion == 1.2
        mf = parts[0].mfs[dict(first.premise)[0]]
        assert mf.kind == "gaussian" and mf.params == (5.0, 2.0)
        assert sigmas.tolist() == [2.0, pytest.approx(0.2)]
