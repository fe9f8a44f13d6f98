"""The compiled and NumPy kernels must agree exactly."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyols import _kernels_py, kernels
from fuzzyols.ols import TIE_TOL

BACKENDS = kernels.available_backends()
needs_ext = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in BACKENDS


@needs_ext
@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=60), st.integers(1, 6))
def test_kmeans_parity(values, k):
    v = np.array(values)
    k = min(k, np.unique(v).size)
    init = np.linspace(v.min(), v.max(), k) if k > 1 else np.array([v.min()])
    a = BACKENDS["cython"].kmeans_lloyd(v, init, 500)
    b = _kernels_py.kmeans_lloyd(v, init, 500)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) and a[2] == b[2]


def _problem(seed, n, r, sparse):
    rng = np.random.default_rng(seed)
    w = rng.random((n, r))
    if sparse:
        w[w < 0.6] = 0.0
        w[np.arange(n), rng.integers(0, r, n)] = 1.0
    return w / w.sum(axis=1, keepdims=True), rng.normal(size=n) + 3.0


@needs_ext
@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("eps,limit", [(0.0, -1), (0.05, -1), (0.0, 3)])
def test_mgs_parity(seed, eps, limit):
    P, y = _problem(seed, 12 + seed, 2 + seed % 9, seed % 2 == 0)
    a = BACKENDS["cython"].mgs_select(P, y, eps, limit, 1e-10, TIE_TOL)
    b = _kernels_py.mgs_select(P, y, eps, limit, 1e-10, TIE_TOL)
    assert np.array_equal(a[0], b[0]) and a[4] == b[4]
    for x, z in zip(a[1:4], b[1:4]):
        assert np.allclose(x, z, rtol=1e-12, atol=1e-14)


@needs_ext
@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("use_prod", [False, True])
def test_fired_premises_parity(seed, use_prod):
    rng = np.random.default_rng(seed)
    n, q = 40, 1 + seed % 4
    lo = rng.integers(0, 3, size=(n, q)).astype(np.int64)
    mu_hi = rng.random((n, q))
    mu_hi[rng.random((n, q)) < 0.2] = 0.0
    mu_lo = 1.0 - mu_hi
    strides = (4 ** np.arange(q - 1, -1, -1)).astype(np.int64)
    a = BACKENDS["cython"].fired_premises(lo, mu_lo, mu_hi, strides, use_prod, 0.05)
    b = _kernels_py.fired_premises(lo, mu_lo, mu_hi, strides, use_prod, 0.05)
    ka = np.lexsort((a[1], a[0]))
    kb = np.lexsort((b[1], b[0]))
    for x, z in zip(a, b):
        assert np.array_equal(np.asarray(x)[ka], np.asarray(z)[kb])
