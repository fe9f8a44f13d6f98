"""NumPy implementations of the inner loops.

Each function has a twin with the same signature in ``_kernels_cy.pyx``.
"""
import numpy as np

STOP_VARIANCE, STOP_MAX_RULES, STOP_EXHAUSTED, STOP_RANK = 0, 1, 2, 3


def kmeans_lloyd(values, init, max_iter):
    """Lloyd iterations on scalars.

    Ties go to the lowest centroid index. An empty cluster is re-seeded with
    the point lying farthest from its own centroid, the first such point in
    input order on ties. Returns
    ``(centers, labels, n_iter)``.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    centers = np.array(init, dtype=np.float64)
    k = centers.shape[0]
    labels = np.zeros(values.shape[0], dtype=np.int64)
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        dist = np.abs(values[:, None] - centers[None, :])
        labels = np.argmin(dist, axis=1).astype(np.int64)
        counts = np.bincount(labels, minlength=k)
        if np.any(counts == 0):
            own = dist[np.arange(values.shape[0]), labels]
            taken = np.zeros(values.shape[0], dtype=bool)
            for empty in np.flatnonzero(counts == 0):
                donors = (counts[labels] > 1) & ~taken
                if not donors.any():
                    break
                cand = np.where(donors, own, -1.0)
                i = int(np.argmax(cand))
                counts[labels[i]] -= 1
                labels[i] = empty
                counts[empty] += 1
                taken[i] = True
        sums = np.bincount(labels, weights=values, minlength=k)
        new = centers.copy()
        nonempty = counts > 0
        new[nonempty] = sums[nonempty] / counts[nonempty]
        if np.array_equal(new, centers):
            break
        centers = new
    return centers, labels, n_iter


def mgs_select(P, y, epsilon, max_rules, norm_tol, tie_tol):
    """Greedy orthogonal least squares by modified Gram-Schmidt.

    Returns ``(selected, g, coef, xvar, stop)`` where ``coef[k, j]`` is the
    projection coefficient of candidate ``j`` on the ``k``-th orthogonal
    vector. ``max_rules < 0`` means unlimited.
    """
    W = np.array(P, dtype=np.float64, order="F", copy=True)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, r = W.shape
    yty = float(y @ y)
    orig = np.einsum("ij,ij->j", W, W)
    active = np.ones(r, dtype=bool)
    limit = r if max_rules < 0 else min(max_rules, r)
    selected, g_list, xv_list, coef_rows = [], [], [], []
    cum = 0.0
    stop = STOP_EXHAUSTED
    while True:
        if len(selected) >= limit:
            stop = STOP_MAX_RULES if limit < r else STOP_EXHAUSTED
            break
        sq = np.einsum("ij,ij->j", W, W)
        eligible = active & (orig > 0) & (sq > norm_tol * orig)
        if not eligible.any():
            stop = STOP_RANK
            break
        wy = W.T @ y
        with np.errstate(divide="ignore", invalid="ignore"):
            xv = np.where(eligible, wy * wy / (sq * yty), -np.inf)
        best = xv.max()
        idx = int(np.flatnonzero(xv >= best - tie_tol)[0])
        qq = sq[idx]
        q = W[:, idx].copy()
        selected.append(idx)
        g_list.append(wy[idx] / qq)
        xv_list.append(xv[idx])
        cum += xv[idx]
        active[idx] = False
        a = (q @ W) / qq
        coef_rows.append(a.copy())
        a[~active] = 0.0
        W -= np.outer(q, a)
        if 1.0 - cum < epsilon:
            stop = STOP_VARIANCE
            break
    coef = np.array(coef_rows, dtype=np.float64).reshape(len(selected), r)
    return (
        np.array(selected, dtype=np.int64),
        np.array(g_list, dtype=np.float64),
        coef,
        np.array(xv_list, dtype=np.float64),
        stop,
    )


def fired_premises(lo, mu_lo, mu_hi, strides, use_prod, thresh):
    """Enumerate (sample, premise code, firing) for premises firing above ``thresh``.

    Each variable contributes at most two fuzzy sets per sample: set ``lo``
    with degree ``mu_lo`` and set ``lo + 1`` with degree ``mu_hi``.
    """
    lo = np.ascontiguousarray(lo, dtype=np.int64)
    n, q = lo.shape
    samples, codes, firings = [], [], []
    rows = np.arange(n, dtype=np.int64)
    for mask in range(1 << q):
        bits = np.array([(mask >> j) & 1 for j in range(q)], dtype=np.int64)
        if q:
            mu = np.where(bits[None, :] == 1, mu_hi, mu_lo)
            w = mu.prod(axis=1) if use_prod else mu.min(axis=1)
            code = (lo + bits[None, :]) @ strides
        else:
            w = np.ones(n)
            code = np.zeros(n, dtype=np.int64)
        keep = w > thresh
        samples.append(rows[keep])
        codes.append(code[keep])
        firings.append(w[keep])
    return (
        np.concatenate(samples).astype(np.int64),
        np.concatenate(codes).astype(np.int64),
        np.concatenate(firings).astype(np.float64),
    )
