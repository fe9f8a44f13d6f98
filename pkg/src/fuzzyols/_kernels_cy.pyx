# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_kernels_py``."""
import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef enum:
    STOP_VARIANCE = 0
    STOP_MAX_RULES = 1
    STOP_EXHAUSTED = 2
    STOP_RANK = 3


def kmeans_lloyd(values, init, Py_ssize_t max_iter):
    cdef double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] c = np.array(init, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0], k = c.shape[0]
    cdef cnp.int64_t[::1] labels = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = np.zeros(k, dtype=np.int64)
    cdef double[::1] sums = np.zeros(k, dtype=np.float64)
    cdef double[::1] own = np.zeros(n, dtype=np.float64)
    cdef double[::1] new = np.zeros(k, dtype=np.float64)
    cdef unsigned char[::1] taken = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t i, j, e, best_i, it = 0, n_iter = 0
    cdef double d, best_d, own_best
    cdef bint changed

    for it in range(1, max_iter + 1):
        n_iter = it
        for j in range(k):
            counts[j] = 0
        for i in range(n):
            best_i = 0
            best_d = fabs(v[i] - c[0])
            for j in range(1, k):
                d = fabs(v[i] - c[j])
                if d < best_d:
                    best_d = d
                    best_i = j
            labels[i] = best_i
            own[i] = best_d
            counts[best_i] += 1
            taken[i] = 0
        for e in range(k):
            if counts[e] != 0:
                continue
            best_i = -1
            own_best = -1.0
            for i in range(n):
                if counts[labels[i]] > 1 and not taken[i] and own[i] > own_best:
                    own_best = own[i]
                    best_i = i
            if best_i < 0:
                break
            counts[labels[best_i]] -= 1
            labels[best_i] = e
            counts[e] += 1
            taken[best_i] = 1
        for j in range(k):
            sums[j] = 0.0
        for i in range(n):
            sums[labels[i]] += v[i]
        changed = False
        for j in range(k):
            if counts[j] > 0:
                new[j] = sums[j] / counts[j]
            else:
                new[j] = c[j]
            if new[j] != c[j]:
                changed = True
        if not changed:
            break
        for j in range(k):
            c[j] = new[j]
    return np.asarray(c).copy(), np.asarray(labels).copy(), n_iter


def mgs_select(P, y, double epsilon, Py_ssize_t max_rules, double norm_tol, double tie_tol):
    cdef double[::1, :] W = np.array(P, dtype=np.float64, order="F", copy=True)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = W.shape[0], r = W.shape[1]
    cdef double[::1] orig = np.zeros(r)
    cdef double[::1] sq = np.zeros(r)
    cdef double[::1] wy = np.zeros(r)
    cdef double[::1] q = np.zeros(n)
    cdef unsigned char[::1] active = np.ones(r, dtype=np.uint8)
    cdef Py_ssize_t limit = r if max_rules < 0 else min(max_rules, r)
    cdef double[:, ::1] coef = np.zeros((max(limit, 1), r))
    cdef cnp.int64_t[::1] selected = np.zeros(max(limit, 1), dtype=np.int64)
    cdef double[::1] g = np.zeros(max(limit, 1))
    cdef double[::1] xvar = np.zeros(max(limit, 1))
    cdef Py_ssize_t i, j, idx, m = 0
    cdef double yty = 0.0, s, t, best, xv, qq, a, cum = 0.0
    cdef int stop = STOP_EXHAUSTED
    cdef bint any_eligible

    for i in range(n):
        yty += yv[i] * yv[i]
    for j in range(r):
        s = 0.0
        for i in range(n):
            s += W[i, j] * W[i, j]
        orig[j] = s

    while True:
        if m >= limit:
            stop = STOP_MAX_RULES if limit < r else STOP_EXHAUSTED
            break
        any_eligible = False
        best = -1.0
        for j in range(r):
            if not active[j] or orig[j] <= 0.0:
                continue
            s = 0.0
            t = 0.0
            for i in range(n):
                s += W[i, j] * W[i, j]
                t += W[i, j] * yv[i]
            sq[j] = s
            wy[j] = t
            if s > norm_tol * orig[j]:
                xv = t * t / (s * yty)
                if not any_eligible or xv > best:
                    best = xv
                any_eligible = True
        if not any_eligible:
            stop = STOP_RANK
            break
        idx = -1
        for j in range(r):
            if active[j] and orig[j] > 0.0 and sq[j] > norm_tol * orig[j]:
                xv = wy[j] * wy[j] / (sq[j] * yty)
                if xv >= best - tie_tol:
                    idx = j
                    break
        qq = sq[idx]
        for i in range(n):
            q[i] = W[i, idx]
        xv = wy[idx] * wy[idx] / (qq * yty)
        selected[m] = idx
        g[m] = wy[idx] / qq
        xvar[m] = xv
        cum += xv
        active[idx] = 0
        for j in range(r):
            s = 0.0
            for i in range(n):
                s += q[i] * W[i, j]
            a = s / qq
            coef[m, j] = a
            if active[j]:
                for i in range(n):
                    W[i, j] -= a * q[i]
        m += 1
        if 1.0 - cum < epsilon:
            stop = STOP_VARIANCE
            break
    return (
        np.asarray(selected)[:m].copy(),
        np.asarray(g)[:m].copy(),
        np.asarray(coef)[:m].copy(),
        np.asarray(xvar)[:m].copy(),
        stop,
    )


def fired_premises(lo, mu_lo, mu_hi, strides, bint use_prod, double thresh):
    cdef cnp.int64_t[:, ::1] lo_v = np.ascontiguousarray(lo, dtype=np.int64)
    cdef double[:, ::1] mlo = np.ascontiguousarray(mu_lo, dtype=np.float64)
    cdef double[:, ::1] mhi = np.ascontiguousarray(mu_hi, dtype=np.float64)
    cdef cnp.int64_t[::1] st = np.ascontiguousarray(strides, dtype=np.int64)
    cdef Py_ssize_t n = lo_v.shape[0], nq = lo_v.shape[1]
    cdef Py_ssize_t n_masks = 1 << nq
    cdef cnp.int64_t[::1] out_s = np.empty(n * n_masks, dtype=np.int64)
    cdef cnp.int64_t[::1] out_c = np.empty(n * n_masks, dtype=np.int64)
    cdef double[::1] out_w = np.empty(n * n_masks, dtype=np.float64)
    cdef Py_ssize_t i, j, mask, count = 0
    cdef cnp.int64_t code
    cdef double w, mu

    for mask in range(n_masks):
        for i in range(n):
            w = 1.0
            code = 0
            for j in range(nq):
                if (mask >> j) & 1:
                    mu = mhi[i, j]
                    code += (lo_v[i, j] + 1) * st[j]
                else:
                    mu = mlo[i, j]
                    code += lo_v[i, j] * st[j]
                if use_prod:
                    w *= mu
                elif mu < w:
                    w = mu
            if w > thresh:
                out_s[count] = i
                out_c[count] = code
                out_w[count] = w
                count += 1
    return (
        np.asarray(out_s)[:count].copy(),
        np.asarray(out_c)[:count].copy(),
        np.asarray(out_w)[:count].copy(),
    )
