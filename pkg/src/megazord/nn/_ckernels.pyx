# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; formulas mirror megazord.nn._kernels_py one-to-one."""
import numpy as np

from libc.math cimport exp, tanh
from scipy.linalg.cython_blas cimport dgemm


cdef inline double _sig(double x) noexcept nogil:
    cdef double e
    if x >= 0.0:
        return 1.0 / (1.0 + exp(-x))
    e = exp(x)
    return e / (1.0 + e)


cdef inline void _gemm_rr(double* a, double* b, double* c, int m, int n, int k,
                          bint ta, bint tb, double beta) noexcept nogil:
    # Row-major C (m,n) = opA(a) @ opB(b) + beta*C via Fortran dgemm on the
    # transposed views. a is (m,k) row-major, or (k,m) when ta; b is (k,n),
    # or (n,k) when tb.
    cdef char trans_a = c'T' if tb else c'N'
    cdef char trans_b = c'T' if ta else c'N'
    cdef int lda = k if tb else n
    cdef int ldb = m if ta else k
    cdef double alpha = 1.0
    dgemm(&trans_a, &trans_b, &n, &m, &k, &alpha, b, &lda, a, &ldb, &beta, c, &n)


def conv1d_forward(double[:, :, ::1] x, double[:, :, ::1] w, double[::1] b):
    cdef Py_ssize_t nb = x.shape[0], length = x.shape[1], ci = x.shape[2]
    cdef Py_ssize_t k = w.shape[0], nf = w.shape[2]
    cdef Py_ssize_t lo = length - k + 1
    y_arr = np.empty((nb, lo, nf))
    cdef double[:, :, ::1] y = y_arr
    cdef Py_ssize_t bi, l, f, j, c
    cdef double acc
    with nogil:
        for bi in range(nb):
            for l in range(lo):
                for f in range(nf):
                    acc = b[f]
                    for j in range(k):
                        for c in range(ci):
                            acc += x[bi, l + j, c] * w[j, c, f]
                    y[bi, l, f] = acc
    return y_arr


def conv1d_backward(double[:, :, ::1] x, double[:, :, ::1] w, double[:, :, ::1] dy):
    cdef Py_ssize_t nb = x.shape[0], length = x.shape[1], ci = x.shape[2]
    cdef Py_ssize_t k = w.shape[0], nf = w.shape[2]
    cdef Py_ssize_t lo = length - k + 1
    dx_arr = np.zeros((nb, length, ci))
    dw_arr = np.zeros((k, ci, nf))
    db_arr = np.zeros(nf)
    cdef double[:, :, ::1] dx = dx_arr
    cdef double[:, :, ::1] dw = dw_arr
    cdef double[::1] db = db_arr
    cdef Py_ssize_t bi, l, f, j, c
    cdef double d
    with nogil:
        for bi in range(nb):
            for l in range(lo):
                for f in range(nf):
                    d = dy[bi, l, f]
                    db[f] += d
                    for j in range(k):
                        for c in range(ci):
                            dw[j, c, f] += x[bi, l + j, c] * d
                            dx[bi, l + j, c] += w[j, c, f] * d
    return dx_arr, dw_arr, db_arr


def maxpool1d_forward(double[:, :, ::1] x, Py_ssize_t pool):
    cdef Py_ssize_t nb = x.shape[0], length = x.shape[1], nc = x.shape[2]
    cdef Py_ssize_t lp = length // pool
    y_arr = np.empty((nb, lp, nc))
    idx_arr = np.empty((nb, lp, nc), dtype=np.int64)
    cdef double[:, :, ::1] y = y_arr
    cdef long long[:, :, ::1] idx = idx_arr
    cdef Py_ssize_t bi, j, c, p, base, best_at
    cdef double best, v
    with nogil:
        for bi in range(nb):
            for j in range(lp):
                base = j * pool
                for c in range(nc):
                    best = x[bi, base, c]
                    best_at = base
                    for p in range(1, pool):
                        v = x[bi, base + p, c]
                        if v > best:
                            best = v
                            best_at = base + p
                    y[bi, j, c] = best
                    idx[bi, j, c] = best_at
    return y_arr, idx_arr


def maxpool1d_backward(double[:, :, ::1] dy, long long[:, :, ::1] idx, Py_ssize_t length):
    cdef Py_ssize_t nb = dy.shape[0], lp = dy.shape[1], nc = dy.shape[2]
    dx_arr = np.zeros((nb, length, nc))
    cdef double[:, :, ::1] dx = dx_arr
    cdef Py_ssize_t bi, j, c
    with nogil:
        for bi in range(nb):
            for j in range(lp):
                for c in range(nc):
                    dx[bi, idx[bi, j, c], c] += dy[bi, j, c]
    return dx_arr


def lstm_forward(double[:, :, ::1] x, double[:, ::1] wx, double[:, ::1] wh,
                 double[::1] b):
    cdef int nb = <int> x.shape[0]
    cdef int steps = <int> x.shape[1]
    cdef int ci = <int> x.shape[2]
    cdef int h_units = <int> wh.shape[0]
    cdef int gsz = 4 * h_units
    h_arr = np.empty((nb, steps, h_units))
    c_arr = np.empty((nb, steps, h_units))
    g_arr = np.empty((nb, steps, gsz))
    cdef double[:, :, ::1] h = h_arr
    cdef double[:, :, ::1] c = c_arr
    cdef double[:, :, ::1] gates = g_arr
    # contiguous per-step scratch so the timestep slices can feed dgemm
    cdef double[:, ::1] xbuf = np.empty((nb, ci))
    cdef double[:, ::1] hbuf = np.empty((nb, h_units))
    cdef double[:, ::1] pre = np.empty((nb, gsz))
    cdef int t, bi, i, u
    cdef double ig, fg, gg, og, cp, cc
    with nogil:
        for t in range(steps):
            for bi in range(nb):
                for i in range(ci):
                    xbuf[bi, i] = x[bi, t, i]
            _gemm_rr(&xbuf[0, 0], &wx[0, 0], &pre[0, 0], nb, gsz, ci, 0, 0, 0.0)
            if t > 0:
                for bi in range(nb):
                    for u in range(h_units):
                        hbuf[bi, u] = h[bi, t - 1, u]
                _gemm_rr(&hbuf[0, 0], &wh[0, 0], &pre[0, 0], nb, gsz, h_units,
                         0, 0, 1.0)
            for bi in range(nb):
                for u in range(h_units):
                    ig = _sig(pre[bi, u] + b[u])
                    fg = _sig(pre[bi, h_units + u] + b[h_units + u])
                    gg = tanh(pre[bi, 2 * h_units + u] + b[2 * h_units + u])
                    og = _sig(pre[bi, 3 * h_units + u] + b[3 * h_units + u])
                    cp = c[bi, t - 1, u] if t > 0 else 0.0
                    cc = fg * cp + ig * gg
                    c[bi, t, u] = cc
                    h[bi, t, u] = og * tanh(cc)
                    gates[bi, t, u] = ig
                    gates[bi, t, h_units + u] = fg
                    gates[bi, t, 2 * h_units + u] = gg
                    gates[bi, t, 3 * h_units + u] = og
    return h_arr, c_arr, g_arr


def lstm_backward(double[:, :, ::1] x, double[:, ::1] wx, double[:, ::1] wh,
                  double[:, :, ::1] h, double[:, :, ::1] c,
                  double[:, :, ::1] gates, double[:, :, ::1] dh_out):
    cdef int nb = <int> x.shape[0]
    cdef int steps = <int> x.shape[1]
    cdef int ci = <int> x.shape[2]
    cdef int h_units = <int> wh.shape[0]
    cdef int gsz = 4 * h_units
    dx_arr = np.empty((nb, steps, ci))
    dwx_arr = np.zeros((ci, gsz))
    dwh_arr = np.zeros((h_units, gsz))
    db_arr = np.zeros(gsz)
    cdef double[:, :, ::1] dx = dx_arr
    cdef double[:, ::1] dwx = dwx_arr
    cdef double[:, ::1] dwh = dwh_arr
    cdef double[::1] db = db_arr
    cdef double[:, ::1] da = np.empty((nb, gsz))
    cdef double[:, ::1] dh_next = np.zeros((nb, h_units))
    cdef double[:, ::1] dc_next = np.zeros((nb, h_units))
    cdef double[:, ::1] xbuf = np.empty((nb, ci))
    cdef double[:, ::1] hbuf = np.empty((nb, h_units))
    cdef double[:, ::1] dxbuf = np.empty((nb, ci))
    cdef int t, bi, u, j, i
    cdef double ig, fg, gg, og, cp, tc, dh, do_, dc
    with nogil:
        for t in range(steps - 1, -1, -1):
            for bi in range(nb):
                for u in range(h_units):
                    ig = gates[bi, t, u]
                    fg = gates[bi, t, h_units + u]
                    gg = gates[bi, t, 2 * h_units + u]
                    og = gates[bi, t, 3 * h_units + u]
                    cp = c[bi, t - 1, u] if t > 0 else 0.0
                    tc = tanh(c[bi, t, u])
                    dh = dh_out[bi, t, u] + dh_next[bi, u]
                    do_ = dh * tc
                    dc = dh * og * (1.0 - tc * tc) + dc_next[bi, u]
                    da[bi, u] = dc * gg * ig * (1.0 - ig)
                    da[bi, h_units + u] = dc * cp * fg * (1.0 - fg)
                    da[bi, 2 * h_units + u] = dc * ig * (1.0 - gg * gg)
                    da[bi, 3 * h_units + u] = do_ * og * (1.0 - og)
                    dc_next[bi, u] = dc * fg
            # dx_t = da @ wx.T, next-step carry dh = da @ wh.T
            _gemm_rr(&da[0, 0], &wx[0, 0], &dxbuf[0, 0], nb, ci, gsz, 0, 1, 0.0)
            _gemm_rr(&da[0, 0], &wh[0, 0], &dh_next[0, 0], nb, h_units, gsz,
                     0, 1, 0.0)
            for bi in range(nb):
                for i in range(ci):
                    xbuf[bi, i] = x[bi, t, i]
                    dx[bi, t, i] = dxbuf[bi, i]
                for j in range(gsz):
                    db[j] += da[bi, j]
            _gemm_rr(&xbuf[0, 0], &da[0, 0], &dwx[0, 0], ci, gsz, nb, 1, 0, 1.0)
            if t > 0:
                for bi in range(nb):
                    for u in range(h_units):
                        hbuf[bi, u] = h[bi, t - 1, u]
                _gemm_rr(&hbuf[0, 0], &da[0, 0], &dwh[0, 0], h_units, gsz, nb,
                         1, 0, 1.0)
    return dx_arr, dwx_arr, dwh_arr, db_arr
