# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend: chained small complex matrix products.

Contract matches `_kernels_py`. Index arrays are 0-based int64 of shape
(m, k); the generator grid u is a C-contiguous (n, n, d, d) complex array.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef inline void _matmul(const double complex* a, const double complex* b,
                         double complex* out, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j, l
    cdef double complex s
    for i in range(d):
        for j in range(d):
            s = 0
            for l in range(d):
                s = s + a[i * d + l] * b[l * d + j]
            out[i * d + j] = s


cdef inline void _chain(const double complex[:, :, :, ::1] u,
                        const double complex[:, ::1] P,
                        const long long* rows, const long long* cols,
                        Py_ssize_t k, Py_ssize_t d,
                        double complex* buf_a, double complex* buf_b) noexcept nogil:
    # Result lands in buf_a.
    cdef Py_ssize_t i, j, t
    cdef double complex* cur = buf_a
    cdef double complex* nxt = buf_b
    cdef double complex* tmp
    for i in range(d):
        for j in range(d):
            cur[i * d + j] = P[i, j]
    for t in range(k):
        _matmul(cur, &u[rows[t], cols[t], 0, 0], nxt, d)
        tmp = cur
        cur = nxt
        nxt = tmp
    _matmul(cur, &P[0, 0], nxt, d)
    if nxt != buf_a:
        for i in range(d * d):
            buf_a[i] = nxt[i]


def chain_product(u, P, rows, cols):
    """P @ u[rows[0], cols[0]] @ ... @ P for a single index chain."""
    cdef double complex[:, :, :, ::1] u_v = np.ascontiguousarray(u, dtype=complex)
    cdef double complex[:, ::1] P_v = np.ascontiguousarray(P, dtype=complex)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] r = np.ascontiguousarray(rows, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] c = np.ascontiguousarray(cols, dtype=np.int64)
    cdef Py_ssize_t d = P_v.shape[0]
    cdef Py_ssize_t k = r.shape[0]
    out = np.empty((d, d), dtype=complex)
    scratch = np.empty((d, d), dtype=complex)
    cdef double complex[:, ::1] out_v = out
    cdef double complex[:, ::1] scr_v = scratch
    if k == 0:
        _matmul(&P_v[0, 0], &P_v[0, 0], &out_v[0, 0], d)
        return out
    _chain(u_v, P_v, <long long*> r.data, <long long*> c.data, k, d,
           &out_v[0, 0], &scr_v[0, 0])
    return out


def chain_maxabs_batch(u, P, rows, cols):
    """Max-abs entry of every chained product in the batch; shape (m,)."""
    cdef double complex[:, :, :, ::1] u_v = np.ascontiguousarray(u, dtype=complex)
    cdef double complex[:, ::1] P_v = np.ascontiguousarray(P, dtype=complex)
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] r = np.ascontiguousarray(rows, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] c = np.ascontiguousarray(cols, dtype=np.int64)
    cdef Py_ssize_t m = r.shape[0]
    cdef Py_ssize_t k = r.shape[1]
    cdef Py_ssize_t d = P_v.shape[0]
    out = np.empty(m, dtype=float)
    cdef double[::1] out_v = out
    buf_a = np.empty(d * d, dtype=complex)
    buf_b = np.empty(d * d, dtype=complex)
    cdef double complex[::1] a_v = buf_a
    cdef double complex[::1] b_v = buf_b
    cdef Py_ssize_t t, i
    cdef double best, cur
    with nogil:
        for t in range(m):
            _chain(u_v, P_v, <long long*> (r.data + t * k * sizeof(long long)),
                   <long long*> (c.data + t * k * sizeof(long long)),
                   k, d, &a_v[0], &b_v[0])
            best = 0
            for i in range(d * d):
                cur = abs(a_v[i])
                if cur > best:
                    best = cur
            out_v[t] = best
    return out


def weighted_chain_sum(u, P, rows, cols, weights):
    """Sum over the batch of weights[t] * (P @ u[...] ... @ P)."""
    cdef double complex[:, :, :, ::1] u_v = np.ascontiguousarray(u, dtype=complex)
    cdef double complex[:, ::1] P_v = np.ascontiguousarray(P, dtype=complex)
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] r = np.ascontiguousarray(rows, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] c = np.ascontiguousarray(cols, dtype=np.int64)
    cdef double complex[::1] w_v = np.ascontiguousarray(weights, dtype=complex)
    cdef Py_ssize_t m = r.shape[0]
    cdef Py_ssize_t k = r.shape[1]
    cdef Py_ssize_t d = P_v.shape[0]
    total = np.zeros((d, d), dtype=complex)
    cdef double complex[:, ::1] tot_v = total
    buf_a = np.empty(d * d, dtype=complex)
    buf_b = np.empty(d * d, dtype=complex)
    cdef double complex[::1] a_v = buf_a
    cdef double complex[::1] b_v = buf_b
    cdef Py_ssize_t t, i, j
    with nogil:
        for t in range(m):
            _chain(u_v, P_v, <long long*> (r.data + t * k * sizeof(long long)),
                   <long long*> (c.data + t * k * sizeof(long long)),
                   k, d, &a_v[0], &b_v[0])
            for i in range(d):
                for j in range(d):
                    tot_v[i, j] = tot_v[i, j] + w_v[t] * a_v[i * d + j]
    return total
