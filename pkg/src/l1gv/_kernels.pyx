# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Same signatures and results as _fallback."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, int32_t

cnp.import_array()


def pair_histogram_coded(const int32_t[:, ::1] CU, const int64_t[::1] lu,
                         const int32_t[:, ::1] CV, const int64_t[::1] lv,
                         const int32_t[:, ::1] T,
                         Py_ssize_t nlu, Py_ssize_t nlv, Py_ssize_t smax):
    """hist[lu[i], lv[j], sum_c T[CU[c,i], CV[c,j]]] over all pairs (i, j).

    CU/CV hold chunk codes column-wise (chunk, vector); T is the chunk
    distance table. Distances above smax are dropped.
    """
    cdef Py_ssize_t C = CU.shape[0], n1 = CU.shape[1], n2 = CV.shape[1]
    if CV.shape[0] != C:
        raise ValueError("chunk count mismatch")
    cdef Py_ssize_t S = smax + 1
    out = np.zeros(nlu * nlv * S, dtype=np.int64)
    cdef int64_t[::1] hv = out
    cdef int64_t* h = &hv[0]
    dbuf = np.zeros(n2, dtype=np.int32)
    offs = np.ascontiguousarray(np.asarray(lv, dtype=np.int64) * S)
    cdef int32_t[::1] dv = dbuf
    cdef int64_t[::1] ov = offs
    cdef int32_t* d = &dv[0]
    cdef int64_t* off = &ov[0]
    cdef Py_ssize_t i, j, c
    cdef int64_t* hrow
    cdef const int32_t* row
    cdef const int32_t* col
    cdef int32_t dist
    for i in range(n1):
        row = &T[CU[0, i], 0]
        col = &CV[0, 0]
        for j in range(n2):
            d[j] = row[col[j]]
        for c in range(1, C):
            row = &T[CU[c, i], 0]
            col = &CV[c, 0]
            for j in range(n2):
                d[j] += row[col[j]]
        hrow = h + lu[i] * nlv * S
        for j in range(n2):
            dist = d[j]
            if dist <= smax:
                hrow[off[j] + dist] += 1
    return out.reshape(nlu, nlv, S)


def diag_accumulate(int64_t[:, :, :, ::1] Y, int64_t p):
    """In place: Y[a, b] += Y[a-1, b-1] (mod p), sweeping a upward."""
    cdef Py_ssize_t A = Y.shape[0], B = Y.shape[1], S = Y.shape[2], M = Y.shape[3]
    cdef Py_ssize_t a, b, s, m
    cdef int64_t t
    for a in range(1, A):
        for b in range(1, B):
            for s in range(S):
                for m in range(M):
                    t = Y[a, b, s, m] + Y[a - 1, b - 1, s, m]
                    Y[a, b, s, m] = t - p if t >= p else t


def shift_accumulate(const int64_t[:, :, :, ::1] X, int64_t p, int axis):
    """E[a,b,s] = sum_{j>=1} X[a-j, b, s-j] (axis 0) or X[a, b-j, s-j] (axis 1), mod p."""
    cdef Py_ssize_t A = X.shape[0], B = X.shape[1], S = X.shape[2], M = X.shape[3]
    out = np.zeros((A, B, S, M), dtype=np.int64)
    cdef int64_t[:, :, :, ::1] E = out
    cdef Py_ssize_t a, b, s, m
    cdef int64_t t
    if axis == 0:
        for a in range(1, A):
            for b in range(B):
                for s in range(1, S):
                    for m in range(M):
                        t = X[a - 1, b, s - 1, m] + E[a - 1, b, s - 1, m]
                        E[a, b, s, m] = t - p if t >= p else t
    elif axis == 1:
        for a in range(A):
            for b in range(1, B):
                for s in range(1, S):
                    for m in range(M):
                        t = X[a, b - 1, s - 1, m] + E[a, b - 1, s - 1, m]
                        E[a, b, s, m] = t - p if t >= p else t
    else:
        raise ValueError("axis must be 0 or 1")
    return out
