# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled box-bound kernel; same arithmetic as ``_kernel_py``."""

import numpy as np
from libc.math cimport log, sqrt, exp, INFINITY

cdef double INV_E = exp(-1.0)


cdef inline double lg(double x) nogil:
    if x <= 0.0:
        return 0.0
    return x * log(x)


cdef inline double f0_ratio(double x, double b1) nogil:
    return 2.0 * lg(x + b1) - lg(x) - 2.0 * lg(b1)


cdef inline double factor_expr(double z, double a_i, double b_i, double b_n) nogil:
    return (lg(b_i) + lg(b_n) + lg(b_i + b_n - z)
            - lg(z) - 2.0 * lg(b_i - z) - lg(b_n - a_i + z) - lg(b_n - z))


cdef double f0(double a0, double b0, double b1) nogil:
    cdef double best = f0_ratio(a0, b1)
    cdef double v = f0_ratio(b0, b1)
    cdef double p, disc, r, x
    if v > best:
        best = v
    p = 2.0 * b1 - INV_E
    disc = p * p - 4.0 * b1 * b1
    if disc >= 0:
        r = sqrt(disc)
        x = (-p - r) / 2.0
        if a0 < x < b0:
            v = f0_ratio(x, b1)
            if v > best:
                best = v
        x = (-p + r) / 2.0
        if a0 < x < b0:
            v = f0_ratio(x, b1)
            if v > best:
                best = v
    return best


cdef double factor(double a_i, double b_i, double b_n, int *bad) nogil:
    cdef double lo = a_i - b_n
    cdef double hi = b_i if b_i < b_n else b_n
    cdef double A, B, C, disc, z, best, v
    if lo < 0.0:
        lo = 0.0
    if lo > hi:
        return -INFINITY
    A = b_n + b_i - a_i
    B = b_n * a_i + b_i * a_i - 3.0 * b_n * b_i - b_i * b_i - b_n * b_n
    C = b_i * b_i * b_n
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        bad[0] = 1
        disc = 0.0
    z = 2.0 * C / (-B + sqrt(disc))
    if z < lo:
        z = lo
    if z > hi:
        z = hi
    best = factor_expr(z, a_i, b_i, b_n)
    v = factor_expr(lo, a_i, b_i, b_n)
    if v > best:
        best = v
    v = factor_expr(hi, a_i, b_i, b_n)
    if v > best:
        best = v
    return best


def box_bounds(a, b):
    """Log box bound for each row of ``a`` and ``b`` (shape ``(N, 7)``)."""
    cdef double[:, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], r
    cdef int i, j, bad
    cdef double total
    out = np.empty(n, dtype=np.float64)
    flags = np.zeros(n, dtype=np.int32)
    cdef double[::1] ov = out
    cdef int[::1] fv = flags
    with nogil:
        for r in range(n):
            bad = 0
            total = f0(av[r, 0], bv[r, 0], bv[r, 1])
            for i in range(1, 7):
                j = (i + 1) % 7
                total = total + factor(av[r, i], bv[r, i], bv[r, j], &bad)
            ov[r] = total
            fv[r] = bad
    return out, flags
