# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled series kernels (float64 scalar series, complex128 circle series)."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline int _imax(int x, int y) nogil:
    return x if x > y else y


cdef inline int _imin(int x, int y) nogil:
    return x if x < y else y


def _mul_1d(const double[::1] a, const double[::1] b, int n):
    cdef int ra = a.shape[0], rb = b.shape[0]
    cdef int rows = _imax(0, _imin(n + 1, ra + rb - 1))
    out_arr = np.zeros(rows, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef int i, j
    cdef double s
    with nogil:
        for i in range(rows):
            s = 0.0
            for j in range(_imax(0, i - rb + 1), _imin(i, ra - 1) + 1):
                s = s + a[j] * b[i - j]
            out[i] = s
    return out_arr


def _mul_2d(const double[:, ::1] a, const double[:, ::1] b, int n):
    # complex arrays viewed as interleaved (re, im) float64 pairs
    cdef int ra = a.shape[0], rb = b.shape[0]
    cdef int ca = a.shape[1] // 2, cb = b.shape[1] // 2
    cdef int rows = _imax(0, _imin(n + 1, ra + rb - 1))
    out_arr = np.zeros((rows, ca + cb - 1), dtype=np.complex128)
    cdef double[:, ::1] out = out_arr.view(np.float64)
    cdef int i, j, l, p, q, o
    cdef double xr, xi, yr, yi
    with nogil:
        for i in range(rows):
            for j in range(_imax(0, i - rb + 1), _imin(i, ra - 1) + 1):
                l = i - j
                for p in range(ca):
                    xr = a[j, 2 * p]
                    xi = a[j, 2 * p + 1]
                    if xr == 0.0 and xi == 0.0:
                        continue
                    for q in range(cb):
                        yr = b[l, 2 * q]
                        yi = b[l, 2 * q + 1]
                        o = 2 * (p + q)
                        out[i, o] += xr * yr - xi * yi
                        out[i, o + 1] += xr * yi + xi * yr
    return out_arr


def _pow_1d(const double[::1] a, double alpha, int n):
    cdef int ra = a.shape[0]
    out_arr = np.zeros(n + 1, dtype=np.float64)
    cdef double[::1] w = out_arr
    cdef double s0 = a[0]
    cdef double acc
    cdef int m, j
    w[0] = s0 ** alpha
    with nogil:
        for m in range(1, n + 1):
            acc = 0.0
            for j in range(1, _imin(m, ra - 1) + 1):
                acc = acc + ((alpha + 1.0) * j - m) * a[j] * w[m - j]
            w[m] = acc / (m * s0)
    return out_arr


def _pow_2d(const double[:, ::1] a, double alpha, int n):
    cdef int ra = a.shape[0], ca = a.shape[1] // 2
    cdef int fa = (ca - 1) // 2
    cdef int width = 1 + n * (ca - 1)
    cdef int fw = (width - 1) // 2
    cdef double s0 = a[0, 2 * fa]
    out_arr = np.zeros((n + 1, width), dtype=np.complex128)
    cdef double[:, ::1] w = out_arr.view(np.float64)
    cdef int m, j, p, q, hw, lo, o, src
    cdef double factor, xr, xi, yr, yi
    w[0, 2 * fw] = s0 ** alpha
    with nogil:
        for m in range(1, n + 1):
            for j in range(1, _imin(m, ra - 1) + 1):
                # scalar factor first so that the leading cancellation is exact
                factor = ((alpha + 1.0) * j - m) / (m * s0)
                hw = (m - j) * fa
                lo = fw - hw
                for p in range(ca):
                    xr = a[j, 2 * p]
                    xi = a[j, 2 * p + 1]
                    if xr == 0.0 and xi == 0.0:
                        continue
                    xr = factor * xr
                    xi = factor * xi
                    for q in range(2 * hw + 1):
                        src = 2 * (lo + q)
                        yr = w[m - j, src]
                        yi = w[m - j, src + 1]
                        o = 2 * (lo + p - fa + q)
                        w[m, o] += xr * yr - xi * yi
                        w[m, o + 1] += xr * yi + xi * yr
    return out_arr


def mul_series(a, b, int n):
    if a.ndim == 1:
        return _mul_1d(np.ascontiguousarray(a, dtype=np.float64),
                       np.ascontiguousarray(b, dtype=np.float64), n)
    return _mul_2d(np.ascontiguousarray(a, dtype=np.complex128).view(np.float64),
                   np.ascontiguousarray(b, dtype=np.complex128).view(np.float64), n)


def pow_series(a, double alpha, int n):
    if a.ndim == 1:
        return _pow_1d(np.ascontiguousarray(a, dtype=np.float64), alpha, n)
    return _pow_2d(np.ascontiguousarray(a, dtype=np.complex128).view(np.float64), alpha, n)
