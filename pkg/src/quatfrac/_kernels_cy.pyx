# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot-path kernels: Cauchy-kernel evaluation and fused
weighted accumulation over quadrature nodes.

Semantics match quatfrac._kernels_np; reductions here are sequential with
Kahan compensation, so each lane is bit-deterministic on its own.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double TWO_PI_SQ = 2.0 * 3.14159265358979323846 * 3.14159265358979323846


cdef inline void _kernel_at(const double* u, const double[:, ::1] mbar,
                            double* out) noexcept nogil:
    cdef double r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]
    cdef double scale = 1.0 / (TWO_PI_SQ * r2 * r2)
    cdef int j
    for j in range(4):
        out[j] = (u[0] * mbar[0, j] + u[1] * mbar[1, j]
                  + u[2] * mbar[2, j] + u[3] * mbar[3, j]) * scale


cdef inline void _dkernel_at(const double* u, int axis, const double[:, ::1] mbar,
                             double* out) noexcept nogil:
    cdef double r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]
    cdef double r6 = r2 * r2 * r2
    cdef double ua = u[axis]
    cdef double num
    cdef int j
    for j in range(4):
        num = mbar[axis, j] * r2 - 4.0 * ua * (u[0] * mbar[0, j] + u[1] * mbar[1, j]
                                               + u[2] * mbar[2, j] + u[3] * mbar[3, j])
        out[j] = num / (TWO_PI_SQ * r6)


cdef inline void _qmul(const double complex* a, const double complex* b,
                       double complex* out) noexcept nogil:
    out[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    out[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    out[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    out[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]


def cauchy_batch(const double[:, ::1] u, const double[:, ::1] mbar):
    cdef Py_ssize_t n = u.shape[0], i
    out_arr = np.empty((n, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double tmp[4]
    with nogil:
        for i in range(n):
            _kernel_at(&u[i, 0], mbar, tmp)
            out[i, 0] = tmp[0]
            out[i, 1] = tmp[1]
            out[i, 2] = tmp[2]
            out[i, 3] = tmp[3]
    return out_arr


def cauchy_dbatch(const double[:, ::1] u, int axis, const double[:, ::1] mbar):
    cdef Py_ssize_t n = u.shape[0], i
    out_arr = np.empty((n, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double tmp[4]
    with nogil:
        for i in range(n):
            _dkernel_at(&u[i, 0], axis, mbar, tmp)
            out[i, 0] = tmp[0]
            out[i, 1] = tmp[1]
            out[i, 2] = tmp[2]
            out[i, 3] = tmp[3]
    return out_arr


def accumulate_kernel_left(const double[:, ::1] u, const double[::1] w,
                           const double complex[:, ::1] fvals, const double[:, ::1] mbar):
    cdef Py_ssize_t n = u.shape[0], i
    cdef double kv[4]
    cdef double complex kq[4]
    cdef double complex prod[4]
    cdef double complex acc[4]
    cdef double complex comp[4]
    cdef double complex yv, tv
    cdef int j
    for j in range(4):
        acc[j] = 0
        comp[j] = 0
    with nogil:
        for i in range(n):
            _kernel_at(&u[i, 0], mbar, kv)
            for j in range(4):
                kq[j] = kv[j]
            _qmul(kq, &fvals[i, 0], prod)
            for j in range(4):
                yv = w[i] * prod[j] - comp[j]
                tv = acc[j] + yv
                comp[j] = (tv - acc[j]) - yv
                acc[j] = tv
    return np.array([acc[0], acc[1], acc[2], acc[3]])


def accumulate_kernel_right(const double[:, ::1] u, const double[::1] w,
                            const double complex[:, ::1] gvals, const double[:, ::1] mbar):
    cdef Py_ssize_t n = u.shape[0], i
    cdef double kv[4]
    cdef double complex kq[4]
    cdef double complex prod[4]
    cdef double complex acc[4]
    cdef double complex comp[4]
    cdef double complex yv, tv
    cdef int j
    for j in range(4):
        acc[j] = 0
        comp[j] = 0
    with nogil:
        for i in range(n):
            _kernel_at(&u[i, 0], mbar, kv)
            for j in range(4):
                kq[j] = kv[j]
            _qmul(&gvals[i, 0], kq, prod)
            for j in range(4):
                yv = w[i] * prod[j] - comp[j]
                tv = acc[j] + yv
                comp[j] = (tv - acc[j]) - yv
                acc[j] = tv
    return np.array([acc[0], acc[1], acc[2], acc[3]])


def frak_kernel_batch(const double[:, ::1] y, const double[:, ::1] pts, const long[::1] axes,
                      const double complex[::1] coeffs, const double[:, ::1] mbar):
    cdef Py_ssize_t n = y.shape[0], np_ = pts.shape[0], i, p
    out_arr = np.zeros((n, 4), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double u[4]
    cdef double kv[4]
    cdef int j
    with nogil:
        for i in range(n):
            for p in range(np_):
                for j in range(4):
                    u[j] = y[i, j] - pts[p, j]
                if axes[p] < 0:
                    _kernel_at(u, mbar, kv)
                else:
                    _dkernel_at(u, <int> axes[p], mbar, kv)
                for j in range(4):
                    out[i, j] = out[i, j] + coeffs[p] * kv[j]
    return out_arr
