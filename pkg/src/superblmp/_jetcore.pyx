# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for truncated trivariate Taylor coefficient arrays.

All arrays are C-contiguous ``complex128`` of shape ``(nx, ny, nt)``.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef void _mul(const double complex[:, :, ::1] a, const double complex[:, :, ::1] b,
               double complex[:, :, ::1] c) noexcept nogil:
    cdef Py_ssize_t nx = a.shape[0], ny = a.shape[1], nt = a.shape[2]
    cdef Py_ssize_t i, j, k, p, q, r
    cdef double complex s
    for i in range(nx):
        for j in range(ny):
            for k in range(nt):
                s = 0
                for p in range(i + 1):
                    for q in range(j + 1):
                        for r in range(k + 1):
                            s = s + a[p, q, r] * b[i - p, j - q, k - r]
                c[i, j, k] = s


def mul(a, b):
    cdef const double complex[:, :, ::1] av = a
    cdef const double complex[:, :, ::1] bv = b
    out = np.empty_like(a)
    cdef double complex[:, :, ::1] cv = out
    _mul(av, bv, cv)
    return out


def div(a, b):
    cdef const double complex[:, :, ::1] av = a
    cdef const double complex[:, :, ::1] bv = b
    out = np.zeros_like(a)
    cdef double complex[:, :, ::1] cv = out
    cdef Py_ssize_t nx = av.shape[0], ny = av.shape[1], nt = av.shape[2]
    cdef Py_ssize_t i, j, k, p, q, r
    cdef double complex s
    cdef double complex b0 = bv[0, 0, 0]
    with nogil:
        # lexicographic order: every c[i-p, j-q, k-r] with (p,q,r) != 0 is final
        for i in range(nx):
            for j in range(ny):
                for k in range(nt):
                    s = av[i, j, k]
                    for p in range(i + 1):
                        for q in range(j + 1):
                            for r in range(k + 1):
                                if p == 0 and q == 0 and r == 0:
                                    continue
                                s = s - bv[p, q, r] * cv[i - p, j - q, k - r]
                    cv[i, j, k] = s / b0
    return out


def horner(coefs, h):
    """Evaluate ``sum_k coefs[k] * h**k`` in the truncated ring."""
    cdef const double complex[::1] cf = np.ascontiguousarray(coefs, dtype=np.complex128)
    cdef const double complex[:, :, ::1] hv = h
    acc = np.zeros_like(h)
    tmp = np.empty_like(h)
    cdef double complex[:, :, ::1] av = acc
    cdef double complex[:, :, ::1] tv = tmp
    cdef Py_ssize_t n = cf.shape[0], m
    if n == 0:
        return acc
    with nogil:
        av[0, 0, 0] = cf[n - 1]
        for m in range(n - 2, -1, -1):
            _mul(av, hv, tv)
            tv[0, 0, 0] = tv[0, 0, 0] + cf[m]
            av[:, :, :] = tv
    return acc
