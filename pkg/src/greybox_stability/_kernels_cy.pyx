# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-frequency inner loops (see _kernels_py for the reference API)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, fabs, hypot, sin, sqrt

cnp.import_array()

ctypedef double complex dcomplex


cdef inline dcomplex csqrt_(dcomplex z) noexcept:
    cdef double r = hypot(z.real, z.imag)
    cdef double half_angle = 0.5 * atan2(z.imag, z.real)
    cdef double m = sqrt(r)
    return m * cos(half_angle) + 1j * m * sin(half_angle)


cdef inline double cabs_(dcomplex z) noexcept:
    return hypot(z.real, z.imag)


def polyval_many(dcomplex[::1] coeffs, dcomplex[::1] s):
    """Horner evaluation of an ascending-coefficient polynomial over `s`."""
    cdef Py_ssize_t n = s.shape[0]
    cdef Py_ssize_t m = coeffs.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef dcomplex[::1] o = out
    cdef Py_ssize_t i, k
    cdef dcomplex acc, sv
    for i in range(n):
        sv = s[i]
        acc = 0
        for k in range(m - 1, -1, -1):
            acc = acc * sv + coeffs[k]
        o[i] = acc
    return out


def det_return_difference(dcomplex[:, :, ::1] g):
    """det(I + G) for a stack of 2x2 return-ratio samples, expanded directly."""
    cdef Py_ssize_t n = g.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef dcomplex[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = (1.0 + g[i, 0, 0]) * (1.0 + g[i, 1, 1]) - g[i, 0, 1] * g[i, 1, 0]
    return out


def eigvals_2x2_paired(dcomplex[:, :, ::1] g):
    """Eigenvalues of stacked 2x2 matrices, continuity-paired across the stack."""
    cdef Py_ssize_t n = g.shape[0]
    out = np.empty((n, 2), dtype=np.complex128)
    cdef dcomplex[:, ::1] o = out
    cdef Py_ssize_t i
    cdef dcomplex tr, det, disc, la, lb, p0, p1
    for i in range(n):
        tr = g[i, 0, 0] + g[i, 1, 1]
        det = g[i, 0, 0] * g[i, 1, 1] - g[i, 0, 1] * g[i, 1, 0]
        disc = csqrt_(tr * tr - 4.0 * det)
        la = 0.5 * (tr + disc)
        lb = 0.5 * (tr - disc)
        if i > 0:
            p0 = o[i - 1, 0]
            p1 = o[i - 1, 1]
            if cabs_(lb - p0) + cabs_(la - p1) < cabs_(la - p0) + cabs_(lb - p1):
                la, lb = lb, la
        o[i, 0] = la
        o[i, 1] = lb
    return out


def wrapped_angle_sum(dcomplex[::1] z, bint close=True):
    """Accumulated wrapped angle increments along a complex path.

    Returns (total_angle, max_abs_step); with close=True the closing increment
    from the last point back to the first is included.
    """
    cdef Py_ssize_t n = z.shape[0]
    if n < 2:
        return 0.0, 0.0
    cdef double total = 0.0
    cdef double max_step = 0.0
    cdef double step
    cdef dcomplex prod
    cdef Py_ssize_t i
    for i in range(1, n):
        prod = z[i] * z[i - 1].conjugate()
        step = atan2(prod.imag, prod.real)
        total += step
        if fabs(step) > max_step:
            max_step = fabs(step)
    if close:
        prod = z[0] * z[n - 1].conjugate()
        step = atan2(prod.imag, prod.real)
        total += step
        if fabs(step) > max_step:
            max_step = fabs(step)
    return total, max_step
