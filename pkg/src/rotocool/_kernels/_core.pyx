# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: spherical Bessel vectors and rate integrands.

Mirrors _fallback.py; both implement identical algorithms.
"""
from libc.math cimport sqrt, expm1, ceil, fabs
from libc.stdlib cimport malloc, free

import numpy as np

BACKEND_NAME = "compiled"

cdef double _BIG = 1e140
cdef double _BIG_INV = 1e-140


cdef int _bessel_fill(double* out, int lmax, double x) except -1:
    """Fill out[0..lmax] with j_lam(x); same recurrence as the fallback."""
    cdef int nu, top, nstart, i
    cdef double fp, fc, fm, acc, inv_x, scale
    for i in range(lmax + 1):
        out[i] = 0.0
    if x == 0.0:
        out[0] = 1.0
        return 0
    if x < 1e-6:
        # multiplicative recurrence for x^lam/(2lam+1)!!: same float ops
        # as the fallback, so the backends match bitwise
        out[0] = 1.0 - x * x / 6.0
        fc = 1.0
        for i in range(1, lmax + 1):
            fc *= x / (2.0 * i + 1.0)
            out[i] = fc
        return 0
    top = lmax
    if <int>ceil(x) > top:
        top = <int>ceil(x)
    nstart = top + 40 + <int>(2.0 * sqrt(<double>top))
    fp = 0.0
    fc = 1e-30
    acc = 0.0
    inv_x = 1.0 / x
    for nu in range(nstart, -1, -1):
        if nu <= lmax:
            out[nu] = fc
        acc += (2.0 * nu + 1.0) * fc * fc
        fm = (2.0 * nu + 1.0) * inv_x * fc - fp
        fp = fc
        fc = fm
        if fabs(fc) > _BIG:
            fc *= _BIG_INV
            fp *= _BIG_INV
            acc *= _BIG_INV * _BIG_INV
            i = nu
            if i < 0:
                i = 0
            while i <= lmax:
                out[i] *= _BIG_INV
                i += 1
    scale = 1.0 / sqrt(acc)
    for i in range(lmax + 1):
        out[i] *= scale
    return 0


def bessel_j_vec(int lmax, double x):
    """Spherical Bessel functions j_0(x)..j_lmax(x) as an array."""
    if lmax < 0:
        raise ValueError("lmax must be nonnegative")
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    out = np.empty(lmax + 1)
    cdef double[::1] mv = out
    _bessel_fill(&mv[0], lmax, x)
    return out


cdef inline double _occupation(double omega, double temperature) nogil:
    cdef double xx
    if temperature <= 0.0 or omega <= 0.0:
        return 0.0
    xx = omega / temperature
    if xx > 700.0:
        return 0.0
    return 1.0 / expm1(xx)


cdef inline double _inverse_dispersion(double omega) nogil:
    cdef double s = sqrt(1.0 + 2.0 * omega * omega)
    return omega * sqrt(2.0 / (s + 1.0))


cdef inline double _w_factor(double k) nogil:
    return sqrt(sqrt(k * k / (2.0 + k * k)))


cdef double _bilinear(double* b1, double* b2, const double[:, ::1] A, int n):
    cdef int i, j
    cdef double total = 0.0, row
    for i in range(n):
        if b1[i] == 0.0:
            continue
        row = 0.0
        for j in range(n):
            row += A[i, j] * b2[j]
        total += b1[i] * row
    return total


def cross_integrand(double eta, double E, double T, double r0,
                    double up, double down, const double[:, ::1] A):
    """Scattering-channel integrand; see the fallback twin for details."""
    cdef int lmax = A.shape[0] - 1
    cdef int n = lmax + 1
    cdef double w1, w2, k1, k2, f1, f2, ww, wx, occ, val
    cdef double* b1
    cdef double* b2
    cdef int i
    w1 = eta * E
    w2 = (1.0 + eta) * E
    k1 = _inverse_dispersion(w1)
    k2 = _inverse_dispersion(w2)
    f1 = eta * k1 / sqrt(1.0 + 2.0 * w1 * w1)
    f2 = (1.0 + eta) * k2 / sqrt(1.0 + 2.0 * w2 * w2)
    ww = _w_factor(k1) * _w_factor(k2)
    wx = ww + 1.0 / ww
    occ = (_occupation(w1, T) + up) * (_occupation(w2, T) + down)
    if occ == 0.0:
        return 0.0
    b1 = <double*> malloc(2 * n * sizeof(double))
    if b1 == NULL:
        raise MemoryError()
    b2 = b1 + n
    try:
        _bessel_fill(b1, lmax, r0 * k1)
        _bessel_fill(b2, lmax, r0 * k2)
        for i in range(n):
            b1[i] *= b1[i]
            b2[i] *= b2[i]
        val = _bilinear(b1, b2, A, n)
    finally:
        free(b1)
    return f1 * f2 * wx * wx * occ * val


def prec_integrand(double eta, double E, double T, double r0,
                   double th, const double[:, ::1] A):
    """Pair-channel integrand; see the fallback twin for details."""
    cdef int lmax = A.shape[0] - 1
    cdef int n = lmax + 1
    cdef double w1, w2, k1, k2, f1, f2, ww, wp, occ, val
    cdef double* b1
    cdef double* b2
    cdef int i
    w1 = eta * E
    w2 = (1.0 - eta) * E
    k1 = _inverse_dispersion(w1)
    k2 = _inverse_dispersion(w2)
    f1 = eta * k1 / sqrt(1.0 + 2.0 * w1 * w1)
    f2 = (1.0 - eta) * k2 / sqrt(1.0 + 2.0 * w2 * w2)
    ww = _w_factor(k1) * _w_factor(k2)
    wp = ww - 1.0 / ww
    occ = (_occupation(w1, T) + th) * (_occupation(w2, T) + th)
    if occ == 0.0:
        return 0.0
    b1 = <double*> malloc(2 * n * sizeof(double))
    if b1 == NULL:
        raise MemoryError()
    b2 = b1 + n
    try:
        _bessel_fill(b1, lmax, r0 * k1)
        _bessel_fill(b2, lmax, r0 * k2)
        for i in range(n):
            b1[i] *= b1[i]
            b2[i] *= b2[i]
        val = _bilinear(b1, b2, A, n)
    finally:
        free(b1)
    return f1 * f2 * wp * wp * occ * val
