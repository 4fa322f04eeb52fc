# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled closed-form kernels; mirrors ``_kernels_py`` function for function."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, exp, pow

cnp.import_array()

BACKEND = "cython"


cdef inline cnp.ndarray _pair(double a, double b):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(2)
    out[0] = a
    out[1] = b
    return out


def rb_dist(const double[::1] x, const double[::1] y):
    cdef double d1 = x[0] - y[0]
    cdef double d2 = x[0] * x[0] - y[0] * y[0] - x[1] + y[1]
    return sqrt(d1 * d1 + d2 * d2)


def rb_norm(const double[::1] x, const double[::1] v):
    cdef double w = 2.0 * x[0] * v[0] - v[1]
    return sqrt(v[0] * v[0] + w * w)


def rb_exp(const double[::1] x, const double[::1] v):
    return _pair(x[0] + v[0], x[1] + v[1] + v[0] * v[0])


def rb_log(const double[::1] x, const double[::1] y):
    cdef double d1 = y[0] - x[0]
    return _pair(d1, y[1] - x[1] - d1 * d1)


def rb_geodesic(const double[::1] x, const double[::1] y, double t):
    cdef double d1 = y[0] - x[0]
    return _pair(x[0] + t * d1,
                 x[1] + t * ((y[1] - x[1]) - d1 * d1) + t * t * d1 * d1)


def rb_prox_phi(double a, double lam, const double[::1] x):
    return _pair(x[0], (x[1] + 2.0 * a * lam * x[0] * x[0]) / (1.0 + 2.0 * a * lam))


def rb_prox_psi(double b, double lam, const double[::1] x):
    cdef double s = 1.0 + 2.0 * lam
    cdef double u = x[0] + 2.0 * lam * b
    cdef double e = x[0] - b
    return _pair(u / s, x[1] - (4.0 * lam * u * e + 4.0 * lam * lam * e * e) / (s * s))


cdef inline void _reflect_phi(double a, double lam, double x0, double x1,
                              double* o0, double* o1) noexcept nogil:
    o0[0] = x0
    o1[0] = 2.0 * (x1 + 2.0 * a * lam * x0 * x0) / (1.0 + 2.0 * a * lam) - x1


cdef inline void _reflect_psi(double b, double lam, double x0, double x1,
                              double* o0, double* o1) noexcept nogil:
    cdef double s = 1.0 + 2.0 * lam
    o0[0] = ((1.0 - 2.0 * lam) * x0 + 4.0 * lam * b) / s
    o1[0] = x1 - 8.0 * lam * (x0 + 2.0 * lam * b) * (x0 - b) / (s * s)


def rb_reflect_phi(double a, double lam, const double[::1] x):
    cdef double o0, o1
    _reflect_phi(a, lam, x[0], x[1], &o0, &o1)
    return _pair(o0, o1)


def rb_reflect_psi(double b, double lam, const double[::1] x):
    cdef double o0, o1
    _reflect_psi(b, lam, x[0], x[1], &o0, &o1)
    return _pair(o0, o1)


def rb_dr_map(double a, double b, double lam, const double[::1] x):
    cdef double p0, p1, o0, o1
    _reflect_psi(b, lam, x[0], x[1], &p0, &p1)
    _reflect_phi(a, lam, p0, p1, &o0, &o1)
    return _pair(o0, o1)


def rb_dist_rows(const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t i, n = X.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    cdef double d1, d2
    with nogil:
        for i in range(n):
            d1 = X[i, 0] - Y[i, 0]
            d2 = X[i, 0] * X[i, 0] - Y[i, 0] * Y[i, 0] - X[i, 1] + Y[i, 1]
            o[i] = sqrt(d1 * d1 + d2 * d2)
    return out


def lo_dist(const double[::1] x, const double[::1] y):
    cdef Py_ssize_t i
    cdef double r, s = 0.0
    for i in range(x.shape[0]):
        r = log(x[i] / y[i])
        s += r * r
    return sqrt(s)


def lo_norm(const double[::1] x, const double[::1] v):
    cdef Py_ssize_t i
    cdef double r, s = 0.0
    for i in range(x.shape[0]):
        r = v[i] / x[i]
        s += r * r
    return sqrt(s)


def lo_exp(const double[::1] x, const double[::1] v):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = x[i] * exp(v[i] / x[i])
    return out


def lo_log(const double[::1] x, const double[::1] y):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = x[i] * log(y[i] / x[i])
    return out


def lo_geodesic(const double[::1] x, const double[::1] y, double t):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = pow(x[i], 1.0 - t) * pow(y[i], t)
    return out


def lo_mean(const double[:, ::1] X):
    """Columnwise geometric mean of the rows of ``X``."""
    cdef Py_ssize_t i, j, n = X.shape[0], m = X.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m)
    cdef double[::1] o = out
    for i in range(n):
        for j in range(m):
            o[j] += log(X[i, j])
    for j in range(m):
        o[j] = exp(o[j] / n)
    return out


def lo_dist_rows(const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t i, j, n = X.shape[0], m = X.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double[::1] o = out
    cdef double r, s
    with nogil:
        for i in range(n):
            s = 0.0
            for j in range(m):
                r = log(X[i, j] / Y[i, j])
                s += r * r
            o[i] = sqrt(s)
    return out
