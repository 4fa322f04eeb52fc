"""Pure-Python closed-form kernels.

Reference implementation of every routine in ``_kernels.pyx``. All inputs are
contiguous float64 arrays; every function returns fresh arrays.
"""

import math

import numpy as np

BACKEND = "python"


# Rosenbrock metric plane -----------------------------------------------------

def rb_dist(x, y):
    d1 = x[0] - y[0]
    d2 = x[0] * x[0] - y[0] * y[0] - x[1] + y[1]
    return math.sqrt(d1 * d1 + d2 * d2)


def rb_norm(x, v):
    w = 2.0 * x[0] * v[0] - v[1]
    return math.sqrt(v[0] * v[0] + w * w)


def rb_exp(x, v):
    return np.array([x[0] + v[0], x[1] + v[1] + v[0] * v[0]])


def rb_log(x, y):
    d1 = y[0] - x[0]
    return np.array([d1, y[1] - x[1] - d1 * d1])


def rb_geodesic(x, y, t):
    d1 = y[0] - x[0]
    return np.array([
        x[0] + t * d1,
        x[1] + t * ((y[1] - x[1]) - d1 * d1) + t * t * d1 * d1,
    ])


def rb_prox_phi(a, lam, x):
    return np.array([x[0], (x[1] + 2.0 * a * lam * x[0] * x[0]) / (1.0 + 2.0 * a * lam)])


def rb_prox_psi(b, lam, x):
    s = 1.0 + 2.0 * lam
    u = x[0] + 2.0 * lam * b
    e = x[0] - b
    return np.array([u / s, x[1] - (4.0 * lam * u * e + 4.0 * lam * lam * e * e) / (s * s)])


def rb_reflect_phi(a, lam, x):
    return np.array([
        x[0],
        2.0 * (x[1] + 2.0 * a * lam * x[0] * x[0]) / (1.0 + 2.0 * a * lam) - x[1],
    ])


def rb_reflect_psi(b, lam, x):
    s = 1.0 + 2.0 * lam
    return np.array([
        ((1.0 - 2.0 * lam) * x[0] + 4.0 * lam * b) / s,
        x[1] - 8.0 * lam * (x[0] + 2.0 * lam * b) * (x[0] - b) / (s * s),
    ])


def rb_dr_map(a, b, lam, x):
    return rb_reflect_phi(a, lam, rb_reflect_psi(b, lam, x))


def rb_dist_rows(X, Y):
    d1 = X[:, 0] - Y[:, 0]
    d2 = X[:, 0] ** 2 - Y[:, 0] ** 2 - X[:, 1] + Y[:, 1]
    return np.sqrt(d1 * d1 + d2 * d2)


# Positive orthant with the log metric ------------------------------------------

def lo_dist(x, y):
    s = 0.0
    for xi, yi in zip(x, y):
        r = math.log(xi / yi)
        s += r * r
    return math.sqrt(s)


def lo_norm(x, v):
    s = 0.0
    for xi, vi in zip(x, v):
        r = vi / xi
        s += r * r
    return math.sqrt(s)


def lo_exp(x, v):
    return x * np.exp(v / x)


def lo_log(x, y):
    return x * np.log(y / x)


def lo_geodesic(x, y, t):
    return x ** (1.0 - t) * y ** t


def lo_mean(X):
    """Columnwise geometric mean of the rows of ``X``."""
    return np.exp(np.log(X).mean(axis=0))


def lo_dist_rows(X, Y):
    return np.sqrt((np.log(X / Y) ** 2).sum(axis=1))
