"""Concrete manifolds with closed-form geometry.

* :class:`Euclidean` -- flat R^m, every formula is linear algebra.
* :class:`RosenbrockPlane` -- R^2 with metric ``G_x = [[1 + 4 x1^2, -2 x1], [-2 x1, 1]]``.
* :class:`LogOrthant` -- the open positive orthant with ``G(x) = diag(1 / x_i^2)``.

Each carries an isometry onto Euclidean space. Solvers never use it; it exists
so tests can check the intrinsic formulas against straight-line geometry.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels as K
from .core import DomainError, Manifold, _check_unit, as_vector


class Euclidean(Manifold):
    kind = "euclidean"
    separable = True

    def dist(self, x, y) -> float:
        return float(np.linalg.norm(self.check_point(x) - self.check_point(y)))

    def norm(self, x, v) -> float:
        return float(np.linalg.norm(self.check_tangent(v)))

    def exp(self, x, v):
        return self.check_point(x) + self.check_tangent(v)

    def log(self, x, y):
        return self.check_point(y) - self.check_point(x)

    def geodesic(self, x, y, t):
        t = _check_unit(t)
        x = self.check_point(x)
        return x + t * (self.check_point(y) - x)

    def reflect(self, center, x):
        return 2.0 * self.check_point(center) - self.check_point(x)

    def mean(self, points: Sequence):
        return np.mean([self.check_point(p) for p in points], axis=0)

    def to_euclidean(self, x):
        return self.check_point(x).copy()

    def from_euclidean(self, z):
        return self.check_point(z).copy()


class RosenbrockPlane(Manifold):
    """The plane whose metric turns the Rosenbrock valley into a straight line.

    ``phi(x) = (x1, x1^2 - x2)`` is an isometry from Euclidean R^2 onto this
    manifold and is its own inverse, so ``to_euclidean`` and ``from_euclidean``
    coincide.
    """

    kind = "rosenbrock-plane"

    def __init__(self, dim: int = 2):
        if dim != 2:
            raise ValueError("the Rosenbrock plane is two-dimensional")
        super().__init__(2)

    def __repr__(self):
        return "RosenbrockPlane()"

    def metric(self, x) -> np.ndarray:
        x1 = self.check_point(x)[0]
        return np.array([[1.0 + 4.0 * x1 * x1, -2.0 * x1], [-2.0 * x1, 1.0]])

    def dist(self, x, y) -> float:
        return K.rb_dist(self.check_point(x), self.check_point(y))

    def norm(self, x, v) -> float:
        return K.rb_norm(self.check_point(x), self.check_tangent(v))

    def exp(self, x, v):
        return K.rb_exp(self.check_point(x), self.check_tangent(v))

    def log(self, x, y):
        return K.rb_log(self.check_point(x), self.check_point(y))

    def geodesic(self, x, y, t):
        return K.rb_geodesic(self.check_point(x), self.check_point(y), _check_unit(t))

    def mean(self, points: Sequence):
        return self.from_euclidean(np.mean([self.to_euclidean(p) for p in points], axis=0))

    def to_euclidean(self, x):
        x = self.check_point(x)
        return np.array([x[0], x[0] * x[0] - x[1]])

    from_euclidean = to_euclidean


class LogOrthant(Manifold):
    """Positive orthant ``R^m_{++}`` with metric ``<u, v>_x = sum u_i v_i / x_i^2``.

    Flat: componentwise ``ln`` is an isometry onto R^m.
    """

    kind = "log-orthant"
    separable = True

    def check_point(self, x):
        x = super().check_point(x)
        if not np.all(x > 0.0):
            raise DomainError(f"log-orthant points need strictly positive coordinates, got {x}")
        return x

    def dist(self, x, y) -> float:
        return K.lo_dist(self.check_point(x), self.check_point(y))

    def norm(self, x, v) -> float:
        return K.lo_norm(self.check_point(x), self.check_tangent(v))

    def exp(self, x, v):
        return K.lo_exp(self.check_point(x), self.check_tangent(v))

    def log(self, x, y):
        return K.lo_log(self.check_point(x), self.check_point(y))

    def geodesic(self, x, y, t):
        return K.lo_geodesic(self.check_point(x), self.check_point(y), _check_unit(t))

    def mean(self, points: Sequence):
        return K.lo_mean(np.ascontiguousarray([self.check_point(p) for p in points]))

    def to_euclidean(self, x):
        return np.log(self.check_point(x))

    def from_euclidean(self, z):
        return np.exp(super().check_point(z))


class Isometry:
    """One direction of a manifold's Euclidean isometry, as a callable."""

    def __init__(self, manifold: Manifold, direction: str = "to_euclidean"):
        if direction not in ("to_euclidean", "from_euclidean"):
            raise ValueError(f"unknown direction {direction!r}")
        self.manifold = manifold
        self.direction = direction

    def __call__(self, x) -> np.ndarray:
        return getattr(self.manifold, self.direction)(x)

    def inverse(self) -> "Isometry":
        other = "from_euclidean" if self.direction == "to_euclidean" else "to_euclidean"
        return Isometry(self.manifold, other)


def isometry_apply(iso: Isometry, x) -> np.ndarray:
    return iso(x)


def make_manifold(kind: str, dim: int | None = None) -> Manifold:
    """Build a base manifold from its kind name."""
    if kind == "euclidean":
        return Euclidean(dim or 2)
    if kind == "rosenbrock-plane":
        return RosenbrockPlane()
    if kind == "log-orthant":
        if dim is None:
            raise ValueError("log-orthant needs a dimension")
        return LogOrthant(dim)
    raise ValueError(f"unknown manifold kind {kind!r}")


def rosenbrock_dist(x, y) -> float:
    return K.rb_dist(as_vector(x), as_vector(y))


def logorthant_dist(x, y) -> float:
    x, y = as_vector(x), as_vector(y)
    return LogOrthant(x.shape[0]).dist(x, y)
