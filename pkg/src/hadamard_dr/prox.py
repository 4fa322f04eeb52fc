"""Proximal maps, projections and reflections.

Every operator is an immutable callable ``P(x) -> point``. Its reflection is
``R(x) = exp_{P(x)}(-log_{P(x)} x)``; operators with a closed-form reflection
override :meth:`ProxOperator.reflect`.
"""

from __future__ import annotations

import warnings
from typing import Sequence

import numpy as np

from . import kernels as K
from .core import DimensionError, Manifold, ProductManifold, as_vector
from .manifolds import RosenbrockPlane


def prox_dist_point(M: Manifold, c, lam: float, x) -> np.ndarray:
    """Prox of ``lam * d(., c)``: move from ``x`` toward ``c`` by at most ``lam``."""
    if lam <= 0:
        raise ValueError(f"step size must be positive, got {lam}")
    c = M.check_point(c)
    d = M.dist(x, c)
    if d <= lam:
        return c.copy()
    return M.geodesic(x, c, lam / d)


def project_ball(M: Manifold, c, r: float, x) -> np.ndarray:
    """Metric projection onto the closed geodesic ball ``B_r[c]``."""
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    x = M.check_point(x)
    d = M.dist(c, x)
    if d <= r:
        return x.copy()
    return M.geodesic(c, x, r / d)


def prox_dist_ball(M: Manifold, c, r: float, lam: float, x) -> np.ndarray:
    """Prox of ``lam * d(., B_r[c])``."""
    if lam <= 0:
        raise ValueError(f"step size must be positive, got {lam}")
    p = project_ball(M, c, r, x)
    d = M.dist(x, p)
    if d <= lam:
        return p
    return M.geodesic(x, p, lam / d)


def diagonal_prox(PM: ProductManifold, x) -> np.ndarray:
    """Projection onto the diagonal of ``PM``: every slot becomes the mean of all slots."""
    if PM.base is None:
        raise ValueError("the diagonal is only defined on a power of one manifold")
    m = PM.base.mean(PM.split(x))
    return np.tile(m, PM.count)


def reflect(M: Manifold, P, x) -> np.ndarray:
    """Generic reflection of ``x`` through ``P(x)``."""
    x = M.check_point(x)
    p = P(x)
    return M.reflect(p, x)


def rosenbrock_prox_phi(a: float, lam: float, x) -> np.ndarray:
    return K.rb_prox_phi(float(a), float(lam), as_vector(x))


def rosenbrock_prox_psi(b: float, lam: float, x) -> np.ndarray:
    return K.rb_prox_psi(float(b), float(lam), as_vector(x))


def rosenbrock_reflect_phi(a: float, lam: float, x) -> np.ndarray:
    return K.rb_reflect_phi(float(a), float(lam), as_vector(x))


def rosenbrock_reflect_psi(b: float, lam: float, x) -> np.ndarray:
    return K.rb_reflect_psi(float(b), float(lam), as_vector(x))


class ProxOperator:
    """Base class: a point-to-point map on ``manifold`` with step size ``lam``."""

    kind = "abstract"

    def __init__(self, manifold: Manifold, lam: float = 1.0):
        if not lam > 0:
            raise ValueError(f"step size must be positive, got {lam}")
        self.manifold = manifold
        self.lam = float(lam)

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def reflect(self, x) -> np.ndarray:
        return reflect(self.manifold, self, x)

    def value(self, x) -> float:
        """The function whose prox this is, evaluated at ``x``."""
        raise NotImplementedError


class Identity(ProxOperator):
    kind = "identity"

    def __call__(self, x):
        return self.manifold.check_point(x).copy()

    def reflect(self, x):
        return self.manifold.check_point(x).copy()

    def value(self, x):
        return 0.0


class DistToPoint(ProxOperator):
    kind = "dist_to_point"

    def __init__(self, manifold, c, lam=1.0):
        super().__init__(manifold, lam)
        self.c = manifold.check_point(c).copy()

    def __call__(self, x):
        return prox_dist_point(self.manifold, self.c, self.lam, x)

    def value(self, x):
        return self.manifold.dist(x, self.c)


class DistToBall(ProxOperator):
    kind = "dist_to_ball"

    def __init__(self, manifold, c, r, lam=1.0):
        super().__init__(manifold, lam)
        self.c = manifold.check_point(c).copy()
        self.r = float(r)

    def __call__(self, x):
        return prox_dist_ball(self.manifold, self.c, self.r, self.lam, x)

    def value(self, x):
        return max(0.0, self.manifold.dist(x, self.c) - self.r)


class BallIndicator(ProxOperator):
    """Indicator of ``B_r[c]``; its prox is the projection, whatever ``lam``."""

    kind = "indicator_ball"

    def __init__(self, manifold, c, r, lam=1.0):
        super().__init__(manifold, lam)
        self.c = manifold.check_point(c).copy()
        self.r = float(r)

    def __call__(self, x):
        return project_ball(self.manifold, self.c, self.r, x)

    def value(self, x):
        return 0.0 if self.manifold.dist(x, self.c) <= self.r * (1 + 1e-12) else np.inf


class DiagonalIndicator(ProxOperator):
    kind = "indicator_diagonal"

    def __init__(self, manifold: ProductManifold, lam=1.0):
        if not isinstance(manifold, ProductManifold) or manifold.base is None:
            raise ValueError("the diagonal needs a power of a single manifold")
        super().__init__(manifold, lam)

    def __call__(self, x):
        return diagonal_prox(self.manifold, x)

    def value(self, x):
        slots = self.manifold.split(x)
        return 0.0 if all(np.array_equal(slots[0], s) for s in slots[1:]) else np.inf


class RosenbrockPhi(ProxOperator):
    """Prox of ``a (x1^2 - x2)^2`` on the Rosenbrock plane."""

    kind = "rosenbrock_phi"

    def __init__(self, a, lam=1.0):
        super().__init__(RosenbrockPlane(), lam)
        if not a > 0:
            raise ValueError(f"a must be positive, got {a}")
        self.a = float(a)

    def __call__(self, x):
        return K.rb_prox_phi(self.a, self.lam, self.manifold.check_point(x))

    def reflect(self, x):
        return K.rb_reflect_phi(self.a, self.lam, self.manifold.check_point(x))

    def value(self, x):
        x = as_vector(x)
        return self.a * (x[0] * x[0] - x[1]) ** 2


class RosenbrockPsi(ProxOperator):
    """Prox of ``(x1 - b)^2`` on the Rosenbrock plane."""

    kind = "rosenbrock_psi"

    def __init__(self, b, lam=1.0):
        super().__init__(RosenbrockPlane(), lam)
        if not b > 0:
            raise ValueError(f"b must be positive, got {b}")
        self.b = float(b)

    def __call__(self, x):
        return K.rb_prox_psi(self.b, self.lam, self.manifold.check_point(x))

    def reflect(self, x):
        return K.rb_reflect_psi(self.b, self.lam, self.manifold.check_point(x))

    def value(self, x):
        return (as_vector(x)[0] - self.b) ** 2


class ProductProx(ProxOperator):
    """Slotwise prox on a product: slot ``i`` is ``ops[i]`` applied to ``x_i``."""

    kind = "product_of"

    def __init__(self, manifold: ProductManifold, ops: Sequence[ProxOperator]):
        ops = list(ops)
        if len(ops) != manifold.count:
            raise DimensionError(f"{manifold!r} has {manifold.count} slots, got {len(ops)} operators")
        super().__init__(manifold, ops[0].lam)
        self.ops = ops

    def __call__(self, x):
        return np.concatenate([op(xi) for op, xi in zip(self.ops, self.manifold.split(x))])

    def reflect(self, x):
        return np.concatenate([op.reflect(xi) for op, xi in zip(self.ops, self.manifold.split(x))])

    def value(self, x):
        return float(sum(op.value(xi) for op, xi in zip(self.ops, self.manifold.split(x))))


def product_prox(ops: Sequence[ProxOperator], PM: ProductManifold, x) -> np.ndarray:
    return ProductProx(PM, ops)(x)


class DouglasRachfordMap:
    """``T = R_outer o R_inner``; its fixed points ``v`` give solutions ``inner(v)``."""

    def __init__(self, outer: ProxOperator, inner: ProxOperator):
        if outer.manifold != inner.manifold:
            raise ValueError("both operators must act on the same manifold")
        self.outer = outer
        self.inner = inner
        self.manifold = inner.manifold

    def __call__(self, x) -> np.ndarray:
        return self.outer.reflect(self.inner.reflect(x))


def check_nonexpansive(T, M: Manifold, pairs, slack: float = 1e-12) -> list[tuple[float, float]]:
    """Return the sampled pairs ``(d(Tx, Ty), d(x, y))`` that expand; warn if any do."""
    bad = []
    for x, y in pairs:
        dxy = M.dist(x, y)
        dt = M.dist(T(x), T(y))
        if dt > dxy * (1.0 + slack) + slack:
            bad.append((dt, dxy))
    if bad:
        warnings.warn(f"map expanded {len(bad)} of the sampled pairs; convergence is not guaranteed",
                      RuntimeWarning, stacklevel=2)
    return bad
