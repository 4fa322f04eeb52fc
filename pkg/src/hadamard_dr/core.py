"""Hadamard-manifold contract and the product construction.

Points and tangent vectors are plain float64 arrays in chart coordinates.
Tangent vectors live in the chart's coordinate basis; their length is measured
through the manifold's metric (:meth:`Manifold.norm`), never the Euclidean norm
of the components.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np


class DomainError(ValueError):
    """A point lies outside the manifold's coordinate domain."""


class DimensionError(ValueError):
    """Array length does not match the manifold dimension."""


def as_vector(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float64).reshape(-1)


class Manifold(ABC):
    """A Hadamard manifold given in a single global chart.

    Subclasses supply ``dist``, ``exp``, ``log`` and ``norm``. The remaining
    operations (geodesic, inertial extrapolation, reflection) are derived from
    those and may be overridden by closed forms.
    """

    kind: str = "abstract"
    #: exp/log/geodesic act coordinate by coordinate, so a power of this
    #: manifold can apply them to the flattened product vector directly.
    separable: bool = False

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        self.dim = int(dim)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"

    def __eq__(self, other):
        return type(self) is type(other) and self.dim == other.dim

    def __hash__(self):
        return hash((type(self).__name__, self.dim))

    # -- validation ---------------------------------------------------------

    def check_point(self, x) -> np.ndarray:
        x = as_vector(x)
        if x.shape[0] != self.dim:
            raise DimensionError(f"{self!r} expects {self.dim} coordinates, got {x.shape[0]}")
        if not np.all(np.isfinite(x)):
            raise DomainError(f"non-finite coordinates {x}")
        return x

    def check_tangent(self, v) -> np.ndarray:
        v = as_vector(v)
        if v.shape[0] != self.dim:
            raise DimensionError(f"{self!r} expects {self.dim} tangent components, got {v.shape[0]}")
        return v

    # -- primitive geometry -------------------------------------------------

    @abstractmethod
    def dist(self, x, y) -> float:
        """Riemannian distance."""

    @abstractmethod
    def exp(self, x, v) -> np.ndarray:
        """Exponential map at ``x`` applied to the tangent vector ``v``."""

    @abstractmethod
    def log(self, x, y) -> np.ndarray:
        """Inverse exponential map: the tangent vector at ``x`` pointing to ``y``."""

    @abstractmethod
    def norm(self, x, v) -> float:
        """Metric length of the tangent vector ``v`` at ``x``."""

    # -- derived geometry ---------------------------------------------------

    def geodesic(self, x, y, t: float) -> np.ndarray:
        """Point at parameter ``t`` of the geodesic from ``x`` (t=0) to ``y`` (t=1)."""
        t = _check_unit(t)
        return self.exp(x, t * self.log(x, y))

    def inertial_extrapolate(self, x, x_prev, theta: float) -> np.ndarray:
        """Push ``x`` away from ``x_prev`` along their geodesic: ``exp_x(-theta log_x x_prev)``."""
        if not 0.0 <= theta < 1.0:
            raise ValueError(f"inertial parameter must lie in [0, 1), got {theta}")
        if theta == 0.0:
            return self.check_point(x).copy()
        return self.exp(x, -theta * self.log(x, x_prev))

    def reflect(self, center, x) -> np.ndarray:
        """Geodesic reflection of ``x`` through ``center``."""
        return self.exp(center, -self.log(center, x))

    def mean(self, points: Sequence) -> np.ndarray:
        """Minimizer of the sum of squared distances to ``points``."""
        raise NotImplementedError(f"no closed-form mean on {self!r}")

    def to_euclidean(self, x) -> np.ndarray:
        """Isometry onto Euclidean space (test oracles only)."""
        raise NotImplementedError(f"no Euclidean isometry for {self!r}")

    def from_euclidean(self, z) -> np.ndarray:
        raise NotImplementedError(f"no Euclidean isometry for {self!r}")

    def random_point(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.from_euclidean(scale * rng.standard_normal(self.dim))

    def near(self, x, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        """Random point reached from ``x`` along a tangent step of length about ``scale``."""
        x = self.check_point(x)
        v = rng.standard_normal(self.dim)
        n = self.norm(x, v)
        return x if n == 0.0 else self.exp(x, (scale * rng.uniform() / n) * v)


def _check_unit(t) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"geodesic parameter must lie in [0, 1], got {t}")
    return t


class ProductManifold(Manifold):
    """Cartesian product M_1 x ... x M_N with the root-sum-square distance.

    Points are the concatenation of the component coordinate vectors.
    """

    kind = "product"

    def __init__(self, components: Sequence[Manifold]):
        components = list(components)
        if not components:
            raise ValueError("a product needs at least one component")
        self.components = components
        self.count = len(components)
        sizes = [c.dim for c in components]
        self._offsets = np.cumsum([0] + sizes)
        super().__init__(int(self._offsets[-1]))
        first = components[0]
        self.base = first if all(c == first for c in components) else None
        self.separable = self.base is not None and first.separable
        # Separable bases are dimension-agnostic: one instance of the full
        # dimension evaluates every component at once.
        self._flat = type(first)(self.dim) if self.separable else None

    @classmethod
    def power(cls, base: Manifold, count: int) -> "ProductManifold":
        if count < 1:
            raise ValueError(f"component count must be positive, got {count}")
        return cls([base] * count)

    def __repr__(self):
        if self.base is not None:
            return f"ProductManifold({self.base!r}^{self.count})"
        return f"ProductManifold({self.components!r})"

    def __eq__(self, other):
        return isinstance(other, ProductManifold) and self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components))

    def split(self, x) -> list[np.ndarray]:
        x = as_vector(x)
        if x.shape[0] != self.dim:
            raise DimensionError(f"{self!r} expects {self.dim} coordinates, got {x.shape[0]}")
        o = self._offsets
        return [x[o[i]:o[i + 1]] for i in range(self.count)]

    def lift(self, points: Sequence) -> np.ndarray:
        points = list(points)
        if len(points) != self.count:
            raise DimensionError(f"{self!r} has {self.count} components, got {len(points)}")
        return np.concatenate([c.check_point(p) for c, p in zip(self.components, points)])

    def check_point(self, x) -> np.ndarray:
        x = as_vector(x)
        for c, xi in zip(self.components, self.split(x)):
            c.check_point(xi)
        return x

    def dist(self, x, y) -> float:
        return float(np.sqrt(sum(c.dist(a, b) ** 2 for c, a, b in
                                 zip(self.components, self.split(x), self.split(y)))))

    def norm(self, x, v) -> float:
        return float(np.sqrt(sum(c.norm(a, w) ** 2 for c, a, w in
                                 zip(self.components, self.split(x), self.split(v)))))

    def exp(self, x, v) -> np.ndarray:
        if self.separable:
            return self._flat.exp(x, v)
        return np.concatenate([c.exp(a, w) for c, a, w in
                               zip(self.components, self.split(x), self.split(v))])

    def log(self, x, y) -> np.ndarray:
        if self.separable:
            return self._flat.log(x, y)
        return np.concatenate([c.log(a, b) for c, a, b in
                               zip(self.components, self.split(x), self.split(y))])

    def geodesic(self, x, y, t) -> np.ndarray:
        t = _check_unit(t)
        if self.separable:
            return self._flat.geodesic(x, y, t)
        return np.concatenate([c.geodesic(a, b, t) for c, a, b in
                               zip(self.components, self.split(x), self.split(y))])

    def to_euclidean(self, x) -> np.ndarray:
        return np.concatenate([c.to_euclidean(a) for c, a in zip(self.components, self.split(x))])

    def from_euclidean(self, z) -> np.ndarray:
        return np.concatenate([c.from_euclidean(a) for c, a in zip(self.components, self.split(z))])

    def random_point(self, rng, scale=1.0) -> np.ndarray:
        return np.concatenate([c.random_point(rng, scale) for c in self.components])


def product_lift(base: Manifold, points: Sequence) -> tuple[ProductManifold, np.ndarray]:
    """Assemble same-manifold points into one point of ``base^N``."""
    points = list(points)
    pm = ProductManifold.power(base, len(points))
    return pm, pm.lift(points)


def product_split(pm: ProductManifold, x) -> list[np.ndarray]:
    return pm.split(x)
