"""Problem builders: the Rosenbrock split and the generalized Heron problem.

The Heron problem ``min sum_k d(x, C_k) s.t. x in C`` is lifted to the product
``M^{N+1}``: slots ``1..N`` carry the distance terms, slot ``N+1`` the
constraint indicator, and the diagonal ties the slots together. The iteration
runs on ``T = R_{lam F} o R_D`` and the solution is read off the diagonal
projection of the fixed point.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import kernels as K
from .core import ProductManifold, as_vector
from .manifolds import RosenbrockPlane, make_manifold
from .prox import (BallIndicator, DiagonalIndicator, DistToBall, DistToPoint,
                   DouglasRachfordMap, ProductProx, RosenbrockPhi, RosenbrockPsi)
from .solvers import FixedPointProblem


# -- Rosenbrock ---------------------------------------------------------------

@dataclass(frozen=True)
class RosenbrockInstance:
    a: float = 1.0
    b: float = 2.0
    lam: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "lam"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def minimizer(self) -> np.ndarray:
        return np.array([self.b, self.b * self.b])

    def objective(self, x) -> float:
        x = as_vector(x)
        return self.a * (x[0] * x[0] - x[1]) ** 2 + (x[0] - self.b) ** 2


def build_rosenbrock(a: float = 1.0, b: float = 2.0, lam: float = 1.0) -> FixedPointProblem:
    """``T = R_{lam phi} o R_{lam psi}`` with ``phi = a (x1^2 - x2)^2``, ``psi = (x1 - b)^2``."""
    inst = RosenbrockInstance(a, b, lam)
    M = RosenbrockPlane()
    phi, psi = RosenbrockPhi(a, lam), RosenbrockPsi(b, lam)
    a_, b_, lam_ = float(a), float(b), float(lam)

    def T(x):
        return K.rb_dr_map(a_, b_, lam_, M.check_point(x))

    problem = FixedPointProblem(manifold=M, T=T, recover=psi, solution_manifold=M,
                                objective=inst.objective, name="rosenbrock")
    problem.instance = inst
    problem.split = DouglasRachfordMap(phi, psi)
    return problem


# -- Heron ----------------------------------------------------------------------

@dataclass(frozen=True)
class Target:
    """A point target (``radius is None``) or a closed geodesic ball."""

    center: tuple
    radius: Optional[float] = None

    @property
    def is_ball(self) -> bool:
        return self.radius is not None


@dataclass
class HeronInstance:
    dimension: int
    center: np.ndarray
    radius: float
    targets: list
    lam: float = 0.35
    name: str = ""
    manifold_kind: str = "log-orthant"

    def __post_init__(self):
        self.center = as_vector(self.center)
        if not self.targets:
            raise ValueError("a Heron instance needs at least one target")
        if self.radius <= 0 or self.lam <= 0:
            raise ValueError("radius and lambda must be positive")
        M = self.manifold
        M.check_point(self.center)
        for t in self.targets:
            M.check_point(t.center)
            if t.is_ball and t.radius <= 0:
                raise ValueError("target ball radius must be positive")

    @property
    def manifold(self):
        return make_manifold(self.manifold_kind, self.dimension)

    @property
    def count(self) -> int:
        return len(self.targets)


def heron_objective(instance: HeronInstance, x) -> float:
    """Sum of distances from ``x`` to the targets (balls count from their boundary)."""
    M = instance.manifold
    total = 0.0
    for t in instance.targets:
        d = M.dist(x, np.asarray(t.center, float))
        total += max(0.0, d - t.radius) if t.is_ball else d
    return total


@dataclass
class LiftedHeron:
    instance: HeronInstance
    manifold: ProductManifold
    F: ProductProx
    D: DiagonalIndicator
    T: DouglasRachfordMap
    problem: FixedPointProblem = field(repr=False)

    def ones(self, value: float = 1.0) -> np.ndarray:
        return np.full(self.manifold.dim, float(value))


def build_heron(instance: HeronInstance) -> LiftedHeron:
    M = instance.manifold
    lam = instance.lam
    PM = ProductManifold.power(M, instance.count + 1)
    ops = []
    for t in instance.targets:
        c = np.asarray(t.center, float)
        ops.append(DistToBall(M, c, t.radius, lam) if t.is_ball else DistToPoint(M, c, lam))
    ops.append(BallIndicator(M, instance.center, instance.radius, lam))
    F = ProductProx(PM, ops)
    D = DiagonalIndicator(PM, lam)
    T = DouglasRachfordMap(F, D)

    def recover(x):
        return PM.base.mean(PM.split(x))

    problem = FixedPointProblem(manifold=PM, T=T, recover=recover, solution_manifold=M,
                                objective=lambda u: heron_objective(instance, u),
                                name=instance.name or "heron")
    return LiftedHeron(instance, PM, F, D, T, problem)


# -- Euclidean oracle ------------------------------------------------------------

@dataclass
class OracleResult:
    point: np.ndarray
    objective: float
    stationarity: float
    converged: bool
    iterations: int
    unique: bool = True


def _euclid_objective(z, centers, radii):
    d = np.linalg.norm(centers - z, axis=1)
    return float(np.sum(np.maximum(d - radii, 0.0)))


def _euclid_subgradient(z, centers, radii, kink=1e-12):
    diff = z - centers
    d = np.linalg.norm(diff, axis=1)
    active = d - radii > kink
    g = (diff[active] / d[active, None]).sum(axis=0)
    # Terms sitting exactly on their kink contribute any vector of norm <= 1;
    # take the one that best cancels the rest (minimum-norm subgradient).
    kinks = int(np.sum(np.abs(d - radii) <= kink))
    ng = np.linalg.norm(g)
    if kinks and ng > 0:
        g = g * max(0.0, 1.0 - kinks / ng)
    return g


def _stationarity(z, centers, radii, c, r):
    g = _euclid_subgradient(z, centers, radii)
    off = z - c
    dc = np.linalg.norm(off)
    if dc >= r * (1.0 - 1e-9):
        n = off / dc
        gn = float(g @ n)
        if gn <= 0.0:
            return float(np.linalg.norm(g - gn * n))
    return float(np.linalg.norm(g))


def _euclid_hessian(z, centers, radii, kink=1e-12):
    diff = z - centers
    d = np.linalg.norm(diff, axis=1)
    m = z.shape[0]
    H = np.zeros((m, m))
    for vec, dist, rad in zip(diff, d, radii):
        if dist - rad > kink:
            u = vec / dist
            H += (np.eye(m) - np.outer(u, u)) / dist
    return H


def _newton_polish(z, centers, radii, c, r, steps=20):
    # Newton on the smooth part: free when inside the ball, Lagrangian
    # Newton on the sphere when the constraint is active.
    m = z.shape[0]
    best, sbest = z, _stationarity(z, centers, radii, c, r)
    for _ in range(steps):
        if sbest <= 1e-14:
            break
        g = _euclid_subgradient(z, centers, radii)
        H = _euclid_hessian(z, centers, radii) + 1e-14 * np.eye(m)
        off = z - c
        if np.linalg.norm(off) < r * (1.0 - 1e-9):
            z_new = z - np.linalg.solve(H, g)
        else:
            mu = max(0.0, -float(g @ off) / (2.0 * r * r))
            kkt = np.zeros((m + 1, m + 1))
            kkt[:m, :m] = H + 2.0 * mu * np.eye(m)
            kkt[:m, m] = kkt[m, :m] = 2.0 * off
            rhs = -np.concatenate([g + 2.0 * mu * off, [off @ off - r * r]])
            z_new = z + np.linalg.lstsq(kkt, rhs, rcond=None)[0][:m]
        off = z_new - c
        n = np.linalg.norm(off)
        if n > r:
            z_new = c + off * (r / n)
        s = _stationarity(z_new, centers, radii, c, r)
        if not s < sbest:
            break
        z, best, sbest = z_new, z_new, s
    return best


def euclidean_oracle(instance: HeronInstance, iters: int = 2000, tol: float = 1e-9) -> OracleResult:
    """Solve the instance in logarithmic coordinates, where it is a Euclidean Heron problem.

    Projected subgradient descent with diminishing steps gives a warm start;
    SLSQP and a few Newton steps polish it. Stationarity is the norm of the projected minimum-norm
    subgradient at the returned point.
    """
    if instance.manifold_kind != "log-orthant":
        raise ValueError("the Euclidean oracle needs a log-orthant instance")
    c = np.log(instance.center)
    r = instance.radius
    centers = np.array([np.log(np.asarray(t.center, float)) for t in instance.targets])
    radii = np.array([t.radius if t.is_ball else 0.0 for t in instance.targets])

    def proj(z):
        off = z - c
        n = np.linalg.norm(off)
        return z if n <= r else c + off * (r / n)

    z = proj(centers.mean(axis=0))
    best, fbest = z, _euclid_objective(z, centers, radii)
    scale = max(r, 1e-3)
    for k in range(iters):
        g = _euclid_subgradient(z, centers, radii)
        ng = np.linalg.norm(g)
        if ng == 0.0:
            break
        z = proj(z - (scale / math.sqrt(k + 1.0)) * g / ng)
        f = _euclid_objective(z, centers, radii)
        if f < fbest:
            best, fbest = z, f

    res = minimize(
        _euclid_objective, best, args=(centers, radii), method="SLSQP", jac=_euclid_subgradient,
        constraints=[{"type": "ineq", "fun": lambda z: r * r - float((z - c) @ (z - c)),
                      "jac": lambda z: -2.0 * (z - c)}],
        options={"ftol": 1e-16, "maxiter": 1000},
    )
    z = proj(res.x) if _euclid_objective(proj(res.x), centers, radii) <= fbest else best
    z = _newton_polish(z, centers, radii, c, r)
    stat = _stationarity(z, centers, radii, c, r)
    return OracleResult(np.exp(z), _euclid_objective(z, centers, radii), stat, stat <= tol,
                        iters + int(res.nit), _is_isolated(z, centers, radii, c, r))


def _is_isolated(z, centers, radii, c, r):
    # Inside the ball the minimizer is unique only if the objective curves in
    # every direction; on the boundary the sphere's curvature pins it down.
    if np.linalg.norm(z - c) >= r * (1.0 - 1e-9):
        return True
    ev = np.linalg.eigvalsh(_euclid_hessian(z, centers, radii))
    return bool(ev[0] > 1e-9 * (1.0 + ev[-1]))


# -- instance files -------------------------------------------------------------

def _vector(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.replace(",", " ").split()])


def parse_instance(text: str, name: str = "") -> HeronInstance:
    """Parse the declarative instance format.

    ::

        [instance]
        manifold = log-orthant
        dimension = 2
        lambda = 0.35

        [constraint]
        center = 35, 35
        radius = 0.4

        [target 1]
        point = 5, 50

        [target 2]
        center = 50, 5
        radius = 0.4
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.read_string(text)
    head = cp["instance"]
    dim = head.getint("dimension")
    kind = head.get("manifold", "log-orthant")
    lam = head.getfloat("lambda", 0.35)
    center = _vector(cp["constraint"]["center"])
    radius = cp["constraint"].getfloat("radius")
    targets = []
    for sec in sorted((s for s in cp.sections() if s.startswith("target")),
                      key=lambda s: int(s.split()[-1])):
        body = cp[sec]
        if "point" in body:
            targets.append(Target(tuple(_vector(body["point"]))))
        else:
            targets.append(Target(tuple(_vector(body["center"])), body.getfloat("radius")))
    for t in targets:
        if len(t.center) != dim:
            raise ValueError(f"target {t.center} does not have dimension {dim}")
    if len(center) != dim:
        raise ValueError(f"constraint center does not have dimension {dim}")
    return HeronInstance(dim, center, radius, targets, lam, head.get("name", name), kind)


def load_instance(path) -> HeronInstance:
    path = Path(path)
    return parse_instance(path.read_text(), path.stem)


BUNDLED = (
    "heron_two_points_crossing",
    "heron_two_points_apart",
    "heron_four_points",
    "heron_ten_points_20d",
    "heron_four_balls_2d",
    "heron_four_balls_3d",
)


def bundled_instance(name: str) -> HeronInstance:
    """Load one of the instance files shipped in ``hadamard_dr/data``."""
    if name not in BUNDLED:
        raise KeyError(f"unknown bundled instance {name!r}; choose from {BUNDLED}")
    text = resources.files("hadamard_dr").joinpath("data").joinpath(f"{name}.ini").read_text()
    return parse_instance(text, name)


def point_targets(points: Sequence) -> list:
    return [Target(tuple(float(v) for v in p)) for p in points]
