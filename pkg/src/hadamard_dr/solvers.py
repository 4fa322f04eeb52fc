"""Fixed-point iterations for nonexpansive maps on Hadamard manifolds.

Three methods, named by their structure:

``dr_mann``
    Krasnoselskii-Mann step ``x+ = gamma(x, T x; alpha)``. With ``T`` a
    Douglas-Rachford map this is the classical manifold DR method.
``inertial_dr``
    Extrapolate ``y = exp_x(-theta log_x x_prev)`` and take the Mann step from ``y``.
``pacc_dr``
    p-accelerated normal S-step: Mann point ``y``, then ``x+ = T^p(y)``.

Schedules (``alpha``, ``theta``) are constants or callables of the 1-based
step index.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .core import DomainError, Manifold

Schedule = Union[float, Callable[[int], float]]

METHODS = ("dr_mann", "inertial_dr", "pacc_dr")


class SolverAbort(RuntimeError):
    """Iteration produced a non-finite coordinate."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


def schedule_value(s: Schedule, n: int) -> float:
    return float(s(n)) if callable(s) else float(s)


@dataclass
class FixedPointProblem:
    """A nonexpansive map together with how to read a solution off its fixed point.

    ``recover`` maps an iterate to the candidate solution (``prox_psi`` for a
    two-term split, the first diagonal slot for a product split), which lives
    on ``solution_manifold``. The stopping metric is the distance between
    consecutive recovered points.
    """

    manifold: Manifold
    T: Callable[[np.ndarray], np.ndarray]
    recover: Callable[[np.ndarray], np.ndarray]
    solution_manifold: Manifold
    objective: Optional[Callable[[np.ndarray], float]] = None
    name: str = ""


@dataclass
class SolverConfig:
    method: str = "dr_mann"
    alpha: Schedule = 0.5
    theta: Schedule = 0.0
    p: int = 2
    lam: float = 1.0
    tol: float = 1e-14
    max_iter: int = 100_000
    x0: Optional[np.ndarray] = None
    x1: Optional[np.ndarray] = None

    def echo(self) -> dict:
        """Plain-data view of the config for trace headers."""
        def sched(s):
            return s if not callable(s) else getattr(s, "__name__", "callable")
        out = {
            "method": self.method,
            "alpha": sched(self.alpha),
            "lambda": self.lam,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "x0": None if self.x0 is None else [float(v) for v in np.ravel(self.x0)],
        }
        if self.method == "inertial_dr":
            out["theta"] = sched(self.theta)
            out["x1"] = None if self.x1 is None else [float(v) for v in np.ravel(self.x1)]
        if self.method == "pacc_dr":
            out["p"] = self.p
        return out


@dataclass
class ParamReport:
    ok: bool
    checks: dict
    violations: list
    theta_max: Optional[float] = None


@dataclass
class IterationRecord:
    n: int
    point: np.ndarray
    residual: float
    min_residual: float
    stop_metric: float
    objective: float
    elapsed: float  # milliseconds since the run started


@dataclass
class SolverTrace:
    config: SolverConfig
    records: list = field(default_factory=list)
    status: str = "max_iter"
    v: Optional[np.ndarray] = None
    u: Optional[np.ndarray] = None
    report: Optional[ParamReport] = None

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def stop_metric(self) -> float:
        return self.records[-1].stop_metric if self.records else math.nan


def inertial_bound(b: float) -> float:
    """Largest admissible inertia ``eps / (1 + eps + max(1, eps))`` with ``eps = (1 - b) / b``."""
    eps = (1.0 - b) / b
    return eps / (1.0 + eps + max(1.0, eps))


def validate_params(config: SolverConfig) -> ParamReport:
    """Check step-size and inertia conditions without raising."""
    checks: dict = {}
    violations: list = []
    if config.method not in METHODS:
        return ParamReport(False, {"method": False}, [f"unknown method {config.method!r}"])
    for name, ok, msg in [
        ("tol", config.tol > 0, f"tol must be positive, got {config.tol}"),
        ("max_iter", int(config.max_iter) >= 1, f"max_iter must be >= 1, got {config.max_iter}"),
        ("x0", config.x0 is not None, "x0 is required"),
    ]:
        checks[name] = ok
        if not ok:
            violations.append(msg)

    horizon = max(1, int(config.max_iter))
    alphas = [schedule_value(config.alpha, n) for n in range(1, horizon + 1)] \
        if callable(config.alpha) else [float(config.alpha)]
    a, b = min(alphas), max(alphas)
    checks["alpha_range"] = 0.0 < a and b < 1.0
    if not checks["alpha_range"]:
        violations.append(f"alpha must lie in (0, 1), got range [{a}, {b}]")

    theta_max = None
    if config.method == "inertial_dr":
        checks["x1"] = config.x1 is not None
        if not checks["x1"]:
            violations.append("x1 is required for inertial_dr")
        thetas = [schedule_value(config.theta, n) for n in range(1, horizon + 1)] \
            if callable(config.theta) else [float(config.theta)]
        # C1: 0 < a <= alpha_n <= b < 1
        checks["C1"] = checks["alpha_range"]
        # C2: theta_n nondecreasing in [0, 1)
        checks["C2"] = all(0.0 <= t < 1.0 for t in thetas) and \
            all(t1 <= t2 for t1, t2 in zip(thetas, thetas[1:]))
        if not checks["C2"]:
            violations.append("theta schedule must be nondecreasing in [0, 1)")
        if 0.0 < b < 1.0:
            theta_max = inertial_bound(b)
            theta = max(thetas)
            checks["C3"] = theta < theta_max
            if not checks["C3"]:
                violations.append(f"theta = {theta:g} violates theta < {theta_max:.6g} "
                                  f"(bound for alpha <= {b:g})")
        else:
            checks["C3"] = False
    if config.method == "pacc_dr":
        checks["p"] = int(config.p) == config.p and config.p >= 1
        if not checks["p"]:
            violations.append(f"p must be a positive integer, got {config.p}")
    return ParamReport(not violations, checks, violations, theta_max)


def step_mann(M: Manifold, T, x, alpha: float, Tx=None) -> np.ndarray:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return M.geodesic(x, T(x) if Tx is None else Tx, alpha)


def step_inertial(M: Manifold, T, x, x_prev, alpha: float, theta: float):
    """Return ``(x_next, y)``."""
    y = M.inertial_extrapolate(x, x_prev, theta)
    return step_mann(M, T, y, alpha), y


def step_pacc(M: Manifold, T, x, alpha: float, p: int, Tx=None) -> np.ndarray:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    y = step_mann(M, T, x, alpha, Tx)
    for _ in range(p):
        y = T(y)
    return y


def min_residual_update(prev_min: Optional[float], residual: float) -> float:
    return residual if prev_min is None else min(prev_min, residual)


def rate_certificate_inertial(a: float, b: float, theta: float, d0: float, n: int) -> float:
    """Bound on the squared best residual after ``n`` inertial steps started with ``x0 = x1``."""
    eps = (1.0 - b) / b
    k = eps - theta * (1.0 + eps + max(1.0, eps))
    if k <= 0:
        raise ValueError(f"theta = {theta} leaves no margin (K = {k:g}); need theta < {inertial_bound(b):g}")
    c = 1.0 + theta ** 2 * (1.0 + theta) / (k * (1.0 - theta) ** 2) + theta * (1.0 + theta) / (k * (1.0 - theta))
    return 5.0 / (a * (1.0 - b)) * c * d0 ** 2 / n


def rate_certificate_pacc(alpha: Schedule, d0: float, n: int) -> float:
    """``d0 / sqrt(sum_{i<=n} alpha_i (1 - alpha_i))``."""
    s = sum(schedule_value(alpha, i) * (1.0 - schedule_value(alpha, i)) for i in range(1, n + 1)) \
        if callable(alpha) else n * float(alpha) * (1.0 - float(alpha))
    return d0 / math.sqrt(s)


def solve(problem: FixedPointProblem, config: SolverConfig, sink=None) -> SolverTrace:
    """Iterate until the stopping metric drops below ``tol`` or ``max_iter`` steps.

    Record ``n`` holds the iterate produced by step ``n``; the reported
    iteration count is the number of steps taken when the test first passes.
    ``sink`` (if given) is called with every record as it is produced.
    """
    trace = SolverTrace(config=config)
    report = validate_params(config)
    trace.report = report
    if not report.ok:
        trace.status = "param_invalid"
        return trace

    M = problem.manifold
    T = problem.T
    x = M.check_point(config.x0).copy()
    x_prev = None
    if config.method == "inertial_dr":
        x_prev, x = x, M.check_point(config.x1).copy()
    rec_prev = problem.recover(x)

    def abort(n, what):
        trace.status = "aborted"
        return SolverAbort(f"non-finite {what} at step {n}", trace)

    Tx = T(x)
    if not np.all(np.isfinite(Tx)):
        raise abort(0, f"image T(x0) = {Tx}")
    best = None
    start = time.perf_counter()

    for n in range(1, int(config.max_iter) + 1):
        alpha = schedule_value(config.alpha, n)
        try:
            if config.method == "dr_mann":
                x_new = step_mann(M, T, x, alpha, Tx)
            elif config.method == "inertial_dr":
                x_new, _ = step_inertial(M, T, x, x_prev, alpha, schedule_value(config.theta, n))
            else:
                x_new = step_pacc(M, T, x, alpha, int(config.p), Tx)
        except (DomainError, FloatingPointError) as exc:
            raise abort(n, f"value inside the step ({exc})") from exc

        if not np.all(np.isfinite(x_new)):
            raise abort(n, f"iterate {x_new}")

        Tx = T(x_new)
        if not np.all(np.isfinite(Tx)):
            raise abort(n, f"image T(x) = {Tx}")
        residual = M.dist(x_new, Tx)
        best = min_residual_update(best, residual)
        rec = problem.recover(x_new)
        metric = problem.solution_manifold.dist(rec, rec_prev)
        obj = problem.objective(rec) if problem.objective is not None else math.nan
        record = IterationRecord(n, x_new, residual, best, metric, obj,
                                 (time.perf_counter() - start) * 1e3)
        trace.records.append(record)
        if sink is not None:
            sink(record)

        x_prev, x, rec_prev = x, x_new, rec
        if metric < config.tol:
            trace.status = "converged"
            break

    trace.v = x
    trace.u = problem.recover(x)
    return trace
