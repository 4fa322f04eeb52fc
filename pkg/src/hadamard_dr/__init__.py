"""Douglas-Rachford splitting methods on Hadamard manifolds."""

from .core import DimensionError, DomainError, Manifold, ProductManifold, product_lift, product_split
from .kernels import BACKEND
from .manifolds import Euclidean, Isometry, LogOrthant, RosenbrockPlane
from .problems import (HeronInstance, RosenbrockInstance, Target, build_heron, build_rosenbrock,
                       bundled_instance, euclidean_oracle, heron_objective)
from .solvers import (FixedPointProblem, SolverAbort, SolverConfig, SolverTrace, solve,
                      validate_params)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DimensionError", "DomainError", "Euclidean", "FixedPointProblem", "HeronInstance",
    "Isometry", "LogOrthant", "Manifold", "ProductManifold", "RosenbrockInstance", "RosenbrockPlane",
    "SolverAbort", "SolverConfig", "SolverTrace", "Target", "build_heron", "build_rosenbrock",
    "bundled_instance", "euclidean_oracle", "heron_objective", "product_lift", "product_split",
    "solve", "validate_params",
]
