import numpy as np
import pytest
from hypothesis import settings, strategies as st

from hadamard_dr import Euclidean, LogOrthant, RosenbrockPlane

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

# Acceptance lines collected by tests/test_acceptance.py and echoed in the terminal summary.
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


MANIFOLDS = {
    "euclidean": lambda: Euclidean(3),
    "rosenbrock": RosenbrockPlane,
    "log-orthant": lambda: LogOrthant(3),
}


@pytest.fixture(params=sorted(MANIFOLDS))
def manifold(request):
    return MANIFOLDS[request.param]()


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def euclid_coords(dim, bound=3.0):
    return st.lists(st.floats(-bound, bound, allow_nan=False, allow_infinity=False),
                    min_size=dim, max_size=dim).map(np.array)


def points_on(M, bound=3.0):
    """Strategy for points of ``M`` drawn through its Euclidean isometry."""
    return euclid_coords(M.dim, bound).map(M.from_euclidean)
