import math

import numpy as np
import pytest

from hadamard_dr import (HeronInstance, LogOrthant, RosenbrockInstance, SolverConfig, Target,
                         build_heron, build_rosenbrock, bundled_instance, euclidean_oracle,
                         heron_objective, solve)
from hadamard_dr.problems import BUNDLED, load_instance, parse_instance, point_targets
from hadamard_dr.prox import check_nonexpansive, project_ball


def small_instance(targets, center=(1.0, 1.0), radius=0.5, lam=0.35):
    return HeronInstance(2, np.array(center), radius, targets, lam, "small")


def test_rosenbrock_instance():
    inst = RosenbrockInstance(1.0, 2.0, 1.0)
    np.testing.assert_array_equal(inst.minimizer, [2.0, 4.0])
    assert inst.objective([2.0, 4.0]) == 0.0
    assert inst.objective([1.0, 2.0]) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        RosenbrockInstance(0.0, 2.0, 1.0)


def test_rosenbrock_dr_map_equals_composed_reflections(rng):
    prob = build_rosenbrock(1.3, 0.7, 0.9)
    for _ in range(100):
        x = rng.normal(scale=2, size=2)
        np.testing.assert_allclose(prob.T(x), prob.split(x), rtol=1e-13, atol=1e-13)


def test_rosenbrock_dr_map_is_nonexpansive_on_samples(rng):
    prob = build_rosenbrock()
    pairs = [(rng.normal(size=2), rng.normal(size=2)) for _ in range(500)]
    assert check_nonexpansive(prob.T, prob.manifold, pairs) == []


def test_heron_objective_examples():
    a1, a2, a3 = (2.0, 3.0), (5.0, 1.0), (0.5, 0.5)
    inst = small_instance(point_targets([a1, a2, a3]))
    M = inst.manifold
    assert heron_objective(inst, a1) == pytest.approx(M.dist(a1, a2) + M.dist(a1, a3), rel=1e-15)
    ball = small_instance([Target((2.0, 2.0), 0.5)])
    assert heron_objective(ball, (2.1, 1.9)) == 0.0
    # symmetric in log coordinates about x = (1, 1)
    sym = small_instance(point_targets([(math.e, 1 / math.e), (1 / math.e, math.e)]))
    assert heron_objective(sym, (1.0, 1.0)) == pytest.approx(2 * math.sqrt(2), rel=1e-15)


def test_heron_instance_validation():
    with pytest.raises(ValueError):
        small_instance([])
    with pytest.raises(ValueError):
        small_instance(point_targets([(1.0, -1.0)]))
    with pytest.raises(ValueError):
        small_instance(point_targets([(1.0, 1.0)]), radius=0.0)
    with pytest.raises(ValueError):
        small_instance([Target((1.0, 1.0), -0.2)])


def test_lifted_heron_structure():
    inst = bundled_instance("heron_four_points")
    lifted = build_heron(inst)
    assert lifted.manifold.count == 5 and lifted.manifold.dim == 10
    assert [op.kind for op in lifted.F.ops] == ["dist_to_point"] * 4 + ["indicator_ball"]
    balls = build_heron(bundled_instance("heron_four_balls_3d"))
    assert [op.kind for op in balls.F.ops] == ["dist_to_ball"] * 4 + ["indicator_ball"]
    x = lifted.ones()
    np.testing.assert_array_equal(lifted.problem.recover(x), np.ones(2))


def test_bundled_instances_load():
    dims = {}
    for name in BUNDLED:
        inst = bundled_instance(name)
        assert inst.name == name and inst.lam == 0.35
        dims[name] = (inst.dimension, inst.count)
    assert dims["heron_ten_points_20d"] == (20, 10)
    assert dims["heron_four_balls_3d"] == (3, 4)
    with pytest.raises(KeyError):
        bundled_instance("nope")


def test_parse_instance_round_trip(tmp_path):
    text = """
[instance]
manifold = log-orthant
dimension = 2
lambda = 0.2

[constraint]
center = 3, 4
radius = 0.3

[target 2]
center = 1, 2
radius = 0.1

[target 1]
point = 5 6
"""
    path = tmp_path / "mine.ini"
    path.write_text(text)
    inst = load_instance(path)
    assert inst.name == "mine" and inst.lam == 0.2 and inst.radius == 0.3
    assert inst.targets == [Target((5.0, 6.0)), Target((1.0, 2.0), 0.1)]
    bad = text.replace("point = 5 6", "point = 5 6 7")
    with pytest.raises(ValueError):
        parse_instance(bad)


def test_oracle_single_target_inside_constraint():
    inst = small_instance(point_targets([(1.2, 0.9)]))
    res = euclidean_oracle(inst)
    assert res.converged
    np.testing.assert_allclose(res.point, [1.2, 0.9], rtol=1e-9)
    assert res.objective == pytest.approx(0.0, abs=1e-9)


def test_oracle_equal_targets_project_onto_constraint():
    a = (20.0, 3.0)
    inst = small_instance(point_targets([a, a, a]))
    res = euclidean_oracle(inst)
    M = LogOrthant(2)
    np.testing.assert_allclose(res.point, project_ball(M, inst.center, inst.radius, a), rtol=1e-8)


def test_oracle_flags_non_unique_instance():
    assert euclidean_oracle(bundled_instance("heron_two_points_crossing")).unique is False
    assert euclidean_oracle(bundled_instance("heron_two_points_apart")).unique is True


def test_oracle_rejects_other_manifolds():
    inst = HeronInstance(2, np.array([0.0, 0.0]), 1.0, point_targets([(1.0, 1.0)]), manifold_kind="euclidean")
    with pytest.raises(ValueError):
        euclidean_oracle(inst)


@pytest.mark.parametrize("name", [n for n in BUNDLED if n != "heron_two_points_crossing"])
def test_solver_agrees_with_oracle(name):
    inst = bundled_instance(name)
    lifted = build_heron(inst)
    trace = solve(lifted.problem, SolverConfig(method="pacc_dr", alpha=0.7, p=1, tol=1e-10,
                                               x0=lifted.ones()))
    ref = euclidean_oracle(inst)
    assert ref.converged and ref.unique
    M = inst.manifold
    assert abs(heron_objective(inst, trace.u) - ref.objective) <= 1e-6
    assert M.dist(trace.u, ref.point) <= 1e-5
    assert M.dist(trace.u, inst.center) <= inst.radius + 1e-9


def test_non_unique_instance_agrees_in_objective():
    inst = bundled_instance("heron_two_points_crossing")
    lifted = build_heron(inst)
    trace = solve(lifted.problem, SolverConfig(alpha=0.7, tol=1e-10, x0=lifted.ones()))
    assert abs(heron_objective(inst, trace.u) - euclidean_oracle(inst).objective) <= 1e-6
