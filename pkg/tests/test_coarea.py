import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asakit.coarea import (
    constant_function,
    enclosing_radius,
    enclosing_set_reports,
    enclosing_threshold_bisection,
    in_enclosing_ball_set,
    in_rolling_ball_set,
    jacobian_estimate,
    minimizer_test_function,
    random_test_functions,
    rolling_ball_set_reports,
    rolling_radius,
    rolling_threshold_bisection,
    verify_change_of_variable,
    verify_sphere_boundary_equality,
)
from asakit.convex_body import Ball, Ellipsoid, cube
from asakit.curvature import curvature_functions
from asakit.sphere import random_directions
from asakit.verify import quartic_body

BALL = Ball(np.zeros(3), 2.0)
ELL = Ellipsoid(np.array([1.0, 2.0, 3.0]))
DIAG = np.ones(3) / math.sqrt(3)


@pytest.mark.parametrize("r,expected", [(0.5, True), (2.0, True), (2.0001, False), (3.0, False)])
def test_ball_rolling_membership(r, expected):
    assert in_rolling_ball_set(BALL, np.array([0, 2.0, 0]), r) is expected


def test_cube_facet_centre_rolling_radius():
    x = np.array([0.5, 0, 0])
    assert in_rolling_ball_set(cube(3), x, 0.5)
    assert not in_rolling_ball_set(cube(3), x, 0.5001)
    assert rolling_radius(cube(3), x) == pytest.approx(0.5, abs=1e-8)
    assert rolling_threshold_bisection(cube(3), x) == pytest.approx(0.5, abs=1e-6)
    # vertices are non-regular and never in the set
    assert not in_rolling_ball_set(cube(3), np.array([0.5, 0.5, 0.5]), 1e-3)
    assert rolling_radius(cube(3), np.array([0.5, 0.5, 0.5])) == 0.0


def test_ellipsoid_axis_rolling_threshold():
    # B((1 - r) e_1, r) lies in the unit ball, hence in K, iff r <= 1
    x = np.array([1.0, 0, 0])
    r_bis = rolling_threshold_bisection(ELL, x)
    r_cf = rolling_radius(ELL, x)
    assert r_bis == pytest.approx(1.0, rel=2e-3)
    assert r_bis == pytest.approx(r_cf, rel=1e-6)


@pytest.mark.parametrize("i,expected", [(1.9, False), (2.0, True), (5.0, True)])
def test_ball_enclosing_membership(i, expected):
    for u in random_directions(3, 5, 1):
        assert in_enclosing_ball_set(BALL, u, i) is expected


def test_cube_diagonal_enclosing_threshold():
    # farthest vertex lies sqrt(3) behind (1/2,1/2,1/2) along -u, so 2 i >= sqrt(3)
    assert enclosing_radius(cube(3), DIAG) == pytest.approx(math.sqrt(3) / 2, rel=1e-9)
    assert enclosing_threshold_bisection(cube(3), DIAG) == pytest.approx(math.sqrt(3) / 2, rel=1e-6)
    assert in_enclosing_ball_set(cube(3), DIAG, 0.87)
    assert not in_enclosing_ball_set(cube(3), DIAG, 0.86)


def test_facet_normal_is_never_in_A_i():
    assert not in_enclosing_ball_set(cube(3), np.array([1.0, 0, 0]), 1e6)
    assert enclosing_radius(cube(3), np.array([1.0, 0, 0])) == math.inf


@settings(max_examples=15)
@given(st.integers(0, 1000))
def test_bisection_matches_closed_form(seed):
    u = random_directions(3, 1, seed)[0]
    assert enclosing_threshold_bisection(ELL, u, resolution=3) == pytest.approx(enclosing_radius(ELL, u, resolution=3), rel=1e-6)
    x = ELL.support_gradient(u)
    assert rolling_threshold_bisection(ELL, x, resolution=3) == pytest.approx(rolling_radius(ELL, x, resolution=3), rel=1e-6)


@pytest.mark.parametrize("body", [ELL, quartic_body(3), cube(3), Ellipsoid(np.array([1.0, 3.0]))])
def test_restriction_sets_are_increasing(body):
    radii = [2.0, 1.0, 0.5, 0.25, 0.1, 0.01]
    fr = [r.fraction_covered for r in rolling_ball_set_reports(body, radii)]
    assert all(b >= a for a, b in zip(fr, fr[1:]))
    ladder = [0.5, 1, 2, 4, 8, 16, 64]
    reps = enclosing_set_reports(body, ladder)
    fe = [r.fraction_covered for r in reps]
    assert all(b >= a for a, b in zip(fe, fe[1:]))
    for a, b in zip(reps, reps[1:]):
        assert np.all(b.membership | ~a.membership)
    assert all(0.0 <= f <= 1.0 for f in fr + fe)


def test_polytope_rolling_set_excludes_vertices_only():
    rep = rolling_ball_set_reports(cube(3), [1e-9])[0]
    assert rep.fraction_covered > 0.99


@pytest.mark.parametrize("body", [ELL, quartic_body(3), Ellipsoid(np.array([1.0, 3.0])), Ellipsoid(np.array([1.0, 2.0, 3.0, 1.5]))])
def test_jacobian_estimate_matches_curvature_function(body):
    for u in random_directions(body.dim, 4, 7):
        F = curvature_functions(body, u[None])[0]
        assert jacobian_estimate(body, u) == pytest.approx(F, rel=1e-3)


def test_change_of_variable_examples():
    unit = Ball(np.zeros(3), 1.0)
    rep = verify_change_of_variable(unit, 1.0, g_functions=[constant_function()], h_functions=[constant_function()])
    for c in rep.checks:
        assert c.lhs == pytest.approx(4 * np.pi, rel=5e-3) and c.rel_gap < 5e-3
    rep = verify_change_of_variable(BALL, 3.0, g_functions=[], h_functions=[constant_function()])
    assert rep.checks[0].lhs == pytest.approx(4 * np.pi, rel=5e-3)
    assert rep.checks[0].rhs == pytest.approx(4 * np.pi, rel=5e-3)
    rep = verify_change_of_variable(ELL, 1.0, g_functions=[minimizer_test_function(ELL, 1.0)], h_functions=[])
    assert rep.max_gap < 0.01


def test_random_test_functions_are_seeded_and_positive():
    X = random_directions(3, 100, 0)
    a = [f(X, X) for f in random_test_functions(3, 5, seed=4)]
    b = [f(X, X) for f in random_test_functions(3, 5, seed=4)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert all(np.all(x > 0) for x in a)
    hs = random_test_functions(3, 2, seed=4, kind="h")
    assert np.all(hs[0](X) > 0)


def test_sphere_boundary_partial_sums():
    rep = verify_sphere_boundary_equality(ELL, 1.0)
    assert rep.monotone
    assert rep.rel_gap < 0.01 and rep.final_partial_gap < 0.01
    assert rep.sphere_partial[0] <= rep.sphere_partial[-1]
    assert rep.to_dict()["ladder"][0]["i"] == 0.125


def test_ball_partial_sums_jump_at_radius():
    rep = verify_sphere_boundary_equality(Ball(np.zeros(3), 1.0), 1.0, ladder=[0.5, 0.99, 1.0, 2.0])
    assert rep.sphere_partial[:2] == [0.0, 0.0]
    assert rep.sphere_partial[2] == pytest.approx(4 * np.pi, rel=1e-12)
