import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from asakit.convex_body import Ball, Ellipsoid, apply_linear, cube, random_simplex
from asakit.curvature import restricted_eigenvalues
from asakit.errors import HullUnavailable
from asakit.measures import centroid
from asakit.sphere import random_directions
from asakit.verify import (
    PropertyResult,
    check_gl_covariance,
    check_homogeneity,
    check_isoperimetric,
    check_isoperimetric_slack,
    check_mixed_volume_inequality,
    check_polytope_zero,
    check_translation_invariance,
    demo_upper_semicontinuity,
    gl_exponent,
    homogeneity_exponent,
    is_ellipsoidal,
    isoperimetric_bound,
    quartic_body,
    run_body_suite,
    run_suite,
    standard_bodies,
)

ELL = Ellipsoid(np.array([1.0, 2.0, 3.0]))
reals = st.floats(-1e6, 1e6, allow_nan=False)


@given(reals, reals, st.sampled_from(["eq", "le"]), st.floats(0, 1))
def test_property_result_pass_rule(lhs, rhs, relation, tol):
    r = PropertyResult("x", lhs, rhs, relation, tol)
    if relation == "eq":
        expected = abs(lhs - rhs) <= tol * max(abs(lhs), abs(rhs), 1.0)
    else:
        expected = lhs <= rhs * (1 + tol)
    assert r.passed == expected
    assert r.to_dict()["pass"] == expected


def test_property_result_rejects_unknown_relation():
    with pytest.raises(ValueError):
        PropertyResult("x", 1, 1, "ge", 0)


def test_exponents():
    assert homogeneity_exponent(3, 1.0) == pytest.approx(1.5)
    assert gl_exponent(3, 1.0) == pytest.approx(0.5)
    assert homogeneity_exponent(3, 3.0) == 0.0 == gl_exponent(3, 3.0)
    assert gl_exponent(2, 6.0) == pytest.approx(-0.5)


@pytest.mark.parametrize("body", [ELL, quartic_body(3), cube(3), Ellipsoid(np.array([1.0, 4.0]))])
@pytest.mark.parametrize("p", [0.5, 3.0])
def test_scaling_and_linear_maps(body, p):
    assert check_homogeneity(body, p, 2.0).passed
    assert check_homogeneity(body, p, 0.5).passed
    n = body.dim
    shear = np.eye(n)
    shear[0, -1] = 0.7
    assert check_gl_covariance(body, p, shear).passed
    assert check_gl_covariance(body, p, np.diag(np.linspace(0.5, 2.0, n))).passed


def test_translation_invariance_at_p_one():
    r = check_translation_invariance(quartic_body(3), np.array([0.2, -0.1, 0.05]))
    assert r.passed and r.relation == "eq"


def test_polytope_zero():
    r = check_polytope_zero(random_simplex(3, 5), 2.0)
    assert r.passed and r.lhs == 0.0


@pytest.mark.parametrize("K", [ELL, cube(3), quartic_body(3)])
@pytest.mark.parametrize("L", [Ball(np.zeros(3), 1.0), Ellipsoid(np.array([1.0, 1.0, 4.0])), random_simplex(3, 0)])
def test_mixed_and_polar_bounds(K, L):
    mixed, polar = check_mixed_volume_inequality(K, L, 2.0)
    assert mixed.passed and polar.passed


def test_mixed_equality_for_homothetic_ellipsoids():
    mixed, polar = check_mixed_volume_inequality(ELL, ELL, 1.0)
    assert mixed.lhs == pytest.approx(mixed.rhs, rel=1e-3)
    assert polar.lhs == pytest.approx(polar.rhs, rel=1e-3)


def test_isoperimetric_equality_and_slack():
    for p in (0.5, 1.0, 2.0):
        r = check_isoperimetric(apply_linear(ELL, [[1, 0.3, 0], [0, 1, 0], [0, 0, 1.0]], [0.4, 0, 0]), p)
        assert r.relation == "eq" and r.passed
        c = check_isoperimetric_slack(cube(3), p)
        assert c.passed and c.lhs == 0.0
    assert isoperimetric_bound(3, 1.0, 4 * math.pi / 3) == pytest.approx(4 * math.pi)


@pytest.mark.parametrize("p,low", [(0.5, 0.02), (1.0, 0.04), (2.0, 0.05), (3.0, 0.05)])
def test_quartic_isoperimetric_slack_is_resolution_stable(p, low):
    Q = quartic_body(3)
    slacks = [check_isoperimetric(Q, p, resolution=r).rel_gap_or_slack for r in (4, 5)]
    assert all(s > low for s in slacks)
    assert abs(slacks[0] - slacks[1]) < 1e-3


def test_quartic_oracle_properties():
    Q = quartic_body(3)
    assert not is_ellipsoidal(Q) and is_ellipsoidal(apply_linear(ELL, np.eye(3)))
    assert np.allclose(centroid(Q), 0, atol=1e-9)
    eig = restricted_eigenvalues(Q, random_directions(3, 5000, 0))
    assert eig.min() > 0.1


def test_semicontinuity_demo():
    rep = demo_upper_semicontinuity(ELL, 1.0, levels=(0, 1, 2), resolution=4)
    assert rep.passed and rep.distances_decrease
    assert [m for m, _, _ in rep.rows] == [12, 42, 162]
    assert all(w == 0.0 for _, _, w in rep.rows)
    with pytest.raises(HullUnavailable):
        demo_upper_semicontinuity(Ellipsoid(np.array([1.0, 2.0])), 1.0)


def test_standard_bodies_names():
    assert list(standard_bodies(3)) == ["unit_ball", "ball_r2", "ellipsoid_123", "ellipsoid_114", "cube", "random_simplex"]
    assert list(standard_bodies(2))[2:4] == ["ellipsoid_12", "ellipsoid_14"]


def test_run_suite_subset():
    rep = run_suite(dims=(2,), ps=(1.0,), bodies=["ellipsoid_12", "cube"], quartic=False)
    counts = rep.counts
    assert counts["failed"] == 0 and counts["total"] == len(rep.results) > 10
    names = [r.name for r in rep.sorted_results]
    assert names == sorted(names)
    header, rows = rep.tsv_rows()
    assert header[-1] == "pass" and len(rows) == counts["total"]


def test_run_body_suite():
    rep = run_body_suite(ELL, "ell", ps=(2.0,))
    assert rep.all_passed
    assert any(r.name.startswith("mixed_volume/ell") for r in rep.results)
