import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asakit.convex_body import Ball, Ellipsoid, Polytope, apply_linear, cube, random_simplex, regular_simplex
from asakit.errors import NotAVertex, OriginNotInterior
from asakit.measures import (
    centroid,
    curvature_measure_c0,
    curvature_measure_cn1,
    measure_rows,
    monte_carlo_solid_angles,
    normal_cone_solid_angle,
    polar_volume,
    surface_area_measure,
    vertex_solid_angles,
    volume,
)
from asakit.sampling import surface_area
from asakit.sphere import ball_volume, sphere_measure
from asakit.verify import quartic_body


def test_ball_c0_density():
    R = 2.0
    c0 = curvature_measure_c0(Ball(np.zeros(3), R))
    assert np.allclose(c0.density, 1 / R**2)
    assert abs(c0.total - 4 * np.pi) < 1e-3 * 4 * np.pi
    assert c0.atom_masses.size == 0


def test_cube_c0_atoms():
    c0 = curvature_measure_c0(cube(3))
    assert c0.atom_masses.size == 8
    assert np.allclose(c0.atom_masses, np.pi / 2, atol=1e-9)
    assert c0.continuous_total == 0.0
    assert abs(c0.total - 4 * np.pi) < 1e-12


def test_regular_simplex_atoms_by_symmetry():
    masses = vertex_solid_angles(regular_simplex(3))
    # four congruent normal cones partition the sphere
    assert np.allclose(masses, np.pi, atol=1e-9)
    assert abs(masses.sum() - 4 * np.pi) < 1e-9


@settings(max_examples=15)
@given(st.integers(0, 10_000), st.integers(2, 3))
def test_normal_cones_partition_the_sphere(seed, n):
    masses = vertex_solid_angles(random_simplex(n, seed))
    assert np.all(masses > 0)
    assert abs(masses.sum() - sphere_measure(n)) < 1e-9


def test_square_and_cube_corners():
    sq = cube(2)
    for k in range(4):
        assert math.isclose(normal_cone_solid_angle(sq, k), np.pi / 2, rel_tol=1e-12)
    assert math.isclose(normal_cone_solid_angle(cube(3), [0.5, 0.5, 0.5]), np.pi / 2, rel_tol=1e-12)
    with pytest.raises(NotAVertex):
        normal_cone_solid_angle(cube(3), [0.0, 0.0, 0.5])


def test_monte_carlo_solid_angle_within_three_standard_errors():
    values, se = monte_carlo_solid_angles(cube(3), 10**6, seed=5)
    assert np.all(np.abs(values - np.pi / 2) <= 3 * se)
    assert math.isclose(values.sum(), 4 * np.pi, rel_tol=1e-12)


def test_monte_carlo_default_in_four_dimensions():
    masses = vertex_solid_angles(cube(4), samples=200_000, seed=1)
    # 16 orthants
    assert np.allclose(masses, sphere_measure(4) / 16, rtol=0.05)


def test_cn1_totals():
    assert curvature_measure_cn1(cube(3)).total == pytest.approx(6.0, rel=1e-12)
    assert curvature_measure_cn1(Ball(np.zeros(3), 1.0)).total == pytest.approx(4 * np.pi, rel=1e-3)
    assert curvature_measure_cn1(Ball(np.zeros(2), 2.0)).total == pytest.approx(4 * np.pi, rel=1e-6)
    assert curvature_measure_cn1(cube(3)).atom_masses.size == 0


def test_surface_area_measure():
    S = surface_area_measure(cube(3))
    assert S.atom_masses.size == 6 and np.allclose(S.atom_masses, 1.0)
    assert np.allclose(np.abs(S.atom_normals).sum(axis=1), 1.0)
    R = 1.5
    SB = surface_area_measure(Ball(np.zeros(3), R))
    assert np.allclose(SB.density, R**2)
    assert SB.total == pytest.approx(4 * np.pi * R**2, rel=1e-12)
    a = surface_area_measure(Ellipsoid(np.ones(3))).density
    assert np.allclose(a, surface_area_measure(Ball(np.zeros(3), 1.0)).density, atol=1e-9)


@pytest.mark.parametrize("body", [Ellipsoid(np.array([1.0, 2.0, 3.0])), quartic_body(3), Ellipsoid(np.array([1.0, 2.0]))])
def test_surface_area_measure_total_is_surface_area(body):
    S = surface_area_measure(body)
    assert S.total == pytest.approx(surface_area(body), rel=5e-3)


def test_measure_integration_requires_atom_values():
    c0 = curvature_measure_c0(cube(3))
    with pytest.raises(ValueError):
        c0.integrate(np.ones(len(c0.samples)))
    assert c0.integrate(np.ones(len(c0.samples)), np.full(8, 2.0)) == pytest.approx(8 * np.pi)


def test_polar_volume():
    R = 2.0
    assert polar_volume(Ball(np.zeros(3), R)) == pytest.approx(4 * np.pi / 3 / R**3, rel=1e-3)
    assert polar_volume(Ball(np.zeros(4), 1.0), resolution=100_000) == pytest.approx(ball_volume(4), rel=1e-12)
    assert polar_volume(cube(3, 2.0)) == pytest.approx(4 / 3, rel=0.01)
    with pytest.raises(OriginNotInterior):
        polar_volume(Ball(np.array([2.0, 0, 0]), 1.0))


def test_volume():
    assert volume(cube(3)) == pytest.approx(1.0, abs=1e-14)
    assert volume(Ball(np.zeros(3), 2.0)) == pytest.approx(4 / 3 * np.pi * 8, rel=5e-3)
    assert volume(Ellipsoid(np.array([1.0, 2.0, 3.0]))) == pytest.approx(4 / 3 * np.pi * 6, rel=5e-3)
    S = regular_simplex(3)
    assert volume(S) == pytest.approx(abs(np.linalg.det(S.vertices[1:] - S.vertices[0])) / 6, rel=1e-12)


def test_centroid():
    c = np.array([0.3, -0.2, 0.1])
    assert np.allclose(centroid(Ellipsoid(np.array([1.0, 2.0, 3.0]), center=c)), c, atol=1e-6)
    assert np.allclose(centroid(quartic_body(3)), 0.0, atol=1e-9)


def test_measure_rows():
    header, rows = measure_rows(curvature_measure_c0(cube(3), resolution=1))
    assert header[0] == "kind"
    assert sum(r[0] == "atom" for r in rows) == 8
    header, rows = measure_rows(surface_area_measure(cube(3), resolution=1))
    assert sum(r[0] == "atom" for r in rows) == 6
