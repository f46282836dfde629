import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from asakit.sphere import ball_volume, icosphere, psum, sphere_measure, sphere_mesh, spherical_triangle_area
from asakit.sampling import sample_sphere


def test_circle_four_nodes():
    s = sample_sphere(2, 4)
    angles = np.sort(np.mod(np.arctan2(s.u[:, 1], s.u[:, 0]), 2 * np.pi))
    assert np.allclose(angles, [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert np.allclose(s.weight, np.pi / 2)
    assert math.isclose(psum(s.weight), 2 * np.pi, rel_tol=1e-15)


@pytest.mark.parametrize("level", [0, 1, 3, 5])
def test_icosahedral_total(level):
    s = sample_sphere(3, level)
    assert abs(psum(s.weight) - 4 * np.pi) < 1e-12
    assert np.allclose(np.linalg.norm(s.u, axis=1), 1.0, atol=1e-12)


def test_monte_carlo_total_n4():
    s = sample_sphere(4, 100_000, seed=7)
    # n * omega_n from the gamma-function closed form
    expected = 4 * math.pi**2 / math.gamma(3)
    assert math.isclose(psum(s.weight), 2 * math.pi**2, rel_tol=1e-12)
    assert math.isclose(expected, 2 * math.pi**2, rel_tol=1e-15)
    assert np.allclose(s.weight, s.weight[0])


def test_sphere_measure_matches_gamma_formula():
    for n in range(2, 8):
        assert math.isclose(ball_volume(n), math.pi ** (n / 2) / math.gamma(n / 2 + 1), rel_tol=1e-14)
        assert math.isclose(sphere_measure(n), n * ball_volume(n), rel_tol=1e-14)


def test_mesh_is_deterministic():
    a = sphere_mesh(3, 3)
    b = sphere_mesh(3, 3)
    assert np.array_equal(a.nodes, b.nodes) and np.array_equal(a.weights, b.weights)
    c = sphere_mesh(5, 1000, seed=3)
    d = sphere_mesh(5, 1000, seed=3)
    assert np.array_equal(c.nodes, d.nodes)


def test_octant_triangle_area():
    e = np.eye(3)
    assert math.isclose(float(spherical_triangle_area(e[0], e[1], e[2])[0]), np.pi / 2, rel_tol=1e-12)


def test_icosphere_vertex_counts():
    assert [icosphere(k)[0].shape[0] for k in range(3)] == [12, 42, 162]


def test_quadrature_integrates_low_degree_polynomials():
    s = sample_sphere(3, 5)
    # mean of u_1^2 over the sphere is 1/3
    assert math.isclose(psum(s.u[:, 0] ** 2 * s.weight), 4 * np.pi / 3, rel_tol=1e-4)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200))
def test_psum_is_order_fixed(vals):
    a = np.array(vals)
    assert psum(a) == psum(a.copy())
