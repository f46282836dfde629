"""Curvature measures C_0, C_{n-1}, the surface area measure, volumes.

A measure is stored as a density over a fixed sample set plus a finite
list of atoms; every integral the library needs is a density/atom sum.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .convex_body import Polytope
from .errors import NotAVertex, OriginNotInterior
from .kernels import vertex_hit_counts
from .sampling import BoundarySamples, SphereSamples, sample_boundary, sphere_samples
from .sphere import psum, random_directions, spherical_triangle_area, sphere_measure

MC_SOLID_ANGLE_SAMPLES = 1_000_000


@dataclass(frozen=True)
class CurvatureMeasure:
    """Measure on the boundary: density against dH^{n-1} plus point masses."""

    samples: BoundarySamples
    density: np.ndarray
    atom_points: np.ndarray
    atom_masses: np.ndarray
    name: str = "C"

    @property
    def continuous_total(self):
        return psum(self.density * self.samples.weight)

    @property
    def atom_total(self):
        return psum(self.atom_masses) if self.atom_masses.size else 0.0

    @property
    def total(self):
        return self.continuous_total + self.atom_total

    def integrate(self, sample_values, atom_values=None):
        """Integral of a function given by its values on samples and atoms."""
        val = psum(np.asarray(sample_values) * self.density * self.samples.weight)
        if self.atom_masses.size:
            if atom_values is None:
                raise ValueError("measure has atoms; atom values are required")
            val += psum(np.asarray(atom_values) * self.atom_masses)
        return val


@dataclass(frozen=True)
class SurfaceAreaMeasure:
    """Measure on the sphere: density against dH^{n-1} plus facet atoms."""

    samples: SphereSamples
    density: np.ndarray
    atom_normals: np.ndarray
    atom_masses: np.ndarray

    @property
    def total(self):
        atoms = psum(self.atom_masses) if self.atom_masses.size else 0.0
        return psum(self.density * self.samples.weight) + atoms

    def integrate(self, sample_values, atom_values=None):
        val = psum(np.asarray(sample_values) * self.density * self.samples.weight)
        if self.atom_masses.size:
            if atom_values is None:
                raise ValueError("measure has atoms; atom values are required")
            val += psum(np.asarray(atom_values) * self.atom_masses)
        return val


def _vertex_index(poly, vertex):
    if np.ndim(vertex) == 0:
        idx = int(vertex)
        if not 0 <= idx < poly.vertices.shape[0]:
            raise NotAVertex(f"no vertex with index {idx}")
        return idx
    d = np.linalg.norm(poly.vertices - np.asarray(vertex, dtype=float), axis=1)
    idx = int(np.argmin(d))
    if d[idx] > 1e-9:
        raise NotAVertex("point is not a vertex of the polytope")
    return idx


def _exact_solid_angle(poly, idx):
    normals = poly.facet_normals[list(poly.vertex_facets[idx])]
    if poly.dim == 2:
        if len(normals) != 2:
            raise NotAVertex("vertex of a polygon must have two incident edges")
        return float(np.arccos(np.clip(normals[0] @ normals[1], -1.0, 1.0)))
    # order the cone generators cyclically around their mean direction
    axis = normals.sum(axis=0)
    axis /= np.linalg.norm(axis)
    ref = normals[0] - (normals[0] @ axis) * axis
    ref /= np.linalg.norm(ref)
    other = np.cross(axis, ref)
    ang = np.arctan2(normals @ other, normals @ ref)
    ring = normals[np.argsort(ang)]
    a = np.repeat(ring[:1], len(ring) - 2, axis=0)
    return float(np.sum(spherical_triangle_area(a, ring[1:-1], ring[2:])))


def monte_carlo_solid_angles(poly, samples=MC_SOLID_ANGLE_SAMPLES, seed=0):
    """Hit-fraction estimates of every vertex normal cone and their standard errors."""
    U = random_directions(poly.dim, int(samples), seed)
    counts = vertex_hit_counts(U, poly.vertices)
    frac = counts / float(samples)
    total = sphere_measure(poly.dim)
    se = total * np.sqrt(frac * (1.0 - frac) / samples)
    return total * frac, se


def normal_cone_solid_angle(poly, vertex, method=None, samples=MC_SOLID_ANGLE_SAMPLES, seed=0):
    """Spherical measure of the normal cone of ``poly`` at ``vertex``.

    ``vertex`` is an index or the vertex coordinates.  ``method`` defaults to
    ``"exact"`` for n <= 3 and ``"montecarlo"`` otherwise.
    """
    idx = _vertex_index(poly, vertex)
    if method is None:
        method = "exact" if poly.dim <= 3 else "montecarlo"
    if method == "exact":
        if poly.dim > 3:
            raise ValueError("exact solid angles are implemented for n <= 3")
        return _exact_solid_angle(poly, idx)
    values, _ = monte_carlo_solid_angles(poly, samples, seed)
    return float(values[idx])


def vertex_solid_angles(poly, method=None, samples=MC_SOLID_ANGLE_SAMPLES, seed=0):
    if method is None:
        method = "exact" if poly.dim <= 3 else "montecarlo"
    if method == "exact":
        return np.array([_exact_solid_angle(poly, i) for i in range(poly.vertices.shape[0])])
    return monte_carlo_solid_angles(poly, samples, seed)[0]


def curvature_measure_c0(body, resolution=None, seed=0, mesh="independent", samples=None):
    """C_0(K, .): density H_K for smooth bodies, vertex atoms for polytopes."""
    if samples is None:
        samples = sample_boundary(body, resolution, seed, mesh=mesh)
    if isinstance(body, Polytope):
        masses = vertex_solid_angles(body, seed=seed)
        return CurvatureMeasure(samples, np.zeros(len(samples)), body.vertices.copy(), masses, "C0")
    empty = np.zeros((0, body.dim))
    return CurvatureMeasure(samples, samples.H.copy(), empty, np.zeros(0), "C0")


def curvature_measure_cn1(body, resolution=None, seed=0, mesh="independent", samples=None):
    """C_{n-1}(K, .): boundary area measure (density 1, no atoms)."""
    if samples is None:
        samples = sample_boundary(body, resolution, seed, mesh=mesh)
    return CurvatureMeasure(samples, np.ones(len(samples)), np.zeros((0, body.dim)), np.zeros(0), f"C{body.dim - 1}")


def surface_area_measure(body, resolution=None, seed=0, samples=None):
    """S_K: density F_K on the sphere for smooth bodies, facet atoms for polytopes."""
    if samples is None:
        samples = sphere_samples(body, resolution, seed)
    if isinstance(body, Polytope):
        return SurfaceAreaMeasure(samples, np.zeros(len(samples)), body.facet_normals.copy(), body.facet_areas.copy())
    return SurfaceAreaMeasure(samples, samples.F.copy(), np.zeros((0, body.dim)), np.zeros(0))


def polar_volume(body, resolution=None, seed=0):
    """V(K*) = (1/n) * integral over the sphere of h_K^{-n}."""
    samples = sphere_samples(body, resolution, seed) if not isinstance(body, Polytope) else None
    if samples is None:
        from .sphere import sphere_mesh

        mesh = sphere_mesh(body.dim, resolution, seed)
        h, w = body.support(mesh.nodes), mesh.weights
    else:
        h, w = samples.h, samples.weight
    if np.min(h) <= 0:
        raise OriginNotInterior("support function is not positive; origin is not interior")
    n = body.dim
    return psum(h ** (-float(n)) * w) / n


def volume(body, resolution=None, seed=0):
    """V(K) = (1/n) * integral of h_K dS_K (exact for polytopes)."""
    n = body.dim
    if isinstance(body, Polytope):
        offsets = np.array([f.offset for f in body.facets])
        return psum(body.facet_areas * offsets) / n
    s = sphere_samples(body, resolution, seed)
    return psum(s.h * s.F * s.weight) / n


def centroid(body, resolution=None, seed=0):
    """Centroid via the divergence theorem: (1/((n+1)V)) * integral of x <x, nu> over the boundary."""
    n = body.dim
    b = sample_boundary(body, resolution, seed, mesh="pushforward")
    vol = psum(np.einsum("mi,mi->m", b.x, b.nu) * b.weight) / n
    moment = np.array([psum(b.x[:, k] * b.h_at_nu * b.weight) for k in range(n)])
    return moment / ((n + 1) * vol)


def measure_rows(measure):
    """Rows (kind, location..., normal..., value, weight) for CSV export."""
    rows = []
    n = measure.samples.dim
    nan = [math.nan] * n
    if isinstance(measure, CurvatureMeasure):
        s = measure.samples
        for x, nu, d, w in zip(s.x, s.nu, measure.density, s.weight):
            rows.append(["density", *x, *nu, d, w])
        for p, m in zip(measure.atom_points, measure.atom_masses):
            rows.append(["atom", *p, *nan, m, 1.0])
    else:
        s = measure.samples
        for u, d, w in zip(s.u, measure.density, s.weight):
            rows.append(["density", *u, *u, d, w])
        for u, m in zip(measure.atom_normals, measure.atom_masses):
            rows.append(["atom", *u, *u, m, 1.0])
    header = ["kind", *[f"x{k}" for k in range(n)], *[f"n{k}" for k in range(n)], "value", "weight"]
    return header, rows
