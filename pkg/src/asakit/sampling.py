"""Quadrature atoms on the sphere and on the boundary of a body.

Two boundary meshes exist for smooth bodies.  ``"pushforward"`` maps the
sphere nodes through the inverse Gauss map with weight w * F_K(u), so
sphere and boundary sums agree node by node.  ``"independent"`` places
nodes at tau_K of a different (rotated vertex / offset) direction set and
weights them by lumped flat-element areas; comparing it with the sphere
rule is a genuine cross-mesh check.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .convex_body import Polytope
from .curvature import curvature_functions
from .errors import DegenerateCurvature
from . import sphere as _sphere

MESHES = ("pushforward", "independent")
MAX_FACET_SPLIT = 64


class SphereSample(NamedTuple):
    u: np.ndarray
    weight: float
    h: float
    F: float
    in_F_plus: bool


class BoundarySample(NamedTuple):
    x: np.ndarray
    nu: np.ndarray
    weight: float
    H: float
    h_at_nu: float
    in_H_plus: bool


@dataclass(frozen=True)
class SphereSamples:
    """Struct-of-arrays container of :class:`SphereSample` atoms."""

    u: np.ndarray
    weight: np.ndarray
    h: np.ndarray
    F: np.ndarray
    kind: str

    @property
    def in_F_plus(self):
        return self.F > 0

    @property
    def dim(self):
        return self.u.shape[1]

    def __len__(self):
        return self.u.shape[0]

    def __getitem__(self, i):
        return SphereSample(self.u[i], float(self.weight[i]), float(self.h[i]), float(self.F[i]), bool(self.F[i] > 0))


@dataclass(frozen=True)
class BoundarySamples:
    """Struct-of-arrays container of :class:`BoundarySample` atoms."""

    x: np.ndarray
    nu: np.ndarray
    weight: np.ndarray
    H: np.ndarray
    h_at_nu: np.ndarray
    kind: str

    @property
    def in_H_plus(self):
        return self.H > 0

    @property
    def dim(self):
        return self.x.shape[1]

    def __len__(self):
        return self.x.shape[0]

    def __getitem__(self, i):
        return BoundarySample(
            self.x[i], self.nu[i], float(self.weight[i]), float(self.H[i]), float(self.h_at_nu[i]), bool(self.H[i] > 0)
        )


def sample_sphere(n, resolution=None, seed=0):
    """Geometry-only sphere atoms (h and F are NaN until bound to a body)."""
    mesh = _sphere.sphere_mesh(n, resolution, seed)
    nan = np.full(len(mesh), np.nan)
    return SphereSamples(mesh.nodes, mesh.weights, nan, nan.copy(), mesh.kind)


def sphere_samples(body, resolution=None, seed=0):
    """Sphere atoms carrying h_K and F_K of ``body``.

    For polytopes F_K vanishes almost everywhere, so F is 0 at every node;
    their surface area measure lives in the facet atoms instead.
    """
    mesh = _sphere.sphere_mesh(body.dim, resolution, seed)
    h = body.support(mesh.nodes)
    if isinstance(body, Polytope):
        F = np.zeros(len(mesh))
    else:
        F = curvature_functions(body, mesh.nodes)
        if not np.all(np.isfinite(F)):
            raise DegenerateCurvature("curvature function is not finite at some node")
    return SphereSamples(mesh.nodes, mesh.weights, h, F, mesh.kind)


def _smooth_from_directions(body, U, weights, kind):
    F = curvature_functions(body, U)
    if not np.all(np.isfinite(F)):
        raise DegenerateCurvature("curvature function is not finite at some node")
    X = body.support_gradient(U)
    with np.errstate(divide="ignore"):
        H = np.where(F > 0, 1.0 / np.where(F > 0, F, 1.0), 0.0)
    w = weights(X, F)
    return BoundarySamples(X, U, w, H, body.support(U), kind)


def _triangle_lumped_weights(X, faces):
    a, b, c = X[faces[:, 0]], X[faces[:, 1]], X[faces[:, 2]]
    area = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    w = np.zeros(X.shape[0])
    for k in range(3):
        np.add.at(w, faces[:, k], area / 3.0)
    return w


def _polygon_lumped_weights(X):
    seg = np.linalg.norm(np.roll(X, -1, axis=0) - X, axis=1)
    return 0.5 * (seg + np.roll(seg, 1))


def _polytope_samples(body, resolution):
    n = body.dim
    xs, nus, ws, hs = [], [], [], []
    V = body.vertices
    if n == 2:
        k = max(1, -(-int(resolution or _sphere.default_resolution(2)) // len(body.facets)))
    elif n == 3:
        level = _sphere.default_resolution(3) if resolution is None else int(resolution)
        k = min(2**level, MAX_FACET_SPLIT)
    else:
        k = 1
    for f in body.facets:
        for simplex in f.simplices:
            P = V[list(simplex)]
            if n == 2:
                t = (np.arange(k) + 0.5) / k
                pts = P[0] + t[:, None] * (P[1] - P[0])
                w = np.full(k, np.linalg.norm(P[1] - P[0]) / k)
            elif n == 3:
                bary = _subtriangle_centroids(k)
                pts = bary @ P
                area = 0.5 * np.linalg.norm(np.cross(P[1] - P[0], P[2] - P[0]))
                w = np.full(len(bary), area / (k * k))
            else:
                from .convex_body import _simplex_volume

                pts = P.mean(axis=0, keepdims=True)
                w = np.array([_simplex_volume(P)])
            xs.append(pts)
            ws.append(w)
            nus.append(np.repeat(f.normal[None], len(w), axis=0))
            hs.append(np.full(len(w), f.offset))
    X = np.vstack(xs)
    return BoundarySamples(X, np.vstack(nus), np.concatenate(ws), np.zeros(X.shape[0]), np.concatenate(hs), "facets")


def _subtriangle_centroids(k):
    """Barycentric centroids of the k^2 congruent subtriangles of a triangle."""
    rows = []
    for i in range(k):
        for j in range(k - i):
            rows.append(((i + 1 / 3) / k, (j + 1 / 3) / k))
            if i + j <= k - 2:
                rows.append(((i + 2 / 3) / k, (j + 2 / 3) / k))
    ab = np.array(rows)
    return np.column_stack([1.0 - ab.sum(axis=1), ab[:, 0], ab[:, 1]])


def sample_boundary(body, resolution=None, seed=0, mesh="pushforward"):
    """Boundary atoms (x, nu, weight, H, h(nu)) of ``body``.

    Polytopes always use the facet product rule (H = 0 everywhere).
    """
    if mesh not in MESHES:
        raise ValueError(f"mesh must be one of {MESHES}")
    if isinstance(body, Polytope):
        return _polytope_samples(body, resolution)
    n = body.dim
    if mesh == "pushforward":
        sm = _sphere.sphere_mesh(n, resolution, seed)
        return _smooth_from_directions(body, sm.nodes, lambda X, F: sm.weights * F, "pushforward")
    if n == 3:
        U, faces = _sphere.vertex_mesh(resolution)
        return _smooth_from_directions(body, U, lambda X, F: _triangle_lumped_weights(X, faces), "independent")
    if n == 2:
        U = _sphere.offset_circle(resolution)
        return _smooth_from_directions(body, U, lambda X, F: _polygon_lumped_weights(X), "independent")
    sm = _sphere.sphere_mesh(n, resolution, seed + 1)
    return _smooth_from_directions(body, sm.nodes, lambda X, F: sm.weights * F, "independent")


def surface_area(body, resolution=None, seed=0):
    if isinstance(body, Polytope):
        return body.surface_area
    return _sphere.psum(sample_boundary(body, resolution, seed).weight)
