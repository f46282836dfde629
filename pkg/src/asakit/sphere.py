"""Quadrature rules on the unit sphere S^{n-1}.

n = 2 uses an equiangular grid, n = 3 a subdivided icosahedron with
spherical-excess weights, and n >= 4 seeded Monte Carlo.  Weights are
always rescaled so that they sum to the exact sphere measure n * omega_n.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

DEFAULT_RESOLUTION = {2: 4096, 3: 5}
DEFAULT_MC_NODES = 200_000


def ball_volume(n):
    """Volume omega_n of the n-dimensional unit ball."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def sphere_measure(n):
    """Surface measure n * omega_n of S^{n-1}."""
    return n * ball_volume(n)


def default_resolution(n):
    return DEFAULT_RESOLUTION.get(n, DEFAULT_MC_NODES)


def psum(values):
    """Deterministic pairwise sum (numpy's reduction on a contiguous array)."""
    return float(np.sum(np.ascontiguousarray(values, dtype=float)))


@dataclass(frozen=True)
class SphereMesh:
    """Nodes and weights of a rule on S^{n-1}.

    ``kind`` is ``"grid"``, ``"icosahedral"`` or ``"montecarlo"``; the Monte
    Carlo rule is the only one carrying a sampling error.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    @property
    def dim(self):
        return self.nodes.shape[1]

    def __len__(self):
        return self.nodes.shape[0]

    def integrate(self, values):
        return psum(np.asarray(values) * self.weights)

    def standard_error(self, values):
        """Monte Carlo standard error of ``integrate(values)`` (0 for deterministic rules)."""
        if self.kind != "montecarlo":
            return 0.0
        f = np.asarray(values, dtype=float) * sphere_measure(self.dim)
        return float(np.std(f, ddof=1) / math.sqrt(len(f)))


def _normalize_rows(a):
    return a / np.linalg.norm(a, axis=1, keepdims=True)


def _icosahedron():
    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=float,
    )
    faces = np.array(
        [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ],
        dtype=np.int64,
    )
    return _normalize_rows(verts), faces


@lru_cache(maxsize=16)
def _icosphere_cached(level):
    verts, faces = _icosahedron()
    verts = list(verts)
    for _ in range(level):
        cache = {}

        def midpoint(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
        faces = np.array(new, dtype=np.int64)
    v = np.array(verts)
    v.setflags(write=False)
    faces.setflags(write=False)
    return v, faces


def icosphere(level):
    """Vertices (unit vectors) and triangles of the level-``level`` icosphere."""
    if level < 0:
        raise ValueError("subdivision level must be >= 0")
    return _icosphere_cached(int(level))


def spherical_triangle_area(a, b, c):
    """Spherical excess of the triangles with unit-vector corners a, b, c (L'Huilier)."""
    a, b, c = (np.atleast_2d(x) for x in (a, b, c))
    ta = np.arccos(np.clip(np.sum(b * c, axis=1), -1.0, 1.0))
    tb = np.arccos(np.clip(np.sum(a * c, axis=1), -1.0, 1.0))
    tc = np.arccos(np.clip(np.sum(a * b, axis=1), -1.0, 1.0))
    s = 0.5 * (ta + tb + tc)
    prod = (
        np.tan(0.5 * s)
        * np.tan(0.5 * (s - ta))
        * np.tan(0.5 * (s - tb))
        * np.tan(0.5 * (s - tc))
    )
    return 4.0 * np.arctan(np.sqrt(np.clip(prod, 0.0, None)))


def random_directions(n, m, seed):
    rng = np.random.default_rng(seed)
    return _normalize_rows(rng.standard_normal((m, n)))


@lru_cache(maxsize=1)
def _vertex_mesh_rotation():
    # Fixed rotation keeping vertex meshes off the centroid nodes.
    from scipy.spatial.transform import Rotation

    return Rotation.from_euler("zyx", [0.3, 0.7, 1.1]).as_matrix()


def sphere_mesh(n, resolution=None, seed=0):
    """Centroid/grid quadrature rule on S^{n-1}.

    ``resolution`` is the node count for n = 2, the icosahedral subdivision
    level for n = 3 and the Monte Carlo sample size for n >= 4.
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if resolution is None:
        resolution = default_resolution(n)
    if resolution < 1 and n != 3:
        raise ValueError("resolution must be >= 1")
    total = sphere_measure(n)
    if n == 2:
        m = int(resolution)
        ang = 2.0 * math.pi * np.arange(m) / m
        nodes = np.column_stack([np.cos(ang), np.sin(ang)])
        return SphereMesh(nodes, np.full(m, total / m), "grid")
    if n == 3:
        verts, faces = icosphere(resolution)
        a, b, c = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
        nodes = _normalize_rows(a + b + c)
        w = spherical_triangle_area(a, b, c)
        w *= total / psum(w)
        return SphereMesh(nodes, w, "icosahedral")
    m = int(resolution)
    nodes = random_directions(n, m, seed)
    return SphereMesh(nodes, np.full(m, total / m), "montecarlo")


def vertex_mesh(resolution=None):
    """Rotated icosphere vertices and triangles, used to build boundary meshes in R^3."""
    if resolution is None:
        resolution = default_resolution(3)
    verts, faces = icosphere(resolution)
    return verts @ _vertex_mesh_rotation().T, faces


def offset_circle(resolution=None):
    """Equiangular circle nodes shifted by half a step from ``sphere_mesh(2, ...)``."""
    if resolution is None:
        resolution = default_resolution(2)
    m = int(resolution)
    ang = 2.0 * math.pi * (np.arange(m) + 0.5) / m
    return np.column_stack([np.cos(ang), np.sin(ang)])
