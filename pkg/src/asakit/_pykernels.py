"""Pure numpy implementations of the pairwise kernels.

These mirror ``_ckernels.pyx`` exactly in the quantities they compute; the
compiled versions exist only because the pairwise loops dominate the
coarea sweeps.
"""
import numpy as np

_CHUNK_ELEMS = 1 << 22
_DEN_FLOOR = 1e-14


def _chunks(rows, cols, width):
    step = max(1, _CHUNK_ELEMS // max(1, cols * width))
    for start in range(0, rows, step):
        yield slice(start, min(rows, start + step))


def enclosing_radii(points, directions, cloud, tol):
    """Smallest ``i`` with ``cloud`` inside ``B[x - i u, i + tol]`` for each (x, u).

    Returns ``inf`` where no finite radius works (u is not a regular normal).
    """
    points = np.ascontiguousarray(points, dtype=float)
    directions = np.ascontiguousarray(directions, dtype=float)
    cloud = np.ascontiguousarray(cloud, dtype=float)
    q, n = points.shape
    out = np.zeros(q)
    y2 = np.einsum("mk,mk->m", cloud, cloud)
    for sl in _chunks(q, cloud.shape[0], 1):
        X, U = points[sl], directions[sl]
        # |y - x|^2 and -<y - x, u> expanded into matrix products
        num = y2[None, :] - 2.0 * (X @ cloud.T) + np.einsum("qk,qk->q", X, X)[:, None] - tol * tol
        gap = np.einsum("qk,qk->q", X, U)[:, None] - U @ cloud.T
        den = 2.0 * (gap + tol)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
        ratio = np.where((den <= 0.0) & (num > 0.0), np.inf, ratio)
        out[sl] = np.maximum(ratio.max(axis=1), 0.0)
    return out


def rolling_radii(points, normals, nodes, node_support, tol):
    """Largest ``r`` with ``<x - r nu, u> + r <= h(u) + tol`` on every node ``u``."""
    points = np.ascontiguousarray(points, dtype=float)
    normals = np.ascontiguousarray(normals, dtype=float)
    nodes = np.ascontiguousarray(nodes, dtype=float)
    node_support = np.ascontiguousarray(node_support, dtype=float)
    q, n = points.shape
    out = np.empty(q)
    for sl in _chunks(q, nodes.shape[0], 1):
        num = node_support[None, :] - points[sl] @ nodes.T + tol
        den = 1.0 - normals[sl] @ nodes.T
        active = den > _DEN_FLOOR
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(active, num / np.where(active, den, 1.0), np.inf)
        r = ratio.min(axis=1)
        r = np.where((num < 0.0).any(axis=1), 0.0, r)
        out[sl] = r
    return out


def vertex_hit_counts(directions, vertices):
    """Count, per vertex, the directions whose support is attained there."""
    directions = np.ascontiguousarray(directions, dtype=float)
    vertices = np.ascontiguousarray(vertices, dtype=float)
    counts = np.zeros(vertices.shape[0], dtype=np.int64)
    for sl in _chunks(directions.shape[0], vertices.shape[0], 1):
        winners = np.argmax(directions[sl] @ vertices.T, axis=1)
        counts += np.bincount(winners, minlength=vertices.shape[0])
    return counts
