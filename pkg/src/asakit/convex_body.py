"""Convex bodies described by their support functions.

Every variant evaluates the 1-homogeneous extension of its support function
(and its gradient and Hessian where they exist) on arbitrary nonzero
vectors, so linear images can delegate to the base body at ``phi^T u``
without renormalizing.  Array arguments are rows of directions.
"""
from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    HessianUnavailable,
    InvalidBody,
    NonRegularNormal,
    NonRegularPoint,
    SingularMatrix,
)
from . import sphere as _sphere

UNIT_TOL = 1e-12
# Two vertices whose support values differ by less than this expose a face.
TIE_TOL = 1e-10
FACET_TOL = 1e-9
GRADIENT_STEP = 1e-5
HESSIAN_STEP = 1e-4
ASYMMETRY_TOL = 1e-4


def _rows(u):
    a = np.asarray(u, dtype=float)
    return a.reshape(1, -1) if a.ndim == 1 else a


def _unit(u):
    u = np.asarray(u, dtype=float)
    norm = np.linalg.norm(u)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("direction must be a nonzero finite vector")
    return u / norm


def direction(coords):
    """Normalize ``coords`` to a unit vector (a :class:`Direction`)."""
    return _unit(coords)


class ConvexBody:
    """Base class; subclasses implement the ``_support*`` row kernels."""

    dim: int
    smooth = True

    # -- row kernels (X has shape (m, n), rows nonzero) --------------------
    def _support(self, X):
        raise NotImplementedError

    def _gradient(self, X):
        raise NotImplementedError

    def _hessian(self, X):
        raise HessianUnavailable(f"{type(self).__name__} has no support Hessian")

    # -- public vectorized API ---------------------------------------------
    def support(self, u):
        """Support value h_K(u); accepts one vector or an (m, n) array."""
        X = _rows(u)
        self._check_dim(X)
        out = self._support(X)
        return float(out[0]) if np.ndim(u) == 1 else out

    def support_gradient(self, u):
        X = _rows(u)
        self._check_dim(X)
        out = self._gradient(X)
        return out[0] if np.ndim(u) == 1 else out

    def support_hessian(self, u):
        X = _rows(u)
        self._check_dim(X)
        out = self._hessian(X)
        return out[0] if np.ndim(u) == 1 else out

    def _check_dim(self, X):
        if X.shape[1] != self.dim:
            raise ValueError(f"expected {self.dim}-dimensional vectors, got {X.shape[1]}")

    def gauss(self, x):
        raise NotImplementedError

    def contains(self, x, tol=1e-9, mesh=None):
        """Approximate membership test: <x, u> <= h(u) + tol on sphere nodes."""
        if mesh is None:
            mesh = _sphere.sphere_mesh(self.dim, 3 if self.dim == 3 else None)
        U = mesh.nodes
        return bool(np.all(U @ np.asarray(x, dtype=float) <= self._support(U) + tol))


@dataclass(frozen=True, eq=False)
class Ball(ConvexBody):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.array(self.center, dtype=float).reshape(-1)
        if c.size < 2:
            raise InvalidBody("dimension must be >= 2")
        if not self.radius > 0:
            raise InvalidBody("radius must be > 0")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self):
        return self.center.size

    def _support(self, X):
        return X @ self.center + self.radius * np.linalg.norm(X, axis=1)

    def _gradient(self, X):
        return self.center + self.radius * X / np.linalg.norm(X, axis=1, keepdims=True)

    def _hessian(self, X):
        norm = np.linalg.norm(X, axis=1)
        U = X / norm[:, None]
        eye = np.eye(self.dim)
        return self.radius * (eye - U[:, :, None] * U[:, None, :]) / norm[:, None, None]

    def gauss(self, x):
        return _unit(np.asarray(x, dtype=float) - self.center)


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexBody):
    """Ellipsoid ``center + rotation @ diag(semi_axes) @ B^n``."""

    semi_axes: np.ndarray
    rotation: np.ndarray = None
    center: np.ndarray = None

    def __post_init__(self):
        a = np.array(self.semi_axes, dtype=float).reshape(-1)
        n = a.size
        if n < 2:
            raise InvalidBody("dimension must be >= 2")
        if not np.all(a > 0):
            raise InvalidBody("semi-axes must be > 0")
        R = np.eye(n) if self.rotation is None else np.array(self.rotation, dtype=float)
        if R.shape != (n, n) or not np.allclose(R @ R.T, np.eye(n), atol=1e-9):
            raise InvalidBody("rotation must be an orthogonal n x n matrix")
        c = np.zeros(n) if self.center is None else np.array(self.center, dtype=float).reshape(-1)
        if c.size != n:
            raise InvalidBody("center has wrong dimension")
        object.__setattr__(self, "semi_axes", a)
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "center", c)

    @property
    def dim(self):
        return self.semi_axes.size

    @cached_property
    def shape_matrix(self):
        """M = R diag(a^2) R^T, so that h(u) = sqrt(u^T M u) + <c, u>."""
        R = self.rotation
        return (R * self.semi_axes**2) @ R.T

    @cached_property
    def _inverse_shape(self):
        R = self.rotation
        return (R / self.semi_axes**2) @ R.T

    def _support(self, X):
        M = self.shape_matrix
        return np.sqrt(np.einsum("mi,ij,mj->m", X, M, X)) + X @ self.center

    def _gradient(self, X):
        MX = X @ self.shape_matrix
        q = np.sqrt(np.einsum("mi,mi->m", X, MX))
        return self.center + MX / q[:, None]

    def _hessian(self, X):
        M = self.shape_matrix
        MX = X @ M
        q = np.sqrt(np.einsum("mi,mi->m", X, MX))
        return M[None] / q[:, None, None] - MX[:, :, None] * MX[:, None, :] / q[:, None, None] ** 3

    def gauss(self, x):
        y = np.asarray(x, dtype=float) - self.center
        return _unit(self._inverse_shape @ y)


def _simplex_volume(points):
    """(k)-dimensional volume of the simplex spanned by k+1 points in R^n."""
    G = (points[1:] - points[0]).T
    k = G.shape[1]
    gram = G.T @ G
    return math.sqrt(max(np.linalg.det(gram), 0.0)) / math.factorial(k)


@dataclass(frozen=True)
class Facet:
    normal: np.ndarray
    offset: float
    vertices: tuple
    area: float
    simplices: tuple


class Polytope(ConvexBody):
    """Convex hull of a finite vertex set with nonempty interior.

    The facet structure is computed with qhull; coplanar simplices are
    merged into facets.  A user-supplied facet list is checked against it.
    """

    smooth = False

    def __init__(self, vertices, facets=None):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] < 2:
            raise InvalidBody("vertices must be an (m, n) array with n >= 2")
        n = V.shape[1]
        if V.shape[0] <= n or np.linalg.matrix_rank(V[1:] - V[0], tol=1e-10) < n:
            raise InvalidBody("vertices do not span R^n (empty interior)")
        try:
            hull = ConvexHull(V)
        except QhullError as exc:
            raise InvalidBody(f"hull computation failed: {exc}") from exc
        extreme = set(int(i) for i in hull.vertices)
        if len(extreme) != V.shape[0]:
            missing = sorted(set(range(V.shape[0])) - extreme)
            raise InvalidBody(f"points {missing} are not vertices of the hull")
        self.vertices = V
        self.vertices.setflags(write=False)
        self.facets = self._group_facets(V, hull)
        if facets is not None:
            given = sorted(tuple(sorted(int(i) for i in f)) for f in facets)
            found = sorted(f.vertices for f in self.facets)
            if given != found:
                raise InvalidBody("supplied facets do not match the convex hull")

    @property
    def dim(self):
        return self.vertices.shape[1]

    @staticmethod
    def _group_facets(V, hull):
        groups = []
        for simplex, eq in zip(hull.simplices, hull.equations):
            normal, offset = eq[:-1], -eq[-1]
            for g in groups:
                if np.linalg.norm(g["normal"] - normal) < FACET_TOL and abs(g["offset"] - offset) < FACET_TOL:
                    g["simplices"].append(tuple(int(i) for i in simplex))
                    break
            else:
                groups.append({"normal": normal, "offset": offset, "simplices": [tuple(int(i) for i in simplex)]})
        facets = []
        for g in groups:
            normal = g["normal"] / np.linalg.norm(g["normal"])
            on = np.abs(V @ normal - g["offset"]) < FACET_TOL
            area = sum(_simplex_volume(V[list(s)]) for s in g["simplices"])
            facets.append(
                Facet(normal, float(g["offset"]), tuple(int(i) for i in np.flatnonzero(on)), area, tuple(g["simplices"]))
            )
        facets.sort(key=lambda f: f.vertices)
        return tuple(facets)

    @cached_property
    def facet_normals(self):
        return np.array([f.normal for f in self.facets])

    @cached_property
    def facet_areas(self):
        return np.array([f.area for f in self.facets])

    @cached_property
    def vertex_facets(self):
        """Indices of the facets incident to each vertex."""
        inc = [[] for _ in range(self.vertices.shape[0])]
        for k, f in enumerate(self.facets):
            for v in f.vertices:
                inc[v].append(k)
        return tuple(tuple(x) for x in inc)

    def _support(self, X):
        return np.max(X @ self.vertices.T, axis=1)

    def exposed_vertices(self, X):
        """Index of the maximizing vertex per row and a regularity mask."""
        vals = X @ self.vertices.T
        order = np.argsort(-vals, axis=1)
        top = np.take_along_axis(vals, order[:, :2], axis=1)
        regular = (top[:, 0] - top[:, 1]) > TIE_TOL
        return order[:, 0], regular

    def _gradient(self, X):
        idx, regular = self.exposed_vertices(X)
        if not np.all(regular):
            raise NonRegularNormal("direction exposes a face of dimension >= 1")
        return self.vertices[idx]

    def gauss(self, x):
        x = np.asarray(x, dtype=float)
        resid = self.facet_normals @ x - np.array([f.offset for f in self.facets])
        if np.any(resid > FACET_TOL):
            raise ValueError("point lies outside the polytope")
        active = np.flatnonzero(np.abs(resid) <= FACET_TOL)
        if active.size == 0:
            raise ValueError("point is interior, not on the boundary")
        if active.size > 1:
            raise NonRegularPoint("point lies on a face of dimension < n-1")
        return self.facets[active[0]].normal.copy()

    @cached_property
    def surface_area(self):
        return float(np.sum(self.facet_areas))


class SupportOracle(ConvexBody):
    """Body given by a support function on unit directions.

    ``h`` maps an (m, n) array of unit vectors to (m,) values.  Optional
    ``gradient`` and ``hessian`` return the derivatives of the 1-homogeneous
    extension at unit vectors; missing derivatives are replaced by central
    finite differences.
    """

    def __init__(self, h, dim, gradient=None, hessian=None, name="oracle"):
        if dim < 2:
            raise InvalidBody("dimension must be >= 2")
        self._h = h
        self._dim = int(dim)
        self._grad = gradient
        self._hess = hessian
        self.name = name

    @property
    def dim(self):
        return self._dim

    @property
    def analytic_hessian(self):
        return self._hess is not None

    def _support(self, X):
        norm = np.linalg.norm(X, axis=1)
        return norm * np.asarray(self._h(X / norm[:, None]), dtype=float)

    def _gradient(self, X):
        norm = np.linalg.norm(X, axis=1, keepdims=True)
        U = X / norm
        if self._grad is not None:
            return np.asarray(self._grad(U), dtype=float)
        m, n = U.shape
        s = GRADIENT_STEP
        eye = np.eye(n)
        plus = (U[:, None, :] + s * eye[None]).reshape(-1, n)
        minus = (U[:, None, :] - s * eye[None]).reshape(-1, n)
        return ((self._support(plus) - self._support(minus)) / (2 * s)).reshape(m, n)

    def _hessian(self, X):
        norm = np.linalg.norm(X, axis=1)
        U = X / norm[:, None]
        if self._hess is not None:
            Hs = np.asarray(self._hess(U), dtype=float)
        else:
            Hs = self._fd_hessian(U)
            asym = np.max(np.abs(Hs - np.swapaxes(Hs, 1, 2)), axis=(1, 2))
            if np.any(asym > ASYMMETRY_TOL) or not np.all(np.isfinite(Hs)):
                raise HessianUnavailable("finite-difference Hessian is not symmetric")
            Hs = 0.5 * (Hs + np.swapaxes(Hs, 1, 2))
        return Hs / norm[:, None, None]

    def _fd_hessian(self, U):
        m, n = U.shape
        s = HESSIAN_STEP
        eye = np.eye(n)
        if self._grad is not None:
            plus = (U[:, None, :] + s * eye[None]).reshape(-1, n)
            minus = (U[:, None, :] - s * eye[None]).reshape(-1, n)
            d = (self._gradient(plus) - self._gradient(minus)) / (2 * s)
            # row j of d.reshape is derivative along e_j of the gradient
            return np.swapaxes(d.reshape(m, n, n), 1, 2)
        H = np.empty((m, n, n))
        h0 = self._support(U)
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    hp = self._support(U + 2 * s * eye[i])
                    hm = self._support(U - 2 * s * eye[i])
                    H[:, i, i] = (hp - 2 * h0 + hm) / (4 * s * s)
                else:
                    e = s * (eye[i] + eye[j])
                    f = s * (eye[i] - eye[j])
                    val = (
                        self._support(U + e) - self._support(U + f) - self._support(U - f) + self._support(U - e)
                    ) / (4 * s * s)
                    H[:, i, j] = H[:, j, i] = val
        return H

    def _newton_normal(self, x, u, steps):
        """Newton iterations for grad h(u) = x with u on the sphere."""
        for _ in range(steps):
            r = self._gradient(u[None])[0] - x
            E = np.linalg.svd(u[None])[2][1:].T
            B = E.T @ self._hessian(u[None])[0] @ E
            try:
                step = E @ np.linalg.solve(B, E.T @ r)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)) or np.linalg.norm(step) > 0.5:
                break
            u = _unit(u - step)
            if np.linalg.norm(step) < 1e-15:
                break
        return u

    def _residual(self, x, u):
        return np.linalg.norm(self._gradient(u[None])[0] - x)

    def gauss(self, x):
        """Normal at ``x``: Newton from x/|x|, falling back to minimizing h(u) - <u, x> by BFGS."""
        from scipy.optimize import minimize

        x = np.asarray(x, dtype=float)
        size = max(1.0, np.linalg.norm(x))
        start = x / np.linalg.norm(x) if np.linalg.norm(x) > 0 else np.eye(self.dim)[0]
        u = self._newton_normal(x, start, 30)
        if self._residual(x, u) > 1e-12 * size:

            def gap(v):
                w = v / np.linalg.norm(v)
                return self._support(w[None])[0] - w @ x

            res = minimize(gap, start, method="BFGS", options={"gtol": 1e-12})
            # BFGS alone stalls near 1e-8; polish
            u = self._newton_normal(x, _unit(res.x), 4)
        if self._residual(x, u) > 1e-5 * size:
            raise NonRegularPoint("could not locate a unique outer normal at x")
        return u


class Transformed(ConvexBody):
    """Affine image ``linear @ base + translation`` of a smooth body."""

    def __init__(self, base, linear, translation=None):
        A = np.array(linear, dtype=float)
        n = base.dim
        if A.shape != (n, n):
            raise InvalidBody("linear map must be n x n")
        if abs(np.linalg.det(A)) < 1e-14 or not np.isfinite(np.linalg.cond(A)) or np.linalg.cond(A) > 1e12:
            raise SingularMatrix("linear map is singular")
        t = np.zeros(n) if translation is None else np.array(translation, dtype=float).reshape(-1)
        if t.size != n:
            raise InvalidBody("translation has wrong dimension")
        self.base = base
        self.linear = A
        self.translation = t
        self._inv_t = np.linalg.inv(A).T

    @property
    def dim(self):
        return self.base.dim

    @property
    def smooth(self):
        return self.base.smooth

    def _support(self, X):
        return self.base._support(X @ self.linear) + X @ self.translation

    def _gradient(self, X):
        return self.base._gradient(X @ self.linear) @ self.linear.T + self.translation

    def _hessian(self, X):
        Hb = self.base._hessian(X @ self.linear)
        return self.linear @ Hb @ self.linear.T

    def gauss(self, x):
        x0 = np.linalg.solve(self.linear, np.asarray(x, dtype=float) - self.translation)
        return _unit(self._inv_t @ self.base.gauss(x0))


# -- module-level operations ------------------------------------------------

def support(body, u):
    """h_K(u) for a single direction or an (m, n) array of directions."""
    return body.support(u)


def inverse_gauss(body, u):
    """The boundary point with outer normal ``u`` (gradient of h_K at u)."""
    u = _unit(u)
    return body.support_gradient(u)


def gauss(body, x):
    """Unique outer unit normal at the regular boundary point ``x``."""
    return body.gauss(np.asarray(x, dtype=float))


def apply_linear(body, linear, translation=None):
    """Image ``linear @ body + translation``.

    Polytopes map their vertices; smooth bodies become :class:`Transformed`
    (nested transforms are composed).
    """
    A = np.array(linear, dtype=float)
    n = body.dim
    if A.shape != (n, n):
        raise InvalidBody("linear map must be n x n")
    if abs(np.linalg.det(A)) < 1e-14:
        raise SingularMatrix("linear map is singular")
    t = np.zeros(n) if translation is None else np.asarray(translation, dtype=float)
    if isinstance(body, Polytope):
        return Polytope(body.vertices @ A.T + t)
    if isinstance(body, Transformed):
        return Transformed(body.base, A @ body.linear, A @ body.translation + t)
    return Transformed(body, A, t)


def scale(body, factor):
    return apply_linear(body, factor * np.eye(body.dim))


def translate(body, t):
    return apply_linear(body, np.eye(body.dim), t)


def cube(n=3, side=1.0):
    """Axis-parallel cube [-side/2, side/2]^n as a polytope."""
    corners = np.array(np.meshgrid(*[[-0.5, 0.5]] * n, indexing="ij")).reshape(n, -1).T
    return Polytope(side * corners)


def regular_simplex(n=3):
    """Regular simplex with vertices on the unit sphere, centered at the origin."""
    E = np.eye(n + 1) - 1.0 / (n + 1)
    # orthonormal basis of the hyperplane sum(x) = 0
    Q, _ = np.linalg.qr(E[:, :n])
    V = E @ Q
    return Polytope(V / np.linalg.norm(V[0]))


def random_simplex(n=3, seed=0):
    """Seeded random simplex containing the origin in its interior."""
    rng = np.random.default_rng(seed)
    while True:
        V = rng.standard_normal((n + 1, n))
        V -= V.mean(axis=0)
        try:
            body = Polytope(V)
        except InvalidBody:
            continue
        if np.min([f.offset for f in body.facets]) > 0.05:
            return body


def check_sublinear(body, m=1000, seed=0, tol=1e-9):
    """Spot-check h(u + v) <= h(u) + h(v) on ``m`` seeded random pairs."""
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((m, body.dim))
    V = rng.standard_normal((m, body.dim))
    lhs = body.support(U + V)
    rhs = body.support(U) + body.support(V)
    return bool(np.all(lhs <= rhs + tol))
