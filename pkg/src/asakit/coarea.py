"""Restriction sets (dK)_r and A_i, approximate Jacobians, change-of-variable checks.

Containment of a ball in K (or of K in a ball) is tested through support
values on a node set, with tolerance ``CONTAIN_TOL``.  Thresholds r* and i*
are available both in closed form (from the kernels) and by bisection on
the membership predicates.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .asa import asa_boundary, asa_sphere, check_p, relative_gap
from .convex_body import Polytope
from .curvature import curvature_functions, tangent_basis
from .errors import NonRegularNormal, NonRegularPoint
from .kernels import enclosing_radii, rolling_radii
from .sampling import sample_boundary, sphere_samples
from .sphere import psum, sphere_mesh

CONTAIN_TOL = 1e-9
BISECTION_STEPS = 40
SEARCH_MIN = 1e-6
SEARCH_MAX = 1e6
CAP_RADIUS = 1e-3
CAP_POLYGON = 64


def _nodes(body, resolution, seed):
    U = sphere_mesh(body.dim, resolution, seed).nodes
    if isinstance(body, Polytope):
        # facet normals are the binding constraints for inscribed balls
        U = np.vstack([U, body.facet_normals])
    return U, body.support(U)


def _cloud(body, resolution, seed):
    if isinstance(body, Polytope):
        return body.vertices
    return sample_boundary(body, resolution, seed, mesh="pushforward").x


def _normal_at(body, x):
    try:
        return body.gauss(np.asarray(x, dtype=float))
    except NonRegularPoint:
        return None


# ---------------------------------------------------------------- (dK)_r


def in_rolling_ball_set(body, x, r, resolution=None, seed=0, tol=CONTAIN_TOL, nodes=None):
    """Whether B(x - r nu(x), r) lies in K (tested on sphere nodes).

    Non-regular polytope points (vertices, edges) are never in the set.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    nu = _normal_at(body, x)
    if nu is None:
        return False
    U, h = nodes if nodes is not None else _nodes(body, resolution, seed)
    c = np.asarray(x, dtype=float) - r * nu
    return bool(np.all(U @ c + r <= h + tol))


def rolling_radius(body, x, resolution=None, seed=0, tol=CONTAIN_TOL, nodes=None):
    """Closed-form largest r with x in (dK)_r (0 for non-regular points)."""
    nu = _normal_at(body, x)
    if nu is None:
        return 0.0
    U, h = nodes if nodes is not None else _nodes(body, resolution, seed)
    return float(rolling_radii(np.atleast_2d(x), nu[None], U, h, tol)[0])


def rolling_threshold_bisection(body, x, resolution=None, seed=0, tol=CONTAIN_TOL, steps=BISECTION_STEPS):
    """Largest r with x in (dK)_r, by bisection on the membership test.

    Returns 0 when even r = SEARCH_MIN fails and ``inf`` when SEARCH_MAX passes.
    """
    nodes = _nodes(body, resolution, seed)

    def member(r):
        return in_rolling_ball_set(body, x, r, tol=tol, nodes=nodes)

    if not member(SEARCH_MIN):
        return 0.0
    lo, hi = SEARCH_MIN, 1.0
    while member(hi):
        lo, hi = hi, 2.0 * hi
        if hi > SEARCH_MAX:
            return math.inf
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if member(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ------------------------------------------------------------------- A_i


def _exposed(body, u):
    """tau_K(u), or None for a non-regular normal."""
    try:
        return body.support_gradient(np.asarray(u, dtype=float))
    except NonRegularNormal:
        return None


def in_enclosing_ball_set(body, u, i, resolution=None, seed=0, tol=CONTAIN_TOL, cloud=None):
    """Whether K lies in B[tau_K(u) - i u, i] (tested on a boundary point cloud).

    Non-regular normals are never in the set.
    """
    if i <= 0:
        raise ValueError("i must be positive")
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    x = _exposed(body, u)
    if x is None:
        return False
    Y = cloud if cloud is not None else _cloud(body, resolution, seed)
    c = x - i * u
    return bool(np.max(np.linalg.norm(Y - c, axis=1)) <= i + tol)


def enclosing_radius(body, u, resolution=None, seed=0, tol=CONTAIN_TOL, cloud=None):
    """Closed-form smallest i with u in A_i (``inf`` for non-regular u)."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    x = _exposed(body, u)
    if x is None:
        return math.inf
    Y = cloud if cloud is not None else _cloud(body, resolution, seed)
    return float(enclosing_radii(x[None], u[None], Y, tol)[0])


def enclosing_threshold_bisection(body, u, resolution=None, seed=0, tol=CONTAIN_TOL, steps=BISECTION_STEPS):
    """Smallest i with u in A_i, by bisection on the membership test."""
    cloud = _cloud(body, resolution, seed)

    def member(i):
        return in_enclosing_ball_set(body, u, i, tol=tol, cloud=cloud)

    if member(SEARCH_MIN):
        return SEARCH_MIN
    lo, hi = SEARCH_MIN, 1.0
    while not member(hi):
        lo, hi = hi, 2.0 * hi
        if hi > SEARCH_MAX:
            return math.inf
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if member(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _all_enclosing_radii(body, U, cloud, tol=CONTAIN_TOL):
    if isinstance(body, Polytope):
        idx, regular = body.exposed_vertices(U)
        X = body.vertices[idx]
        out = enclosing_radii(X, U, cloud, tol)
        out[~regular] = math.inf
        return out
    return enclosing_radii(body.support_gradient(U), U, cloud, tol)


# ------------------------------------------------------------- reports


@dataclass(frozen=True)
class RestrictionSetReport:
    parameter: float
    fraction_covered: float
    membership: np.ndarray

    def to_dict(self):
        return {"parameter": self.parameter, "fraction_covered": self.fraction_covered}


def rolling_ball_set_reports(body, radii, resolution=None, seed=0, tol=CONTAIN_TOL):
    """(dK)_r membership of every boundary sample, for each r in ``radii``."""
    s = sample_boundary(body, resolution, seed)
    U, h = _nodes(body, resolution, seed)
    rstar = rolling_radii(s.x, s.nu, U, h, tol)
    total = psum(s.weight)
    out = []
    for r in radii:
        member = rstar >= r
        out.append(RestrictionSetReport(float(r), psum(s.weight * member) / total, member))
    return out


def enclosing_set_reports(body, ladder, resolution=None, seed=0, tol=CONTAIN_TOL):
    """A_i membership of every sphere node, for each i in ``ladder``."""
    m = sphere_mesh(body.dim, resolution, seed)
    istar = _all_enclosing_radii(body, m.nodes, _cloud(body, resolution, seed), tol)
    total = psum(m.weights)
    out = []
    for i in ladder:
        member = istar <= i
        out.append(RestrictionSetReport(float(i), psum(m.weights * member) / total, member))
    return out


def jacobian_estimate(body, u, cap_radius=CAP_RADIUS, polygon=CAP_POLYGON):
    """Area distortion of tau_K on a small cap around ``u``.

    n = 2: chord ratio over an arc; n >= 3: ratio of the areas, projected
    to u^perp, of the image of a cap polygon and of the polygon itself
    (n = 3) or of the finite-difference parallelotope (n >= 4).
    """
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    n = u.size
    E = tangent_basis(u)
    rho = cap_radius
    if n == 2:
        q = np.cos(rho) * u[None] + np.sin(rho) * np.array([[1.0], [-1.0]]) * E[:, 0][None]
        X = body.support_gradient(q)
        return float(np.linalg.norm(X[0] - X[1]) / np.linalg.norm(q[0] - q[1]))
    if n == 3:
        th = 2.0 * np.pi * np.arange(polygon) / polygon
        q = np.cos(rho) * u[None] + np.sin(rho) * (np.cos(th)[:, None] * E[:, 0] + np.sin(th)[:, None] * E[:, 1])
        X = body.support_gradient(q)
        return _shoelace(X @ E) / _shoelace(q @ E)
    cols = []
    for k in range(n - 1):
        q = np.cos(rho) * u[None] + np.sin(rho) * np.array([[1.0], [-1.0]]) * E[:, k][None]
        X = body.support_gradient(q)
        cols.append((X[0] - X[1]) @ E / (2.0 * np.sin(rho)))
    return float(abs(np.linalg.det(np.array(cols))))


def _shoelace(P):
    x, y = P[:, 0], P[:, 1]
    return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


# ------------------------------------------------------ change of variable


def random_test_functions(n, count=5, seed=0, amplitude=0.4, kind="g"):
    """Seeded smooth positive functions, each exp(sum of a few plane waves).

    kind ``"g"`` gives callables g(x, nu) of the boundary point; kind ``"h"``
    gives callables h(u) of the direction.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        freq = rng.normal(size=(3, n))
        phase = rng.uniform(0.0, 2.0 * np.pi, size=3)
        amp = amplitude * rng.uniform(0.3, 1.0, size=3)

        def f(X, freq=freq, phase=phase, amp=amp):
            return np.exp(np.sin(np.atleast_2d(X) @ freq.T + phase) @ amp)

        if kind == "g":
            out.append(lambda x, nu, f=f: f(x))
        else:
            out.append(f)
    return out


def minimizer_test_function(body, p):
    """g*(x) = h(nu)^{(p-1)/(n+p)} H(x)^{1/(n+p)} as a callable g(x, nu)."""
    n = body.dim

    def g(x, nu):
        F = curvature_functions(body, nu)
        return body.support(nu) ** ((p - 1.0) / (n + p)) * F ** (-1.0 / (n + p))

    return g


def constant_function(c=1.0):
    def f(*args):
        return np.full(np.atleast_2d(args[0]).shape[0], float(c))

    return f


@dataclass
class IdentityCheck:
    identity: str
    index: int
    lhs: float
    rhs: float

    @property
    def rel_gap(self):
        return relative_gap(self.lhs, self.rhs)

    def to_dict(self):
        return {"identity": self.identity, "index": self.index, "lhs": self.lhs, "rhs": self.rhs, "rel_gap": self.rel_gap}


@dataclass
class ChangeOfVariableReport:
    p: float
    checks: list = field(default_factory=list)

    @property
    def max_gap(self):
        return max((c.rel_gap for c in self.checks), default=0.0)

    def passed(self, tol):
        return self.max_gap <= tol

    def to_dict(self):
        return {"p": self.p, "max_rel_gap": self.max_gap, "checks": [c.to_dict() for c in self.checks]}


def verify_change_of_variable(body, p, resolution=None, seed=0, g_functions=None, h_functions=None, count=5):
    """Both sides of the g- and h-change-of-variable identities on independent meshes.

    g-pair: int_{H+} g^{-n} H dH over the boundary = int_{F+} g(tau(u))^{-n} du.
    h-pair: int_{F+} h^{-p} h_K^{1-p} F du = int_{H+} h(nu)^{-p} h_K(nu)^{1-p} dH.
    Test functions default to ``count`` seeded random smooth positive functions.
    """
    p = check_p(p)
    n = body.dim
    if g_functions is None:
        g_functions = random_test_functions(n, count, seed, kind="g")
    if h_functions is None:
        h_functions = random_test_functions(n, count, seed + 1000, kind="h")
    b = sample_boundary(body, resolution, seed, mesh="independent")
    s = sphere_samples(body, resolution, seed)
    bp, sp = b.in_H_plus, s.in_F_plus
    tau = body.support_gradient(s.u[sp])
    report = ChangeOfVariableReport(p)
    for k, g in enumerate(g_functions):
        lhs = psum(g(b.x[bp], b.nu[bp]) ** (-float(n)) * b.H[bp] * b.weight[bp])
        rhs = psum(g(tau, s.u[sp]) ** (-float(n)) * s.weight[sp])
        report.checks.append(IdentityCheck("g", k, lhs, rhs))
    for k, h in enumerate(h_functions):
        lhs = psum(h(s.u[sp]) ** (-p) * s.h[sp] ** (1.0 - p) * s.F[sp] * s.weight[sp])
        rhs = psum(h(b.nu[bp]) ** (-p) * b.h_at_nu[bp] ** (1.0 - p) * b.weight[bp])
        report.checks.append(IdentityCheck("h", k, lhs, rhs))
    return report


DEFAULT_LADDER = tuple(2.0**k for k in range(-3, 11))


@dataclass
class SphereBoundaryReport:
    p: float
    sphere_value: float
    boundary_value: float
    ladder: list
    sphere_partial: list
    boundary_partial: list

    @property
    def rel_gap(self):
        return relative_gap(self.sphere_value, self.boundary_value)

    @property
    def monotone(self):
        ok = all(b >= a for a, b in zip(self.sphere_partial, self.sphere_partial[1:]))
        return ok and all(b >= a for a, b in zip(self.boundary_partial, self.boundary_partial[1:]))

    @property
    def final_partial_gap(self):
        return relative_gap(self.sphere_partial[-1], self.boundary_partial[-1])

    def to_dict(self):
        return {
            "p": self.p,
            "sphere_value": self.sphere_value,
            "boundary_value": self.boundary_value,
            "rel_gap": self.rel_gap,
            "monotone": self.monotone,
            "ladder": [
                {"i": i, "sphere_partial": a, "boundary_partial": b}
                for i, a, b in zip(self.ladder, self.sphere_partial, self.boundary_partial)
            ],
        }


def verify_sphere_boundary_equality(body, p, resolution=None, seed=0, ladder=DEFAULT_LADDER):
    """Sphere integral vs boundary integral, plus partial sums over A_i.

    The sphere side sums over nodes u in A_i; the boundary side over
    samples x with nu(x) in A_i.
    """
    p = check_p(p)
    n = body.dim
    s = sphere_samples(body, resolution, seed)
    b = sample_boundary(body, resolution, seed, mesh="independent")
    cloud = _cloud(body, resolution, seed)
    sph = asa_sphere(body, p, samples=s)
    bnd = asa_boundary(body, p, samples=b)
    with np.errstate(divide="ignore"):
        fs = np.where(s.in_F_plus, s.F ** (n / (n + p)) * s.h ** (-(p - 1.0) * n / (n + p)), 0.0)
        fb = np.where(b.in_H_plus, b.H ** (p / (n + p)) * b.h_at_nu ** (-(p - 1.0) * n / (n + p)), 0.0)
    i_s = _all_enclosing_radii(body, s.u, cloud)
    i_b = _all_enclosing_radii(body, b.nu, cloud)
    ladder = [float(i) for i in ladder]
    sp = [psum(fs * s.weight * (i_s <= i)) for i in ladder]
    bp = [psum(fb * b.weight * (i_b <= i)) for i in ladder]
    return SphereBoundaryReport(p, sph, bnd, ladder, sp, bp)
