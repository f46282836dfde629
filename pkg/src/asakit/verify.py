"""Property harness: homogeneity, GL covariance, polytope degeneracy,
mixed-volume and isoperimetric inequalities, upper semicontinuity demo.

Every check returns a :class:`PropertyResult`.  Tolerances are the named
constants below and can be overridden per call (or through the CLI).
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .asa import asa_boundary, check_p
from .convex_body import Ball, Ellipsoid, Polytope, SupportOracle, Transformed, apply_linear, cube, random_simplex, scale, translate
from .errors import HullUnavailable
from .measures import centroid, polar_volume, volume
from .sampling import sample_boundary, sphere_samples
from .sphere import ball_volume, icosphere, psum, sphere_measure, sphere_mesh

QUADRATURE_TOL = 0.01
EXACT_TOL = 1e-9
STRICT_SLACK = 0.05
QUARTIC_EPS = 0.3
# property checks integrate on the pushforward boundary mesh; the
# independent mesh is reserved for cross-mesh agreement checks
VERIFY_MESH = "pushforward"

DEFAULT_TOLERANCES = {
    "quadrature": QUADRATURE_TOL,
    "exact": EXACT_TOL,
    "strict_slack": STRICT_SLACK,
}


@dataclass
class PropertyResult:
    """Outcome of one check.  ``passed`` follows ``relation`` and ``tolerance``:

    eq: |lhs - rhs| <= tol * max(|lhs|, |rhs|, 1);  le: lhs <= rhs * (1 + tol).
    """

    name: str
    lhs: float
    rhs: float
    relation: str
    tolerance: float

    def __post_init__(self):
        if self.relation not in ("eq", "le"):
            raise ValueError("relation must be 'eq' or 'le'")
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)

    @property
    def rel_gap_or_slack(self):
        """Relative gap for eq; relative slack (rhs - lhs) / |rhs| for le."""
        if self.relation == "eq":
            return abs(self.lhs - self.rhs) / max(abs(self.lhs), abs(self.rhs), 1.0)
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else -math.inf
        return (self.rhs - self.lhs) / abs(self.rhs)

    @property
    def passed(self):
        if self.relation == "eq":
            return abs(self.lhs - self.rhs) <= self.tolerance * max(abs(self.lhs), abs(self.rhs), 1.0)
        return self.lhs <= self.rhs * (1.0 + self.tolerance)

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "rel_gap_or_slack": self.rel_gap_or_slack,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


# ------------------------------------------------------------------ bodies


def _quartic_parts(eps):
    def h(U):
        return 1.0 + eps * np.sum(U**4, axis=1)

    def grad(U):
        S = np.sum(U**4, axis=1, keepdims=True)
        return U + eps * (4.0 * U**3 - 3.0 * S * U)

    def hess(U):
        m, n = U.shape
        S = np.sum(U**4, axis=1)[:, None, None]
        I = np.eye(n)[None]
        uu = U[:, :, None] * U[:, None, :]
        u3u = (U**3)[:, :, None] * U[:, None, :]
        q = 12.0 * (U**2)[:, :, None] * I - 12.0 * (u3u + np.swapaxes(u3u, 1, 2)) + 15.0 * S * uu - 3.0 * S * I
        return I - uu + eps * q

    return h, grad, hess


def quartic_body(n=3, eps=QUARTIC_EPS, analytic=True):
    """Support oracle h(u) = 1 + eps * sum u_i^4: smooth, centrally symmetric, not an ellipsoid.

    The 1-homogeneous extension is |x| + eps * sum x_i^4 / |x|^3; with
    ``analytic`` its exact gradient and Hessian are supplied, otherwise
    finite differences are used.
    """
    h, grad, hess = _quartic_parts(eps)
    if analytic:
        return SupportOracle(h, n, gradient=grad, hessian=hess, name=f"quartic_{eps}")
    return SupportOracle(h, n, name=f"quartic_{eps}_fd")


def standard_bodies(n=3, seed=0):
    """The named test bodies of the verification grid, in fixed order."""
    o = np.zeros(n)
    axes_a = np.array([1.0, 2.0, 3.0][:n]) if n != 2 else np.array([1.0, 2.0])
    axes_b = np.array(([1.0] * (n - 1)) + [4.0])
    return {
        "unit_ball": Ball(o, 1.0),
        "ball_r2": Ball(o, 2.0),
        "ellipsoid_" + "".join(str(int(a)) for a in axes_a): Ellipsoid(axes_a),
        "ellipsoid_" + "".join(str(int(a)) for a in axes_b): Ellipsoid(axes_b),
        "cube": cube(n),
        "random_simplex": random_simplex(n, seed),
    }


def is_ellipsoidal(body):
    while isinstance(body, Transformed):
        body = body.base
    return isinstance(body, (Ball, Ellipsoid))


def _omega(body, p, resolution, seed):
    return asa_boundary(body, p, resolution, seed, mesh=VERIFY_MESH)


# ------------------------------------------------------------------ checks


def homogeneity_exponent(n, p):
    return n * (n - p) / (n + p)


def gl_exponent(n, p):
    return (n - p) / (n + p)


def check_homogeneity(body, p, lam, resolution=None, seed=0, tol=QUADRATURE_TOL, name="homogeneity"):
    """Omega_p(lam K) against lam^{n(n-p)/(n+p)} Omega_p(K)."""
    p = check_p(p)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    lhs = _omega(scale(body, lam), p, resolution, seed)
    rhs = lam ** homogeneity_exponent(body.dim, p) * _omega(body, p, resolution, seed)
    return PropertyResult(name, lhs, rhs, "eq", tol)


def check_gl_covariance(body, p, phi, resolution=None, seed=0, tol=QUADRATURE_TOL, name="gl_covariance"):
    """Omega_p(phi K) against |det phi|^{(n-p)/(n+p)} Omega_p(K)."""
    p = check_p(p)
    phi = np.asarray(phi, dtype=float)
    image = apply_linear(body, phi)
    lhs = _omega(image, p, resolution, seed)
    rhs = abs(np.linalg.det(phi)) ** gl_exponent(body.dim, p) * _omega(body, p, resolution, seed)
    return PropertyResult(name, lhs, rhs, "eq", tol)


def check_polytope_zero(body, p, resolution=None, seed=0, tol=EXACT_TOL, name="polytope_zero"):
    if not isinstance(body, Polytope):
        raise ValueError("polytope_zero applies to polytopes only")
    return PropertyResult(name, _omega(body, p, resolution, seed), 0.0, "eq", tol)


def check_translation_invariance(body, t, resolution=None, seed=0, tol=QUADRATURE_TOL, name="translation_invariance"):
    """Omega_1(K + t) against Omega_1(K)."""
    lhs = _omega(translate(body, t), 1.0, resolution, seed)
    rhs = _omega(body, 1.0, resolution, seed)
    return PropertyResult(name, lhs, rhs, "eq", tol)


@dataclass
class MixedTerms:
    omega: float
    W: float
    V_p: float
    polar_volume_L: float


def mixed_terms(K, L, p, resolution=None, seed=0, boundary=None, sphere=None):
    """Omega_p(K), W(K, h_L o nu_K), V_p(K, L) and V(L*)."""
    p = check_p(p)
    n = K.dim
    b = boundary if boundary is not None else sample_boundary(K, resolution, seed, mesh=VERIFY_MESH)
    omega = asa_boundary(K, p, samples=b)
    hL_nu = L.support(b.nu)
    plus = b.in_H_plus
    W = psum(hL_nu[plus] ** (-float(n)) * b.H[plus] * b.weight[plus]) / n
    if isinstance(K, Polytope):
        hK = np.array([f.offset for f in K.facets])
        V_p = psum(L.support(K.facet_normals) ** p * hK ** (1.0 - p) * K.facet_areas) / n
    else:
        s = sphere if sphere is not None else sphere_samples(K, resolution, seed)
        V_p = psum(L.support(s.u) ** p * s.h ** (1.0 - p) * s.F * s.weight) / n
    return MixedTerms(omega, W, V_p, polar_volume(L, resolution, seed))


def check_mixed_volume_inequality(K, L, p, resolution=None, seed=0, tol=QUADRATURE_TOL, name="mixed_volume", terms=None):
    """Omega_p(K)/n <= W^{p/(n+p)} V_p(K,L)^{n/(n+p)}, and W <= V(L*).

    Returns the pair ``(mixed, polar_bound)`` of results.
    """
    p = check_p(p)
    n = K.dim
    t = terms if terms is not None else mixed_terms(K, L, p, resolution, seed)
    rhs = t.W ** (p / (n + p)) * t.V_p ** (n / (n + p)) if t.W > 0 and t.V_p > 0 else 0.0
    return (
        PropertyResult(name, t.omega / n, rhs, "le", tol),
        PropertyResult(name + "_polar_bound", t.W, t.polar_volume_L, "le", tol),
    )


def isoperimetric_bound(n, p, vol):
    return n * ball_volume(n) ** (2.0 * p / (n + p)) * vol ** ((n - p) / (n + p))


def centred(body, resolution=None, seed=0):
    """``body`` translated so that its centroid is the origin."""
    c = centroid(body, resolution, seed)
    if isinstance(body, Polytope):
        return Polytope(body.vertices - c)
    return translate(body, -c)


def check_isoperimetric(body, p, resolution=None, seed=0, tol=QUADRATURE_TOL, relation=None, name="isoperimetric"):
    """Omega_p(K) <= n omega_n^{2p/(n+p)} V(K)^{(n-p)/(n+p)} after centring K.

    ``relation`` defaults to ``"eq"`` for balls and ellipsoids (the equality
    case) and ``"le"`` otherwise.
    """
    p = check_p(p)
    K = centred(body, resolution, seed)
    lhs = _omega(K, p, resolution, seed)
    rhs = isoperimetric_bound(K.dim, p, volume(K, resolution, seed))
    if relation is None:
        relation = "eq" if is_ellipsoidal(body) else "le"
    return PropertyResult(name, lhs, rhs, relation, tol)


def check_isoperimetric_slack(body, p, resolution=None, seed=0, min_slack=STRICT_SLACK, name="isoperimetric_slack"):
    """Strict form: Omega_p(K) <= (1 - min_slack) * bound."""
    base = check_isoperimetric(body, p, resolution, seed, relation="le")
    return PropertyResult(name, base.lhs, (1.0 - min_slack) * base.rhs, "le", 0.0)


# ------------------------------------------------------- semicontinuity demo


@dataclass
class SemicontinuityReport:
    p: float
    omega_K: float
    rows: list  # (m, d_m, Omega_p(P_m))

    @property
    def distances_decrease(self):
        d = [r[1] for r in self.rows]
        return all(b < a for a, b in zip(d, d[1:]))

    @property
    def passed(self):
        return self.distances_decrease and all(r[2] <= self.omega_K for r in self.rows) and all(r[2] == 0.0 for r in self.rows)

    def to_dict(self):
        return {
            "p": self.p,
            "omega_K": self.omega_K,
            "rows": [{"m": m, "d_m": d, "omega_P": w, "omega_K": self.omega_K} for m, d, w in self.rows],
            "pass": self.passed,
        }


def demo_upper_semicontinuity(body, p, levels=(0, 1, 2), resolution=None, seed=0):
    """Inscribed polytopes P_m = hull of tau_K at icosphere vertices (m = 12, 42, 162, ...).

    d_m is the largest support gap h_K - h_{P_m} over the sphere nodes and
    the facet normals of P_m.
    """
    p = check_p(p)
    if body.dim != 3:
        raise HullUnavailable("inscribed-polytope construction is implemented for n = 3 only")
    if isinstance(body, Polytope):
        raise ValueError("demo needs a smooth body")
    omega_K = _omega(body, p, resolution, seed)
    U = sphere_mesh(3, resolution, seed).nodes
    rows = []
    for level in levels:
        V, _ = icosphere(level)
        P = Polytope(body.support_gradient(V))
        W = np.vstack([U, P.facet_normals])
        d = float(np.max(body.support(W) - P.support(W)))
        rows.append((V.shape[0], d, _omega(P, p, resolution, seed)))
    return SemicontinuityReport(p, omega_K, rows)


# ------------------------------------------------------------------ suite


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)

    @property
    def sorted_results(self):
        return sorted(self.results, key=lambda r: r.name)

    @property
    def counts(self):
        passed = sum(r.passed for r in self.results)
        return {"total": len(self.results), "passed": passed, "failed": len(self.results) - passed}

    @property
    def all_passed(self):
        return all(r.passed for r in self.results)

    def tsv_rows(self):
        header = ["name", "lhs", "rhs", "relation", "gap", "pass"]
        return header, [[r.name, r.lhs, r.rhs, r.relation, r.rel_gap_or_slack, r.passed] for r in self.sorted_results]

    def to_dict(self):
        return {"counts": self.counts, "all_passed": self.all_passed, "results": [r.to_dict() for r in self.sorted_results]}


def _fmt_p(p):
    return f"{p:g}"


def body_checks(label, body, p, resolution=None, seed=0, tolerances=None, partners=None):
    """Every applicable check for one body and one p."""
    tl = dict(DEFAULT_TOLERANCES, **(tolerances or {}))
    q, ex = tl["quadrature"], tl["exact"]
    n = body.dim
    tag = f"{label}/n{n}/p{_fmt_p(p)}"
    out = []
    for lam in (0.5, 2.0):
        out.append(check_homogeneity(body, p, lam, resolution, seed, q, f"homogeneity/{tag}/lambda{lam:g}"))
    diag = np.diag(np.arange(1.0, n + 1.0))
    shear = np.eye(n)
    shear[0, 1] = 1.0
    out.append(check_gl_covariance(body, p, diag, resolution, seed, q, f"gl_covariance/{tag}/diag"))
    out.append(check_gl_covariance(body, p, shear, resolution, seed, q, f"gl_covariance/{tag}/shear"))
    if isinstance(body, Polytope):
        out.append(check_polytope_zero(body, p, resolution, seed, ex, f"polytope_zero/{tag}"))
    out.append(check_isoperimetric(body, p, resolution, seed, q, name=f"isoperimetric/{tag}"))
    if isinstance(body, Polytope):
        out.append(check_isoperimetric_slack(body, p, resolution, seed, tl["strict_slack"], f"isoperimetric_slack/{tag}"))
    if p == 1.0:
        t = np.full(n, 0.05)
        out.append(check_translation_invariance(body, t, resolution, seed, q, f"translation_invariance/{tag}"))
    if partners:
        b = sample_boundary(body, resolution, seed, mesh=VERIFY_MESH)
        s = None if isinstance(body, Polytope) else sphere_samples(body, resolution, seed)
        for lname, L in partners.items():
            terms = mixed_terms(body, L, p, resolution, seed, boundary=b, sphere=s)
            out.extend(check_mixed_volume_inequality(body, L, p, resolution, seed, q, f"mixed_volume/{tag}/L={lname}", terms))
    return out


def run_suite(dims=(2, 3), ps=(0.5, 1.0, 2.0, 3.0), resolution=None, seed=0, tolerances=None, bodies=None, quartic=True):
    """The standard verification grid.

    ``bodies`` optionally restricts the grid to the given body labels.
    """
    report = SuiteReport()
    tl = dict(DEFAULT_TOLERANCES, **(tolerances or {}))
    for n in dims:
        grid = standard_bodies(n, seed)
        chosen = {k: v for k, v in grid.items() if bodies is None or k in bodies}
        for label, body in chosen.items():
            for p in ps:
                report.results.extend(body_checks(label, body, float(p), resolution, seed, tl, partners=grid))
        if quartic:
            Q = quartic_body(n)
            for p in ps:
                tag = f"quartic/n{n}/p{_fmt_p(p)}"
                report.results.append(check_isoperimetric(Q, p, resolution, seed, tl["quadrature"], name=f"isoperimetric/{tag}"))
                if n == 3:
                    report.results.append(
                        check_isoperimetric_slack(Q, p, resolution, seed, tl["strict_slack"], f"isoperimetric_slack/{tag}")
                    )
    return report


def run_body_suite(body, label="body", ps=(1.0,), resolution=None, seed=0, tolerances=None):
    """Checks for a single user-supplied body (used by the CLI)."""
    report = SuiteReport()
    for p in ps:
        report.results.extend(body_checks(label, body, float(p), resolution, seed, tolerances, partners={"unit_ball": Ball(np.zeros(body.dim), 1.0)}))
    return report
