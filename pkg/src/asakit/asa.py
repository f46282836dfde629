"""L_p affine surface area through four representations.

Two integrals (over the sphere and over the boundary) and two infima
(Lutwak's over support-like functions h on the sphere, and the
curvature-measure one over boundary functions g).  Both infima reduce to
minimizing

    L(s) = (sum_j a_j exp(-n s_j))^{p/(n+p)} * (sum_j b_j exp(p s_j))^{n/(n+p)}

over a vector s of log-values, which is what :func:`minimize_two_factor`
does.  log L is convex in s.
"""
from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy.special import logsumexp

from .convex_body import Polytope
from .errors import DegenerateCurvature, NonConvergence, OriginNotInterior
from .measures import curvature_measure_c0, surface_area_measure
from .sampling import BoundarySamples, SphereSamples, sample_boundary, sphere_samples
from .sphere import psum

DEFAULT_MAX_ITER = 10_000
DESCENT_TOL = 1e-10
# a value this far below the start is reported as numerically zero
ZERO_RATIO = 1e-12
# relative gaps among values all below this are reported as 0
ZERO_VALUE = 1e-9
ARMIJO = 1e-4
MAX_HALVINGS = 60


def check_p(p):
    """Reject p <= 0 (and non-finite p)."""
    p = float(p)
    if not (math.isfinite(p) and p > 0):
        raise ValueError(f"p must be a finite real > 0, got {p!r}")
    return p


def _require_positive(h, what="support function"):
    if np.size(h) and np.min(h) <= 0:
        raise OriginNotInterior(f"{what} is not positive at some node; the origin is not interior")


@dataclass(frozen=True)
class DiscreteFunction:
    """Positive values on a boundary (role ``"g"``) or sphere (role ``"h"``) sample set.

    ``atom_values`` carries the values on the atoms of the relevant measure
    (C_0 vertex atoms for g, S_K facet atoms for h).
    """

    values: np.ndarray
    samples: object
    atom_values: np.ndarray = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.samples),):
            raise ValueError("one value per sample is required")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError("discrete function values must be positive and finite")
        object.__setattr__(self, "values", v)
        if self.atom_values is not None:
            a = np.asarray(self.atom_values, dtype=float)
            if not np.all(np.isfinite(a)) or np.any(a <= 0):
                raise ValueError("atom values must be positive and finite")
            object.__setattr__(self, "atom_values", a)

    @property
    def role(self):
        return "g" if isinstance(self.samples, BoundarySamples) else "h"


def asa_boundary(body, p, resolution=None, seed=0, mesh="independent", samples=None):
    """Integral over the boundary of (H / h(nu)^{(p-1)n/p})^{p/(n+p)}."""
    p = check_p(p)
    n = body.dim
    s = samples if samples is not None else sample_boundary(body, resolution, seed, mesh=mesh)
    if p != 1.0:
        _require_positive(s.h_at_nu)
    plus = s.in_H_plus
    if not np.any(plus):
        return 0.0
    H, h, w = s.H[plus], s.h_at_nu[plus], s.weight[plus]
    integrand = H ** (p / (n + p)) * h ** (-(p - 1.0) * n / (n + p)) if p != 1.0 else H ** (p / (n + p))
    return psum(integrand * w)


def asa_sphere(body, p, resolution=None, seed=0, samples=None):
    """Integral over the sphere of (F / h^{p-1})^{n/(n+p)}."""
    p = check_p(p)
    n = body.dim
    s = samples if samples is not None else sphere_samples(body, resolution, seed)
    if p != 1.0:
        _require_positive(s.h)
    plus = s.in_F_plus
    if not np.any(plus):
        return 0.0
    F, h, w = s.F[plus], s.h[plus], s.weight[plus]
    integrand = F ** (n / (n + p)) * (h ** (-(p - 1.0) * n / (n + p)) if p != 1.0 else 1.0)
    return psum(integrand * w)


def _two_factor(A, B, n, p):
    if A <= 0 or B <= 0:
        return 0.0
    return A ** (p / (n + p)) * B ** (n / (n + p))


def _h_power(h, e):
    return np.ones_like(h) if e == 0 else h**e


def functional_L1(body, g, p):
    """(int g^{-n} H dH)^{p/(n+p)} * (int g^p h(nu)^{1-p} dH)^{n/(n+p)}."""
    p = check_p(p)
    n = body.dim
    s = g.samples
    if p != 1.0:
        _require_positive(s.h_at_nu)
    A = psum(g.values ** (-float(n)) * s.H * s.weight)
    B = psum(g.values**p * _h_power(s.h_at_nu, 1.0 - p) * s.weight)
    return _two_factor(A, B, n, p)


def atom_values_by_nearest(samples, points, values):
    """Values at ``points`` taken from the nearest boundary sample."""
    if len(points) == 0:
        return np.zeros(0)
    d2 = ((points[:, None, :] - samples.x[None, :, :]) ** 2).sum(axis=2)
    return values[np.argmin(d2, axis=1)]


def functional_L2(body, g, p, c0=None):
    """(int g^{-n} dC_0)^{p/(n+p)} * (int g^p h(nu)^{1-p} dC_{n-1})^{n/(n+p)}.

    C_0 atoms use ``g.atom_values`` when given, otherwise the value at the
    nearest boundary sample.
    """
    p = check_p(p)
    n = body.dim
    s = g.samples
    if p != 1.0:
        _require_positive(s.h_at_nu)
    if c0 is None:
        c0 = curvature_measure_c0(body, samples=s)
    atoms = g.atom_values
    if atoms is None:
        atoms = atom_values_by_nearest(s, c0.atom_points, g.values)
    A = c0.integrate(g.values ** (-float(n)), atoms ** (-float(n)) if c0.atom_masses.size else None)
    B = psum(g.values**p * _h_power(s.h_at_nu, 1.0 - p) * s.weight)
    return _two_factor(A, B, n, p)


def analytic_minimizer(body, p, resolution=None, seed=0, mesh="independent", samples=None):
    """g* = h(nu)^{(p-1)/(n+p)} H^{1/(n+p)} on the boundary samples (Hoelder equality point)."""
    p = check_p(p)
    n = body.dim
    s = samples if samples is not None else sample_boundary(body, resolution, seed, mesh=mesh)
    if isinstance(body, Polytope) or not np.all(s.in_H_plus):
        raise DegenerateCurvature("analytic minimizer needs H > 0 at every boundary sample")
    if p != 1.0:
        _require_positive(s.h_at_nu)
    g = s.H ** (1.0 / (n + p)) * _h_power(s.h_at_nu, (p - 1.0) / (n + p))
    return DiscreteFunction(g, s)


def truncation_sequence(body, p, i_max, resolution=None, seed=0, mesh="independent", indices=None):
    """[(i, L_2(h_i))] for the truncated minimizing sequence.

    f_i is i on the C_0 atoms, g* on H^+ and 1/i elsewhere; h_i clamps f_i
    to [1/i, i].
    """
    p = check_p(p)
    n = body.dim
    s = sample_boundary(body, resolution, seed, mesh=mesh)
    if p != 1.0:
        _require_positive(s.h_at_nu)
    c0 = curvature_measure_c0(body, samples=s)
    plus = s.in_H_plus
    gstar = np.zeros(len(s))
    gstar[plus] = s.H[plus] ** (1.0 / (n + p)) * _h_power(s.h_at_nu[plus], (p - 1.0) / (n + p))
    if indices is None:
        indices = range(1, int(i_max) + 1)
    out = []
    for i in indices:
        i = float(i)
        f = np.where(plus, gstar, 1.0 / i)
        h_i = np.clip(f, 1.0 / i, i)
        atoms = np.full(c0.atom_masses.shape, i)
        out.append((i, functional_L2(body, DiscreteFunction(h_i, s, atoms), p, c0=c0)))
    return out


class InfimumResult:
    """Outcome of a numerical infimum; unpacks as ``(value, trace)``."""

    def __init__(self, value, trace, converged, iterations, argmin, reason):
        self.value = value
        self.trace = trace
        self.converged = converged
        self.iterations = iterations
        self.argmin = argmin
        self.reason = reason

    def __iter__(self):
        return iter((self.value, self.trace))

    def __repr__(self):
        return f"InfimumResult(value={self.value!r}, iterations={self.iterations}, converged={self.converged})"


def _log_value(s, la, lb, n, p):
    lA = logsumexp(la - n * s)
    lB = logsumexp(lb + p * s)
    return (p * lA + n * lB) / (n + p), lA, lB


def minimize_two_factor(a, b, n, p, s0, max_iter=DEFAULT_MAX_ITER, tol=DESCENT_TOL):
    """Minimize L(s) from ``s0`` by diagonally preconditioned descent with Armijo backtracking.

    Returns ``(s, trace, converged, reason)``; ``trace`` is a monotone
    non-increasing list of ``(iteration, L)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(divide="ignore"):
        la, lb = np.log(a), np.log(b)
    s = np.array(s0, dtype=float)
    if not np.any(a > 0) or not np.any(b > 0):
        return s, [(0, 0.0)], True, "zero-factor"
    lv, lA, lB = _log_value(s, la, lb, n, p)
    lv0 = lv
    trace = [(0, math.exp(lv))]
    c = n * p / (n + p)
    for it in range(1, max_iter + 1):
        x = np.exp(la - n * s - lA)
        y = np.exp(lb + p * s - lB)
        den = n * x + p * y
        d = np.divide(x - y, den, out=np.zeros_like(s), where=den > 0)
        # directional derivative of log L along d (always <= 0)
        slope = -c * float(np.sum((x - y) * d))
        if -slope < tol:
            return s, trace, True, "stationary"
        t = 1.0
        for _ in range(MAX_HALVINGS):
            cand = s + t * d
            lv_new, lA_new, lB_new = _log_value(cand, la, lb, n, p)
            if lv_new <= lv + ARMIJO * t * slope:
                break
            t *= 0.5
        else:
            return s, trace, True, "no-descent"
        rel = -math.expm1(lv_new - lv)
        s, lv, lA, lB = cand, lv_new, lA_new, lB_new
        trace.append((it, math.exp(lv)))
        if lv - lv0 < math.log(ZERO_RATIO):
            return s, trace, True, "numerically-zero"
        if rel < tol:
            return s, trace, True, "relative-descent"
    return s, trace, False, "budget"


def _finish(s, trace, converged, reason, argmin, what):
    if not converged:
        warnings.warn(f"{what}: iteration budget exhausted; returning best value so far", NonConvergence, stacklevel=3)
    return InfimumResult(trace[-1][1], trace, converged, trace[-1][0], argmin, reason)


def asa_cm_infimum(body, p, resolution=None, seed=0, mesh="independent", max_iter=DEFAULT_MAX_ITER, tol=DESCENT_TOL, init=None):
    """Numerical infimum of L_2 over positive boundary functions g.

    Starts at the analytic minimizer for smooth bodies and at g = 1 for
    polytopes (or at ``init``, a :class:`DiscreteFunction`).
    """
    p = check_p(p)
    n = body.dim
    s = sample_boundary(body, resolution, seed, mesh=mesh)
    if p != 1.0:
        _require_positive(s.h_at_nu)
    c0 = curvature_measure_c0(body, samples=s)
    k = c0.atom_masses.size
    a = np.concatenate([c0.density * s.weight, c0.atom_masses])
    b = np.concatenate([_h_power(s.h_at_nu, 1.0 - p) * s.weight, np.zeros(k)])
    if init is not None:
        if len(init.values) != len(s):
            raise ValueError("init must live on the boundary samples of this resolution and mesh")
        atoms = init.atom_values if init.atom_values is not None else atom_values_by_nearest(s, c0.atom_points, init.values)
        g0 = np.concatenate([init.values, atoms])
    elif isinstance(body, Polytope) or not np.all(s.in_H_plus):
        g0 = np.ones(len(s) + k)
    else:
        g0 = np.concatenate([analytic_minimizer(body, p, samples=s).values, np.ones(k)])
    logg, trace, ok, reason = minimize_two_factor(a, b, n, p, np.log(g0), max_iter, tol)
    g = np.exp(logg)
    argmin = DiscreteFunction(np.maximum(g[: len(s)], np.finfo(float).tiny), s, np.maximum(g[len(s):], np.finfo(float).tiny))
    return _finish(logg, trace, ok, reason, argmin, "curvature-measure infimum")


def asa_lutwak_infimum(body, p, resolution=None, seed=0, max_iter=DEFAULT_MAX_ITER, tol=DESCENT_TOL, init=None):
    """Numerical infimum over positive sphere functions h of
    (int h^n)^{p/(n+p)} * (int h^{-p} h_K^{1-p} dS_K)^{n/(n+p)}.

    Starts at h = (F / h_K^{p-1})^{1/(n+p)} for smooth bodies and h = 1 for
    polytopes; S_K facet atoms carry their own h values.
    """
    p = check_p(p)
    n = body.dim
    smp = sphere_samples(body, resolution, seed)
    _require_positive(smp.h)
    S = surface_area_measure(body, samples=smp)
    k = S.atom_masses.size
    hk_atoms = body.support(S.atom_normals) if k else np.zeros(0)
    if k:
        _require_positive(hk_atoms)
    a = np.concatenate([smp.weight, np.zeros(k)])
    b = np.concatenate([S.density * _h_power(smp.h, 1.0 - p) * smp.weight, S.atom_masses * _h_power(hk_atoms, 1.0 - p)])
    if init is not None:
        if len(init.values) != len(smp):
            raise ValueError("init must live on the sphere samples of this resolution")
        h0 = np.concatenate([init.values, init.atom_values if init.atom_values is not None else np.ones(k)])
    elif isinstance(body, Polytope) or not np.all(smp.in_F_plus):
        h0 = np.ones(len(smp) + k)
    else:
        h0 = np.concatenate([(smp.F * _h_power(smp.h, 1.0 - p)) ** (1.0 / (n + p)), np.ones(k)])
    # the objective is L in s = -log h
    s_opt, trace, ok, reason = minimize_two_factor(a, b, n, p, -np.log(h0), max_iter, tol)
    h = np.maximum(np.exp(-s_opt), np.finfo(float).tiny)
    argmin = DiscreteFunction(h[: len(smp)], smp, h[len(smp):] if k else None)
    return _finish(s_opt, trace, ok, reason, argmin, "Lutwak infimum")


def relative_gap(a, b):
    m = max(abs(a), abs(b))
    if m <= ZERO_VALUE:
        return 0.0
    return abs(a - b) / m


@dataclass
class AsaReport:
    p: float
    n: int
    value_boundary: float
    value_sphere: float
    value_lutwak_inf: float
    value_cm_inf: float
    optimizer_trace: list
    resolution: int
    seed: int = 0
    lutwak_trace: list = field(default_factory=list)
    cm_converged: bool = True
    lutwak_converged: bool = True

    @property
    def values(self):
        return {
            "boundary": self.value_boundary,
            "sphere": self.value_sphere,
            "lutwak_infimum": self.value_lutwak_inf,
            "cm_infimum": self.value_cm_inf,
        }

    @property
    def max_pairwise_rel_gap(self):
        v = list(self.values.values())
        return max(relative_gap(v[i], v[j]) for i in range(4) for j in range(i + 1, 4))

    def to_dict(self):
        return {
            "p": self.p,
            "n": self.n,
            "resolution": self.resolution,
            "seed": self.seed,
            "value_boundary": self.value_boundary,
            "value_sphere": self.value_sphere,
            "value_lutwak_inf": self.value_lutwak_inf,
            "value_cm_inf": self.value_cm_inf,
            "max_pairwise_rel_gap": self.max_pairwise_rel_gap,
            "cm_converged": self.cm_converged,
            "lutwak_converged": self.lutwak_converged,
            "optimizer_trace": [[i, v] for i, v in self.optimizer_trace],
            "lutwak_trace": [[i, v] for i, v in self.lutwak_trace],
        }


def compute_asa(body, p, resolution=None, seed=0, max_iter=DEFAULT_MAX_ITER):
    """All four representations of Omega_p(K) in one report."""
    from .sphere import default_resolution

    p = check_p(p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonConvergence)
        cm = asa_cm_infimum(body, p, resolution, seed, max_iter=max_iter)
        lw = asa_lutwak_infimum(body, p, resolution, seed, max_iter=max_iter)
    return AsaReport(
        p=p,
        n=body.dim,
        value_boundary=asa_boundary(body, p, resolution, seed),
        value_sphere=asa_sphere(body, p, resolution, seed),
        value_lutwak_inf=lw.value,
        value_cm_inf=cm.value,
        optimizer_trace=cm.trace,
        resolution=int(resolution if resolution is not None else default_resolution(body.dim)),
        seed=int(seed),
        lutwak_trace=lw.trace,
        cm_converged=cm.converged,
        lutwak_converged=lw.converged,
    )
