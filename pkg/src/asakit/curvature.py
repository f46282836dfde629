"""Curvature function F_K and Gauss curvature H_K from the support Hessian."""
from dataclasses import dataclass

import numpy as np

from .convex_body import Ball, Polytope, SupportOracle, Transformed, _rows, _unit
from .errors import HessianUnavailable, ZeroCurvatureFunction

# Eigenvalues of the restricted Hessian above -tol * scale are clamped to 0.
ANALYTIC_CLAMP = 1e-10
FD_CLAMP = 1e-6


@dataclass(frozen=True)
class SupportHessian:
    u: np.ndarray
    matrix: np.ndarray

    def restricted(self):
        """The Hessian as a quadratic form on u^perp, in an orthonormal basis."""
        E = tangent_basis(self.u)
        return E.T @ self.matrix @ E


def tangent_basis(u):
    """Orthonormal basis of u^perp, as columns; shape (n, n-1) or (m, n, n-1).

    Built from the Householder reflection taking e_1 to -sign(u_1) u.
    """
    U = _rows(u)
    m, n = U.shape
    s = np.where(U[:, 0] >= 0, 1.0, -1.0)
    v = U.copy()
    v[:, 0] += s
    vv = np.einsum("mi,mi->m", v, v)
    Hh = np.eye(n)[None] - 2.0 * v[:, :, None] * v[:, None, :] / vv[:, None, None]
    E = Hh[:, :, 1:]
    return E[0] if np.ndim(u) == 1 else E


def _clamp_tolerance(body):
    while isinstance(body, Transformed):
        body = body.base
    if isinstance(body, SupportOracle) and not body.analytic_hessian:
        return FD_CLAMP
    return ANALYTIC_CLAMP


def support_hessian(body, u):
    """Hessian of the 1-homogeneous support function at the direction ``u``."""
    if isinstance(body, Polytope):
        raise HessianUnavailable("support function of a polytope is piecewise linear")
    u = _unit(u)
    A = body.support_hessian(u)
    return SupportHessian(u, A)


def restricted_eigenvalues(body, U):
    """Eigenvalues of Ah_K(u) restricted to u^perp for each row of ``U``."""
    if isinstance(body, Polytope):
        raise HessianUnavailable("support function of a polytope is piecewise linear")
    U = _rows(U)
    U = U / np.linalg.norm(U, axis=1, keepdims=True)
    A = body.support_hessian(U)
    if not np.all(np.isfinite(A)):
        raise HessianUnavailable("support Hessian is not finite")
    E = tangent_basis(U)
    B = np.swapaxes(E, 1, 2) @ A @ E
    B = 0.5 * (B + np.swapaxes(B, 1, 2))
    eig = np.linalg.eigvalsh(B)
    scale = np.maximum(1.0, np.max(np.abs(eig), axis=1))
    tol = _clamp_tolerance(body)
    if np.any(eig[:, 0] < -tol * scale):
        raise HessianUnavailable("support Hessian is not positive semidefinite on u^perp; invalid body")
    return np.clip(eig, 0.0, None)


def curvature_functions(body, U):
    """F_K at every row of ``U`` (vectorized :func:`curvature_function`)."""
    return np.prod(restricted_eigenvalues(body, U), axis=1)


def curvature_function(body, u):
    """F_K(u): determinant of the support Hessian restricted to u^perp."""
    return float(curvature_functions(body, _unit(u)[None])[0])


def gauss_curvature(body, x):
    """H_K(x) = 1 / F_K(nu_K(x))."""
    if isinstance(body, Ball):
        return body.radius ** (1 - body.dim)
    nu = body.gauss(np.asarray(x, dtype=float))
    F = curvature_function(body, nu)
    if F <= 0.0:
        raise ZeroCurvatureFunction("F_K vanishes at the normal of x")
    return 1.0 / F
