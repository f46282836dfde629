# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
from libc.math cimport INFINITY

cdef double _DEN_FLOOR = 1e-14


def enclosing_radii(points, directions, cloud, double tol):
    cdef double[:, ::1] X = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] U = np.ascontiguousarray(directions, dtype=np.float64)
    cdef double[:, ::1] Y = np.ascontiguousarray(cloud, dtype=np.float64)
    cdef Py_ssize_t q = X.shape[0], m = Y.shape[0], n = X.shape[1]
    out = np.zeros(q)
    cdef double[::1] R = out
    cdef Py_ssize_t a, j, k
    cdef double num, gap, den, dk, best, ratio
    with nogil:
        for a in range(q):
            best = 0.0
            for j in range(m):
                num = 0.0
                gap = 0.0
                for k in range(n):
                    dk = Y[j, k] - X[a, k]
                    num = num + dk * dk
                    gap = gap - dk * U[a, k]
                num = num - tol * tol
                den = 2.0 * (gap + tol)
                if den > 0.0:
                    ratio = num / den
                elif num > 0.0:
                    ratio = INFINITY
                else:
                    ratio = 0.0
                if ratio > best:
                    best = ratio
            R[a] = best
    return out


def rolling_radii(points, normals, nodes, node_support, double tol):
    cdef double[:, ::1] X = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] N = np.ascontiguousarray(normals, dtype=np.float64)
    cdef double[:, ::1] U = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef double[::1] H = np.ascontiguousarray(node_support, dtype=np.float64)
    cdef Py_ssize_t q = X.shape[0], m = U.shape[0], n = X.shape[1]
    out = np.empty(q)
    cdef double[::1] R = out
    cdef Py_ssize_t a, j, k
    cdef double num, den, best, ratio
    cdef bint outside
    with nogil:
        for a in range(q):
            best = INFINITY
            outside = False
            for j in range(m):
                num = H[j] + tol
                den = 1.0
                for k in range(n):
                    num = num - X[a, k] * U[j, k]
                    den = den - N[a, k] * U[j, k]
                if num < 0.0:
                    outside = True
                    break
                if den > _DEN_FLOOR:
                    ratio = num / den
                    if ratio < best:
                        best = ratio
            R[a] = 0.0 if outside else best
    return out


def vertex_hit_counts(directions, vertices):
    cdef double[:, ::1] U = np.ascontiguousarray(directions, dtype=np.float64)
    cdef double[:, ::1] V = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef Py_ssize_t m = U.shape[0], nv = V.shape[0], n = U.shape[1]
    counts = np.zeros(nv, dtype=np.int64)
    cdef long long[::1] C = counts
    cdef Py_ssize_t i, j, k, arg
    cdef double best, dot
    with nogil:
        for i in range(m):
            best = -INFINITY
            arg = 0
            for j in range(nv):
                dot = 0.0
                for k in range(n):
                    dot = dot + U[i, k] * V[j, k]
                if dot > best:
                    best = dot
                    arg = j
            C[arg] += 1
    return counts
