# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled polygon-norm kernels (see ``_fallback`` for the reference semantics)."""

import numpy as np
from libc.math cimport fabs, INFINITY

cdef double TIE = 1e-12


cdef inline double _gauge(const double[:, ::1] F, double x, double y) noexcept nogil:
    cdef Py_ssize_t j
    cdef double best = -INFINITY
    cdef double v
    for j in range(F.shape[0]):
        v = F[j, 0] * x + F[j, 1] * y
        if v > best:
            best = v
    return best


cdef inline double _antinorm(const double[:, ::1] V, double x, double y) noexcept nogil:
    cdef Py_ssize_t j
    cdef double best = 0.0
    cdef double v
    for j in range(V.shape[0]):
        v = fabs(x * V[j, 1] - y * V[j, 0])
        if v > best:
            best = v
    return best


def poly_gauge(const double[:, ::1] F, double x, double y):
    return _gauge(F, x, y)


def poly_gauge_many(const double[:, ::1] F, P):
    cdef const double[:, ::1] Q = np.ascontiguousarray(P, dtype=np.float64)
    cdef Py_ssize_t i, n = Q.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _gauge(F, Q[i, 0], Q[i, 1])
    return out


def poly_antinorm(const double[:, ::1] V, double x, double y):
    return _antinorm(V, x, y)


def poly_antinorm_many(const double[:, ::1] V, P):
    cdef const double[:, ::1] Q = np.ascontiguousarray(P, dtype=np.float64)
    cdef Py_ssize_t i, n = Q.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _antinorm(V, Q[i, 0], Q[i, 1])
    return out


cdef void _scan(const double[:, ::1] F, const double[:, ::1] V,
                double wx, double wy, double ex, double ey, bint bounded,
                double* best, double* tlo, double* thi) noexcept nogil:
    # two passes over candidates: endpoints (if bounded) and vertex-ray breakpoints
    cdef Py_ssize_t k, m = V.shape[0]
    cdef double den, t, val, b = INFINITY, tol
    if bounded:
        b = _gauge(F, wx, wy)
        val = _gauge(F, wx - ex, wy - ey)
        if val < b:
            b = val
    for k in range(m):
        den = ex * V[k, 1] - ey * V[k, 0]
        if fabs(den) <= 1e-300:
            continue
        t = (wx * V[k, 1] - wy * V[k, 0]) / den
        if bounded and (t <= 0.0 or t >= 1.0):
            continue
        val = _gauge(F, wx - t * ex, wy - t * ey)
        if val < b:
            b = val
    tol = TIE * (1.0 + fabs(b))
    tlo[0] = INFINITY
    thi[0] = -INFINITY
    if bounded:
        if _gauge(F, wx, wy) <= b + tol:
            tlo[0] = 0.0
            thi[0] = 0.0
        if _gauge(F, wx - ex, wy - ey) <= b + tol:
            if 1.0 < tlo[0]:
                tlo[0] = 1.0
            thi[0] = 1.0
    for k in range(m):
        den = ex * V[k, 1] - ey * V[k, 0]
        if fabs(den) <= 1e-300:
            continue
        t = (wx * V[k, 1] - wy * V[k, 0]) / den
        if bounded and (t <= 0.0 or t >= 1.0):
            continue
        if _gauge(F, wx - t * ex, wy - t * ey) <= b + tol:
            if t < tlo[0]:
                tlo[0] = t
            if t > thi[0]:
                thi[0] = t
    best[0] = b


def seg_min_gauge(const double[:, ::1] F, const double[:, ::1] V,
                  double px, double py, double ax, double ay, double bx, double by):
    cdef double best, tlo, thi
    _scan(F, V, px - ax, py - ay, bx - ax, by - ay, True, &best, &tlo, &thi)
    return best, tlo, thi


def line_min_gauge(const double[:, ::1] F, const double[:, ::1] V,
                   double px, double py, double qx, double qy, double dx, double dy):
    cdef double best, tlo, thi
    _scan(F, V, px - qx, py - qy, dx, dy, False, &best, &tlo, &thi)
    return best, tlo, thi


cdef bint _inside(const double[:, ::1] S, double px, double py, double tol) noexcept nogil:
    cdef Py_ssize_t i, j, m = S.shape[0]
    cdef double cross
    for i in range(m):
        j = i + 1
        if j == m:
            j = 0
        cross = (S[j, 0] - S[i, 0]) * (py - S[i, 1]) - (S[j, 1] - S[i, 1]) * (px - S[i, 0])
        if cross < -tol:
            return False
    return True


def inside_convex(const double[:, ::1] S, double px, double py, double tol):
    return _inside(S, px, py, tol)


cdef void _nearest(const double[:, ::1] F, const double[:, ::1] V, const double[:, ::1] S,
                   double px, double py, double[::1] cv, double[::1] ctl, double[::1] cth,
                   double[:, ::1] cp, double* res) noexcept nogil:
    # res = (dist, x_lo, y_lo, x_hi, y_hi)
    cdef Py_ssize_t i, j, a = 0, b = 0, m = S.shape[0], npts = 0
    cdef double scale = 1.0 + fabs(px) + fabs(py)
    cdef double best = INFINITY, tol, d2, dmax = -1.0, ex, ey
    for i in range(m):
        scale = max(scale, 1.0 + fabs(S[i, 0]) + fabs(S[i, 1]) + fabs(px) + fabs(py))
    if _inside(S, px, py, 1e-14 * scale * scale):
        res[0] = 0.0
        res[1] = px
        res[2] = py
        res[3] = px
        res[4] = py
        return
    for i in range(m):
        j = i + 1
        if j == m:
            j = 0
        _scan(F, V, px - S[i, 0], py - S[i, 1], S[j, 0] - S[i, 0], S[j, 1] - S[i, 1],
              True, &cv[i], &ctl[i], &cth[i])
        if cv[i] < best:
            best = cv[i]
    tol = TIE * (1.0 + best)
    for i in range(m):
        if cv[i] <= best + tol:
            j = i + 1
            if j == m:
                j = 0
            ex = S[j, 0] - S[i, 0]
            ey = S[j, 1] - S[i, 1]
            cp[npts, 0] = S[i, 0] + ctl[i] * ex
            cp[npts, 1] = S[i, 1] + ctl[i] * ey
            cp[npts + 1, 0] = S[i, 0] + cth[i] * ex
            cp[npts + 1, 1] = S[i, 1] + cth[i] * ey
            npts += 2
    for i in range(npts):
        for j in range(i + 1, npts):
            d2 = (cp[i, 0] - cp[j, 0]) ** 2 + (cp[i, 1] - cp[j, 1]) ** 2
            if d2 > dmax:
                dmax = d2
                a = i
                b = j
    if dmax <= 0.0:
        b = a
    elif cp[a, 0] > cp[b, 0] or (cp[a, 0] == cp[b, 0] and cp[a, 1] > cp[b, 1]):
        a, b = b, a
    res[0] = best
    res[1] = cp[a, 0]
    res[2] = cp[a, 1]
    res[3] = cp[b, 0]
    res[4] = cp[b, 1]


def polygon_nearest(const double[:, ::1] F, const double[:, ::1] V,
                    const double[:, ::1] S, double px, double py):
    cdef Py_ssize_t m = S.shape[0]
    cdef double[::1] cv = np.empty(m), ctl = np.empty(m), cth = np.empty(m)
    cdef double[:, ::1] cp = np.empty((2 * m, 2))
    cdef double res[5]
    _nearest(F, V, S, px, py, cv, ctl, cth, cp, res)
    return res[0], res[1], res[2], res[3], res[4]


def polygon_nearest_many(const double[:, ::1] F, const double[:, ::1] V,
                         const double[:, ::1] S, P):
    cdef const double[:, ::1] Q = np.ascontiguousarray(P, dtype=np.float64).reshape(-1, 2)
    cdef Py_ssize_t i, n = Q.shape[0], m = S.shape[0]
    cdef double[::1] cv = np.empty(m), ctl = np.empty(m), cth = np.empty(m)
    cdef double[:, ::1] cp = np.empty((2 * m, 2))
    out = np.empty((n, 5), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            _nearest(F, V, S, Q[i, 0], Q[i, 1], cv, ctl, cth, cp, &o[i, 0])
    return out
