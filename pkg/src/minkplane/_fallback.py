"""Pure numpy versions of the polygon-norm kernels.

Same signatures and results as the compiled ``_kernels`` module. A polygonal
norm is passed as ``(F, V)``: ``F`` holds the facet functionals (rows ``f``
with ``f . x <= 1`` on the unit ball) and ``V`` the unit-ball vertices.
"""

import numpy as np

_TIE = 1e-12


def poly_gauge(F, x, y):
    return float(np.max(F[:, 0] * x + F[:, 1] * y))


def poly_gauge_many(F, P):
    P = np.asarray(P, dtype=float)
    return np.max(P @ F.T, axis=1)


def poly_antinorm(V, x, y):
    return float(np.max(np.abs(x * V[:, 1] - y * V[:, 0])))


def poly_antinorm_many(V, P):
    P = np.asarray(P, dtype=float)
    return np.max(np.abs(np.outer(P[:, 0], V[:, 1]) - np.outer(P[:, 1], V[:, 0])), axis=1)


def _breakpoints(V, wx, wy, ex, ey):
    # t where w - t e is parallel to a vertex ray
    den = ex * V[:, 1] - ey * V[:, 0]
    num = wx * V[:, 1] - wy * V[:, 0]
    ok = np.abs(den) > 1e-300
    return num[ok] / den[ok]


def _min_over(F, wx, wy, ex, ey, ts):
    vals = np.max(np.outer(wx - ts * ex, F[:, 0]) + np.outer(wy - ts * ey, F[:, 1]), axis=1)
    best = float(vals.min())
    tol = _TIE * (1.0 + abs(best))
    on = ts[vals <= best + tol]
    return best, float(on.min()), float(on.max())


def seg_min_gauge(F, V, px, py, ax, ay, bx, by):
    """Minimum over t in [0, 1] of gauge(p - a - t (b - a)) and its optimal t-interval."""
    wx, wy, ex, ey = px - ax, py - ay, bx - ax, by - ay
    ts = _breakpoints(V, wx, wy, ex, ey)
    ts = np.concatenate(([0.0, 1.0], ts[(ts > 0.0) & (ts < 1.0)]))
    return _min_over(F, wx, wy, ex, ey, ts)


def line_min_gauge(F, V, px, py, qx, qy, dx, dy):
    """Minimum over real t of gauge(p - q - t d) and its optimal t-interval."""
    wx, wy = px - qx, py - qy
    ts = _breakpoints(V, wx, wy, dx, dy)
    return _min_over(F, wx, wy, dx, dy, ts)


def inside_convex(S, px, py, tol):
    E = np.roll(S, -1, axis=0) - S
    cross = E[:, 0] * (py - S[:, 1]) - E[:, 1] * (px - S[:, 0])
    return bool(np.all(cross >= -tol))


def polygon_nearest(F, V, S, px, py):
    """Nearest points of the convex CCW polygon ``S`` to ``p`` in the polygon norm.

    Returns ``(dist, x_lo, y_lo, x_hi, y_hi)``; the two points are the ends of
    the (point or segment) set of minimizers.
    """
    scale = 1.0 + float(np.max(np.abs(S))) + abs(px) + abs(py)
    if inside_convex(S, px, py, 1e-14 * scale * scale):
        return 0.0, px, py, px, py
    m = S.shape[0]
    res = []
    for i in range(m):
        a = S[i]
        b = S[(i + 1) % m]
        res.append((seg_min_gauge(F, V, px, py, a[0], a[1], b[0], b[1]), a, b))
    best = min(r[0][0] for r in res)
    tol = _TIE * (1.0 + best)
    pts = []
    for (val, tlo, thi), a, b in res:
        if val <= best + tol:
            pts.append(a + tlo * (b - a))
            pts.append(a + thi * (b - a))
    pts = np.array(pts)
    if len(pts) == 1:
        lo = hi = pts[0]
    else:
        d = pts[:, None, :] - pts[None, :, :]
        i, j = np.unravel_index(np.argmax(np.einsum("ijk,ijk->ij", d, d)), (len(pts), len(pts)))
        lo, hi = pts[i], pts[j]
        if (lo[0], lo[1]) > (hi[0], hi[1]):
            lo, hi = hi, lo
    return best, float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def polygon_nearest_many(F, V, S, P):
    """Row-wise ``polygon_nearest`` for an ``(n, 2)`` array of points."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    out = np.empty((len(P), 5))
    for i, (px, py) in enumerate(P):
        out[i] = polygon_nearest(F, V, S, px, py)
    return out
