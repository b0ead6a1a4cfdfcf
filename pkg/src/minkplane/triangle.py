"""Triangles in a normed plane: heights, bisectors, centers, widths, Fermat-Torricelli."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, linprog, minimize, minimize_scalar

from . import kernels
from .geometry import EXACT_TOL, GeometryError, as_point, rot90, symp
from .norms import Norm, PolygonNorm, make_norm

Metric = str  # "norm" or "antinorm"


@dataclass(frozen=True)
class Triangle:
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray

    def __post_init__(self):
        for k in ("a1", "a2", "a3"):
            object.__setattr__(self, k, as_point(getattr(self, k)))
        s = self.scale
        if abs(float(symp(self.a2 - self.a1, self.a3 - self.a1))) <= 1e-12 * s * s:
            raise GeometryError("degenerate triangle")

    @classmethod
    def of(cls, pts) -> "Triangle":
        p = np.asarray(pts, dtype=float).reshape(3, 2)
        return cls(p[0], p[1], p[2])

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3])

    @property
    def ccw(self) -> np.ndarray:
        v = self.vertices
        return v if symp(v[1] - v[0], v[2] - v[0]) > 0 else v[[0, 2, 1]]

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(np.array([self.a1, self.a2, self.a3])))))

    def area(self) -> float:
        return 0.5 * abs(float(symp(self.a2 - self.a1, self.a3 - self.a1)))

    def centroid(self) -> np.ndarray:
        return (self.a1 + self.a2 + self.a3) / 3.0


@dataclass(frozen=True)
class TriangleReport:
    beta: tuple
    eta: tuple
    eta_anti: tuple
    area: float
    centroid: np.ndarray
    incenter: np.ndarray
    inradius: float
    anti_incenter: np.ndarray
    anti_inradius: float
    is_anti_equilateral: bool
    min_width: float
    is_reduced: bool
    reduced_crosscheck: bool

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = v.tolist() if isinstance(v, np.ndarray) else (list(v) if isinstance(v, tuple) else v)
        return out


def _dual(N: Norm, metric: Metric):
    if metric == "norm":
        return N.antinorm
    if metric == "antinorm":
        return N.gauge
    raise GeometryError(f"metric must be 'norm' or 'antinorm', not {metric!r}")


def _primal(N: Norm, metric: Metric):
    return N.gauge if metric == "norm" else N.antinorm


def line_distance(N, p, q, d, metric: Metric = "norm") -> float:
    """Distance from ``p`` to the line ``q + t d`` in the norm or the antinorm."""
    N = make_norm(N)
    d = as_point(d)
    if not np.any(d):
        raise GeometryError("zero line direction")
    return abs(float(symp(as_point(p) - as_point(q), d))) / _dual(N, metric)(d)


def line_distance_oracle(N, p, q, d, metric: Metric = "norm") -> float:
    """Distance to a line by direct minimization over its points.

    Polygonal metrics use the exact breakpoint scan; smooth ones a bounded
    scalar search around the Euclidean foot. Kept separate from the closed
    form so tests can compare the two.
    """
    N = make_norm(N)
    p, q, d = as_point(p), as_point(q), as_point(d)
    M = N if metric == "norm" else N.anti()
    if isinstance(N, PolygonNorm):
        P = N if metric == "norm" else PolygonNorm(N.isoperimetrix())
        return float(kernels.line_min_gauge(P.F, P.V, p[0], p[1], q[0], q[1], d[0], d[1])[0])
    t0 = float((p - q) @ d / (d @ d))
    span = 4.0 * float(np.linalg.norm(p - q - t0 * d)) / float(np.linalg.norm(d)) + 1e-12
    r = minimize_scalar(lambda t: M.gauge(p - q - t * d), bounds=(t0 - span, t0 + span),
                        method="bounded", options={"xatol": 1e-13 * (1 + abs(t0) + span)})
    return float(r.fun)


def glogovskii_oracle(N, vertex, ray1, ray2, metric: Metric = "norm") -> np.ndarray:
    """Glogovskii direction by root finding on the equal-distance condition."""
    from scipy.optimize import brentq

    N = make_norm(N)
    r1, r2 = _check_rays(ray1, ray2)
    u1, u2 = _unit_dir(r1), _unit_dir(r2)
    o = np.zeros(2)

    def f(t):
        x = (1 - t) * u1 + t * u2
        return line_distance_oracle(N, x, o, r1, metric) - line_distance_oracle(N, x, o, r2, metric)

    t = brentq(f, 0.0, 1.0, xtol=1e-15, rtol=1e-15, maxiter=200)
    return _unit_dir((1 - t) * u1 + t * u2)


def _sides(T: Triangle):
    v = T.ccw
    return v, [(v[j], v[(j + 1) % 3] - v[j]) for j in range(3)]


def _equal_distance_center(N: Norm, T: Triangle, metric: Metric):
    """Largest inscribed ball of the metric.

    The inradius LP maximizes the smallest of three affine distance
    functions whose gradients span the plane positively, so the optimum
    is where all three agree; that is a 3x3 linear solve.
    """
    dual = _dual(N, metric)
    _, sides = _sides(T)
    A = np.zeros((3, 3))
    rhs = np.zeros(3)
    for j, (u, e) in enumerate(sides):
        D = dual(e)
        # symp(e, c - u) / D - r = 0
        A[j] = [-e[1] / D, e[0] / D, -1.0]
        rhs[j] = float(symp(e, u)) / D
    sol = np.linalg.solve(A, rhs)
    return sol[:2], float(sol[2])


def _width_dirs(N: Norm, T: Triangle) -> list:
    v = T.vertices
    dirs = [v[1] - v[0], v[2] - v[1], v[0] - v[2]]
    if isinstance(N, PolygonNorm):
        dirs += list(N.V) + list(N.anti().V)
    return dirs


def width(N: Norm, T: Triangle, d) -> float:
    vals = symp(T.vertices, as_point(d))
    return float(vals.max() - vals.min()) / N.antinorm(d)


def min_width(N, T: Triangle) -> float:
    """Minimum norm distance between two parallel supporting lines of ``T``.

    For a polygonal norm the width is a ratio of two functions that are linear
    between consecutive candidate directions, so candidates are exact; for
    smooth norms each bracket is refined by bounded scalar search.
    """
    N = make_norm(N)
    dirs = _width_dirs(N, T)
    best = min(width(N, T, d) for d in dirs)
    if isinstance(N, PolygonNorm):
        return best
    th = sorted(math.atan2(d[1], d[0]) % math.pi for d in dirs)
    th.append(th[0] + math.pi)
    for lo, hi in zip(th[:-1], th[1:]):
        if hi - lo < 1e-12:
            continue
        r = minimize_scalar(
            lambda t: width(N, T, (math.cos(t), math.sin(t))),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-10},
        )
        best = min(best, float(r.fun))
    return best


def anti_side_lengths(N: Norm, T: Triangle) -> np.ndarray:
    v = T.vertices
    return np.array([N.antinorm(v[(i + 2) % 3] - v[(i + 1) % 3]) for i in range(3)])


def is_anti_equilateral(N, T: Triangle, tol: float = EXACT_TOL) -> bool:
    L = anti_side_lengths(make_norm(N), T)
    return float(L.max() - L.min()) <= tol * float(L.max())


def _shrunk_triangles(T: Triangle, rng, count: int):
    v = T.vertices
    out = []
    while len(out) < count:
        w = v.copy()
        moved = rng.random(3) < 0.5
        if not moved.any():
            moved[rng.integers(3)] = True
        for i in np.flatnonzero(moved):
            bary = rng.dirichlet(np.ones(3))
            w[i] = v[i] + rng.uniform(0.01, 0.3) * (bary @ v - v[i])
        try:
            out.append(Triangle.of(w))
        except GeometryError:
            continue
    return out


def _width_preserving_cut(N: Norm, T: Triangle, w: float):
    v = T.vertices
    for t in (1e-2, 3e-3, 1e-3, 1e-4, 1e-5):
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                u = v.copy()
                u[i] = v[i] + t * (v[j] - v[i])
                S = Triangle.of(u)
                if min_width(N, S) >= w * (1 - 1e-9):
                    return S
    return None


def reduced_check(N, T: Triangle, seed: int = 0) -> tuple[bool, bool]:
    """``(is_reduced, consistent)``: the anti-equilateral criterion and a direct width test.

    For an anti-equilateral triangle, 20 random proper sub-triangles must all
    be strictly narrower; otherwise a sub-triangle of equal width must exist
    and is searched by sliding one vertex along an adjacent side.
    """
    N = make_norm(N)
    crit = is_anti_equilateral(N, T, tol=1e-6)
    w = min_width(N, T)
    if crit:
        rng = np.random.default_rng(seed)
        direct = all(min_width(N, S) < w * (1 - 1e-12) for S in _shrunk_triangles(T, rng, 20))
    else:
        direct = _width_preserving_cut(N, T, w) is None
    return crit, crit == direct


def triangle_report(N, T: Triangle, seed: int = 0) -> TriangleReport:
    N = make_norm(N)
    v = T.vertices
    beta, eta, eta_a = [], [], []
    for i in range(3):
        q, r = v[(i + 1) % 3], v[(i + 2) % 3]
        beta.append(N.gauge(r - q))
        eta.append(line_distance(N, v[i], q, r - q, "norm"))
        eta_a.append(line_distance(N, v[i], q, r - q, "antinorm"))
    c, r = _equal_distance_center(N, T, "norm")
    ca, ra = _equal_distance_center(N, T, "antinorm")
    red, consistent = reduced_check(N, T, seed)
    return TriangleReport(
        beta=tuple(beta),
        eta=tuple(eta),
        eta_anti=tuple(eta_a),
        area=T.area(),
        centroid=T.centroid(),
        incenter=c,
        inradius=r,
        anti_incenter=ca,
        anti_inradius=ra,
        is_anti_equilateral=is_anti_equilateral(N, T),
        min_width=min_width(N, T),
        is_reduced=red,
        reduced_crosscheck=consistent,
    )


def incenter(N, T: Triangle) -> tuple[np.ndarray, float]:
    return _equal_distance_center(make_norm(N), T, "norm")


def anti_incenter(N, T: Triangle) -> tuple[np.ndarray, float]:
    return _equal_distance_center(make_norm(N), T, "antinorm")


def _check_rays(r1, r2):
    r1, r2 = as_point(r1), as_point(r2)
    n1, n2 = np.linalg.norm(r1), np.linalg.norm(r2)
    if n1 == 0 or n2 == 0:
        raise GeometryError("zero ray")
    if abs(float(symp(r1, r2))) <= 1e-12 * n1 * n2:
        raise GeometryError("rays are parallel or opposite: no unique bisector")
    return r1, r2


def _unit_dir(v):
    return v / np.linalg.norm(v)


def busemann_bisector(N, vertex, ray1, ray2) -> np.ndarray:
    """Direction from the vertex to the midpoint of the two unit points on the rays."""
    N = make_norm(N)
    r1, r2 = _check_rays(ray1, ray2)
    return _unit_dir(r1 / N.gauge(r1) + r2 / N.gauge(r2))


def glogovskii_bisector(N, vertex, ray1, ray2, metric: Metric = "norm") -> np.ndarray:
    """Direction of the points equidistant from both sides in the given metric.

    Along ``r1/D(r1) + r2/D(r2)`` (``D`` the dual of the metric) both side
    distances equal ``|symp(r1, r2)| / (D(r1) D(r2))`` per unit parameter.
    """
    N = make_norm(N)
    r1, r2 = _check_rays(ray1, ray2)
    D = _dual(N, metric)
    return _unit_dir(r1 / D(r1) + r2 / D(r2))


def angle_between(u, v) -> float:
    u, v = as_point(u), as_point(v)
    return abs(math.atan2(float(symp(u, v)), float(u @ v)))


def _meet(p, d, q, e):
    A = np.column_stack([d, -e])
    t = np.linalg.solve(A, q - p)
    return p + t[0] * d


def bisector_concurrency(N, T: Triangle, kind: str = "busemann") -> tuple[np.ndarray, float]:
    """Common point of the three internal bisectors and the spread of pairwise meets."""
    N = make_norm(N)
    v = T.vertices
    dirs = []
    for i in range(3):
        r1, r2 = v[(i + 1) % 3] - v[i], v[(i + 2) % 3] - v[i]
        if kind == "busemann":
            dirs.append(busemann_bisector(N, v[i], r1, r2))
        elif kind == "glogovskii":
            dirs.append(glogovskii_bisector(N, v[i], r1, r2, "norm"))
        elif kind == "anti-glogovskii":
            dirs.append(glogovskii_bisector(N, v[i], r1, r2, "antinorm"))
        else:
            raise GeometryError(f"unknown bisector kind {kind!r}")
    pts = np.array([_meet(v[i], dirs[i], v[j], dirs[j]) for i, j in ((0, 1), (1, 2), (2, 0))])
    spread = float(max(np.linalg.norm(pts[i] - pts[j]) for i in range(3) for j in range(i)))
    return pts.mean(axis=0), spread


def gbt_spread(N, T: Triangle) -> float:
    """Relative spread of ``beta_i * eta_i / 2`` over the three vertices."""
    N = make_norm(N)
    v = T.vertices
    vals = []
    for i in range(3):
        q, r = v[(i + 1) % 3], v[(i + 2) % 3]
        vals.append(0.5 * N.gauge(r - q) * line_distance(N, v[i], q, r - q))
    return (max(vals) - min(vals)) / max(vals)


def viviani_defect(N, T: Triangle, points) -> float:
    """Spread of the signed sum of norm distances to the side lines."""
    N = make_norm(N)
    if not is_anti_equilateral(N, T, tol=1e-9):
        raise GeometryError("triangle is not anti-equilateral")
    _, sides = _sides(T)
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    total = np.zeros(len(P))
    for u, e in sides:
        total += symp(e, P - u) / N.antinorm(e)
    return float(total.max() - total.min())


def anti_equilateral_triangle(N, theta: float = 0.0, size: float = 1.0) -> Triangle:
    """Triangle with all three sides of antinorm length ``size``.

    Take ``u`` on the anticircle ``size * ∂I`` at polar angle ``theta`` and
    ``w`` on it with ``antinorm(w - u) = size`` (found by bisection along the
    anticircle); then ``o, u, w`` is anti-equilateral.
    """
    N = make_norm(N)

    def on_iso(t):
        d = np.array([math.cos(t), math.sin(t)])
        return size * d / N.antinorm(d)

    u = on_iso(theta)
    f = lambda t: N.antinorm(on_iso(t) - u) - size
    lo, hi = theta, theta + math.pi  # f(lo) = -size < 0, f(hi) = size > 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return Triangle(np.zeros(2), u, on_iso(0.5 * (lo + hi)))


# -- Fermat-Torricelli ----------------------------------------------------


def ft_objective(N: Norm, T: Triangle, x) -> float:
    x = as_point(x)
    return float(sum(N.gauge(x - a) for a in T.vertices))


def _ft_polygon(N: PolygonNorm, T: Triangle):
    A = T.vertices
    F = N.F
    m = len(F)
    rows, rhs = [], []
    for k in range(3):
        for j in range(m):
            row = np.zeros(5)
            row[:2] = F[j]
            row[2 + k] = -1.0
            rows.append(row)
            rhs.append(float(F[j] @ A[k]))
    A_ub, b_ub = np.array(rows), np.array(rhs)
    bounds = [(None, None)] * 5
    c = np.array([0, 0, 1, 1, 1], dtype=float)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise GeometryError(f"Fermat-Torricelli LP failed: {res.message}")
    val = float(res.fun)
    slack = 1e-9 * max(1.0, abs(val))
    # lexicographic tie-break over the optimal face
    x = res.x[:2]
    A2 = np.vstack([A_ub, c])
    b2 = np.append(b_ub, val + slack)
    r1 = linprog([1, 0, 0, 0, 0], A_ub=A2, b_ub=b2, bounds=bounds, method="highs")
    if r1.status == 0:
        x = r1.x[:2]
        A3 = np.vstack([A2, [1, 0, 0, 0, 0]])
        b3 = np.append(b2, r1.x[0] + slack)
        r2 = linprog([0, 1, 0, 0, 0], A_ub=A3, b_ub=b3, bounds=bounds, method="highs")
        if r2.status == 0:
            x = r2.x[:2]
    return _snap_ft(N, T, x)


def _snap_ft(N: PolygonNorm, T: Triangle, x):
    """Replace the LP point by the exact arrangement vertex it approximates.

    The objective is linear off the rays ``a_k + R v`` (``v`` a vertex of
    ``B``), so optimal vertices are terminals or crossings of those lines.
    """
    A = T.vertices
    dirs = N.V[: len(N.V) // 2]
    lines = [(a, d) for a in A for d in dirs]
    cands = [a for a in A]
    scale = T.scale
    for i in range(len(lines)):
        p, d = lines[i]
        for j in range(i + 1, len(lines)):
            q, e = lines[j]
            den = float(symp(d, e))
            if abs(den) < 1e-12:
                continue
            t = float(symp(q - p, e)) / den
            y = p + t * d
            if np.max(np.abs(y - x)) <= 1e-4 * scale:
                cands.append(y)
    base = ft_objective(N, T, x)
    good = [y for y in cands if ft_objective(N, T, y) <= base + 1e-12 * scale]
    if not good:
        return x
    best = min(ft_objective(N, T, y) for y in good)
    good = [y for y in good if ft_objective(N, T, y) <= best + 1e-12 * scale]
    return min(good, key=lambda y: (round(y[0], 12), round(y[1], 12)))


def _ft_smooth(N: Norm, T: Triangle):
    A = T.vertices
    for k in range(3):
        g = sum(N.gradient(A[k] - A[j]) for j in range(3) if j != k)
        if N.support(g) <= 1.0 + 1e-12:
            return A[k].copy()
    f = lambda x: ft_objective(N, T, x)

    def grad(x):
        return sum(N.gradient(x - a) for a in A)

    x0 = T.centroid()
    res = minimize(f, x0, jac=grad, method="BFGS", options={"gtol": 1e-13, "maxiter": 2000})
    x = res.x
    # a few Weiszfeld-type Newton polishes on the gradient equation
    res2 = least_squares(grad, x, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    if f(res2.x) <= f(x):
        x = res2.x
    return x


def fermat_torricelli(N, T: Triangle) -> tuple[np.ndarray, float]:
    N = make_norm(N)
    x = _ft_polygon(N, T) if isinstance(N, PolygonNorm) else _ft_smooth(N, T)
    return x, ft_objective(N, T, x)


def _line_triangle(pts, dirs):
    out = []
    for i in range(3):
        j = (i + 1) % 3
        if abs(float(symp(dirs[i], dirs[j]))) < 1e-12:
            return None
        out.append(_meet(pts[i], dirs[i], pts[j], dirs[j]))
    return np.array(out)


def _anti_eq_defect(N: Norm, tri) -> float:
    if tri is None:
        return math.inf
    L = np.array([N.antinorm(tri[(i + 1) % 3] - tri[i]) for i in range(3)])
    if L.max() <= 0:
        return math.inf
    return float((L.max() - L.min()) / L.max())


@dataclass(frozen=True)
class FTCheck:
    ok: bool
    trivial: bool
    defect: float


def verify_ft_characterization(N, T: Triangle, point=None, grid: int = 32) -> FTCheck:
    """Tangent lines at the unit points towards the terminals form an anti-equilateral triangle."""
    N = make_norm(N)
    p = fermat_torricelli(N, T)[0] if point is None else as_point(point)
    A = T.vertices
    if min(np.max(np.abs(a - p)) for a in A) <= 1e-9 * T.scale:
        return FTCheck(True, True, 0.0)
    units = [p + (a - p) / N.gauge(a - p) for a in A]
    cones = [N.normal_cone(a - p) for a in A]

    def tri_of(ts):
        dirs = [c.direction(float(t)) for c, t in zip(cones, ts)]
        return _line_triangle(units, dirs)

    axes = [np.array([0.0]) if c.is_singleton else np.linspace(0.0, 1.0, grid) for c in cones]
    best = (math.inf, None)
    for t0 in axes[0]:
        for t1 in axes[1]:
            for t2 in axes[2]:
                d = _anti_eq_defect(N, tri_of((t0, t1, t2)))
                if d < best[0]:
                    best = (d, np.array([t0, t1, t2]))
    free = [i for i, c in enumerate(cones) if not c.is_singleton]
    if best[0] > 1e-6 and free and best[1] is not None:
        t = best[1].copy()

        def resid(z):
            tt = t.copy()
            tt[free] = z
            tri = tri_of(tt)
            if tri is None:
                return np.full(2, 1e3)
            L = np.array([N.antinorm(tri[(i + 1) % 3] - tri[i]) for i in range(3)])
            return np.array([L[0] - L[1], L[1] - L[2]]) / max(L.max(), 1e-300)

        r = least_squares(resid, t[free], bounds=(0.0, 1.0), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        tt = t.copy()
        tt[free] = r.x
        d = _anti_eq_defect(N, tri_of(tt))
        if d < best[0]:
            best = (d, tt)
    return FTCheck(best[0] <= 1e-6, False, float(best[0]))


def ft_grid_oracle(N, T: Triangle, n: int = 1000, levels: int = 4) -> tuple[np.ndarray, float]:
    """Brute-force minimum on an ``n x n`` grid over the bounding box, then zoomed grids."""
    N = make_norm(N)
    A = T.vertices
    lo, hi = A.min(axis=0), A.max(axis=0)
    best = (math.inf, None)
    xs = np.linspace(lo[0], hi[0], n)
    ys = np.linspace(lo[1], hi[1], n)
    step = np.array([xs[1] - xs[0], ys[1] - ys[0]])
    for _level in range(levels + 1):
        X, Y = np.meshgrid(xs, ys)
        P = np.column_stack([X.ravel(), Y.ravel()])
        vals = sum(N.gauge_many(P - a) for a in A)
        i = int(np.argmin(vals))
        if vals[i] < best[0]:
            best = (float(vals[i]), P[i])
        c = best[1]
        xs = np.linspace(c[0] - 4 * step[0], c[0] + 4 * step[0], 101)
        ys = np.linspace(c[1] - 4 * step[1], c[1] + 4 * step[1], 101)
        step = np.array([xs[1] - xs[0], ys[1] - ys[0]])
    return best[1], best[0]
