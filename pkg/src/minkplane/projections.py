"""Radial and metric projections, nearest points, bisectors, d-segments, ball hulls."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq, linprog

from . import kernels
from .geometry import (
    ConvexPolygon,
    GeometryError,
    as_point,
    convex_hull,
    hausdorff,
    intersect_convex,
    rot90,
    rot_neg90,
    signed_area,
    symp,
)
from .norms import Norm, PolygonNorm, make_norm
from .parallel import run_chunks

# -- maps -------------------------------------------------------------------


def radial_projection(N, x) -> np.ndarray:
    N = make_norm(N)
    x = as_point(x)
    g = N.gauge(x)
    return x if g <= 1.0 else x / g


def radial_many(N: Norm, P: np.ndarray) -> np.ndarray:
    g = N.gauge_many(P)
    return np.where((g > 1.0)[:, None], P / np.maximum(g, 1.0)[:, None], P)


@dataclass(frozen=True)
class Projection:
    point: np.ndarray
    distance: float
    face: tuple  # (lo, hi); equal when the nearest point is unique

    @property
    def unique(self) -> bool:
        return bool(np.all(self.face[0] == self.face[1]))


def metric_projection(N, S: ConvexPolygon, x) -> Projection:
    """Nearest point of ``S`` to ``x``; the midpoint of the optimal face is returned."""
    from .norms import nearest_in_polygon

    N = make_norm(N)
    d, lo, hi = nearest_in_polygon(N, S, x)
    return Projection(0.5 * (lo + hi), float(d), (lo, hi))


def metric_projection_many(N: PolygonNorm, S: ConvexPolygon, P: np.ndarray) -> np.ndarray:
    R = kernels.polygon_nearest_many(N.F, N.V, np.ascontiguousarray(S.vertices), P)
    return 0.5 * (R[:, 1:3] + R[:, 3:5])


def star_gauge(S: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Gauge of a polygon star-shaped about the origin (vertices in angular order)."""
    S = np.asarray(S, dtype=float)
    ang = np.arctan2(S[:, 1], S[:, 0])
    k0 = int(np.argmin(ang))
    S = np.roll(S, -k0, axis=0)
    ang = np.unwrap(np.roll(ang, -k0))
    if np.any(np.diff(ang) <= 0) or ang[-1] - ang[0] >= 2 * math.pi:
        raise GeometryError("polygon is not star-shaped about the origin")
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    th = np.arctan2(P[:, 1], P[:, 0])
    th = np.where(th < ang[0], th + 2 * math.pi, th)
    j = np.searchsorted(ang, th, side="right") - 1
    j = np.clip(j, 0, len(S) - 1)
    a = S[j]
    b = S[(j + 1) % len(S)]
    e = b - a
    # P / g lies on segment a + t e:  symp(a + t e, P) = 0 and g = symp(e, P)/symp(e, a)... solved below
    num = symp(e, P)
    den = symp(e, a)
    out = num / den
    out[~np.any(P, axis=1)] = 0.0
    return out


def star_radial_many(S: np.ndarray, P: np.ndarray) -> np.ndarray:
    g = star_gauge(S, P)
    return np.where((g > 1.0)[:, None], P / np.maximum(g, 1.0)[:, None], P)


# -- expansion scans ----------------------------------------------------------


@dataclass(frozen=True)
class ScanResult:
    max_ratio: float
    witness: tuple = field(default=())

    def as_dict(self) -> dict:
        return {"max_ratio": self.max_ratio, "witness": [np.asarray(w).tolist() for w in self.witness]}


def _metric_many(N: Norm, metric: str):
    if metric == "norm":
        return N.gauge_many
    if metric == "antinorm":
        return N.antinorm_many
    raise GeometryError(f"metric must be 'norm' or 'antinorm', not {metric!r}")


def _map_many(N: Norm, mapping) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(mapping, str) and mapping == "radial":
        return lambda P: radial_many(N, P)
    if isinstance(mapping, ConvexPolygon):
        if isinstance(N, PolygonNorm):
            return lambda P: metric_projection_many(N, mapping, P)
        return lambda P: np.array([metric_projection(N, mapping, p).point for p in P])
    if isinstance(mapping, tuple) and mapping[0] == "star":
        S = np.asarray(mapping[1], dtype=float)
        return lambda P: star_radial_many(S, P)
    raise GeometryError("map must be 'radial', a ConvexPolygon, or ('star', vertices)")


def _ratios(fmap, dist, V, W):
    d0 = dist(V - W)
    d1 = dist(fmap(V) - fmap(W))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(d0 > 1e-12, d1 / d0, 0.0)
    return r


def _sample_points(rng, n, radius):
    # half uniform in a box, half on a band around the unit sphere scale
    U = rng.uniform(-radius, radius, size=(n, 2))
    k = n // 2
    th = rng.uniform(0, 2 * math.pi, k)
    r = radius * rng.uniform(0.2, 0.8, k)
    U[:k] = np.column_stack([r * np.cos(th), r * np.sin(th)])
    return U


def _local_max(fmap, dist, v, w, steps, h0):
    x = np.concatenate([v, w])
    f = lambda z: float(_ratios(fmap, dist, z[None, :2], z[None, 2:])[0])
    best = f(x)
    h = h0
    for _ in range(steps):
        improved = False
        for i in range(4):
            for s in (1.0, -1.0):
                z = x.copy()
                z[i] += s * h
                val = f(z)
                if val > best:
                    best, x, improved = val, z, True
        if not improved:
            h *= 0.5
    return best, (x[:2], x[2:])


def nonexpansive_scan(
    N,
    mapping="radial",
    metric: str = "antinorm",
    trials: int = 10_000,
    seed: int = 0,
    adaptive: bool = False,
    radius: float | None = None,
) -> ScanResult:
    """Largest sampled ratio ``dist(f(v), f(w)) / dist(v, w)``.

    With ``adaptive`` the 10 best pairs are refined by 50 sweeps of
    coordinate-wise hill climbing.
    """
    N = make_norm(N)
    fmap = _map_many(N, mapping)
    dist = _metric_many(N, metric)
    if radius is None:
        if isinstance(mapping, ConvexPolygon):
            radius = 3.0 * float(np.max(np.abs(mapping.vertices)))
        elif isinstance(mapping, tuple):
            radius = 3.0 * float(np.max(np.abs(mapping[1])))
        else:
            radius = 3.0 * float(np.max(np.abs(N.ball().vertices)))

    def chunk(start, stop, rng):
        n = stop - start
        V = _sample_points(rng, n, radius)
        W = V + rng.normal(size=(n, 2)) * radius * 10.0 ** rng.uniform(-3, 0, size=(n, 1))
        r = _ratios(fmap, dist, V, W)
        order = np.argsort(-r)[:10]
        return [(float(r[i]), V[i], W[i]) for i in order]

    cands = sorted(
        (c for part in run_chunks(chunk, trials, seed, chunk=2048) for c in part),
        key=lambda c: -c[0],
    )
    best = cands[0]
    result = ScanResult(best[0], (best[1], best[2]))
    if adaptive:
        for r0, v, w in cands[:10]:
            val, pair = _local_max(fmap, dist, v, w, 50, 0.05 * radius)
            if val > result.max_ratio:
                result = ScanResult(val, pair)
    return result


def antiball_projection_uniqueness_scan(N, S, trials: int = 10_000, seed: int = 0):
    """Scan the radial projection onto a star-shaped ``S`` for norm expansion.

    Returns ``(no_witness, result)``; no expansive pair should exist exactly
    when ``S`` is an antiball centred at the origin.
    """
    S = S.vertices if isinstance(S, ConvexPolygon) else np.asarray(S, dtype=float)
    res = nonexpansive_scan(N, ("star", S), "norm", trials, seed, adaptive=True)
    return res.max_ratio <= 1.0 + 1e-9, res


# -- nearest points on lines ------------------------------------------------------


def nearest_on_line(N, x, q, d, metric: str = "norm") -> np.ndarray:
    """Point of the line ``q + t d`` nearest to ``x``; midpoint of ties."""
    N = make_norm(N)
    M = N if metric == "norm" else (N.anti() if metric == "antinorm" else None)
    if M is None:
        raise GeometryError(f"metric must be 'norm' or 'antinorm', not {metric!r}")
    x, q, d = as_point(x), as_point(q), as_point(d)
    if not np.any(d):
        raise GeometryError("zero line direction")
    if isinstance(M, PolygonNorm):
        _, lo, hi = kernels.line_min_gauge(M.F, M.V, x[0], x[1], q[0], q[1], d[0], d[1])
        return q + 0.5 * (lo + hi) * d
    # the foot m has m - x pointing at the ball point whose tangent is parallel to d
    z = M.support_point(rot_neg90(d))
    s = -float(symp(x - q, d)) / float(symp(z, d))
    return x + s * z


# -- bisectors and strips ---------------------------------------------------------


def bisector_sample(N, p, q, count: int = 200, extent: float = 5.0) -> np.ndarray:
    """Points ``x`` with ``gauge(x - p) = gauge(x - q)`` on lines parallel to ``q - p``."""
    N = make_norm(N)
    if not N.is_strictly_convex:
        raise GeometryError("strict convexity required")
    p, q = as_point(p), as_point(q)
    u = q - p
    L = float(np.linalg.norm(u))
    if L == 0:
        raise GeometryError("p and q coincide")
    mid = 0.5 * (p + q)
    perp = rot90(u) / L
    out = []
    for o in np.linspace(-extent, extent, count) * L:
        base = mid + o * perp
        g = lambda t: N.gauge(base + t * u - p) - N.gauge(base + t * u - q)
        lo, hi = -1.0, 1.0
        while g(lo) > 0 or g(hi) < 0:
            lo, hi = 2 * lo, 2 * hi
            if hi > 1e6:
                break
        else:
            t = brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
            out.append(base + t * u)
    return np.array(out).reshape(-1, 2)


@dataclass(frozen=True)
class StripSpec:
    p: np.ndarray
    q: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        for k in ("p", "q", "direction"):
            object.__setattr__(self, k, as_point(getattr(self, k)))
        if abs(float(symp(self.direction, self.q - self.p))) <= 1e-12 * np.linalg.norm(self.direction) * np.linalg.norm(self.q - self.p):
            raise GeometryError("strip direction is parallel to q - p")


def bisector_strip(N, p, q, variant: str = "anti") -> StripSpec:
    """Strip bounded by the tangents at ``p`` and ``q`` of the circle with diameter ``pq``.

    ``variant="anti"`` uses the anticircle (tangent direction ``v`` with
    ``v ⊣ q - p``); ``variant="norm"`` uses the norm circle.
    """
    N = make_norm(N)
    p, q = as_point(p), as_point(q)
    u = q - p
    if variant == "anti":
        v = N.anti().normal_cone(u).direction(0.0)
    elif variant == "norm":
        v = N.normal_cone(u).direction(0.0)
    else:
        raise GeometryError("variant must be 'anti' or 'norm'")
    return StripSpec(p, q, v)


def strip_test(samples, strip: StripSpec, margin: float = 1e-9) -> bool:
    """All samples strictly between the two bounding lines."""
    P = np.asarray(samples, dtype=float).reshape(-1, 2)
    w = float(symp(strip.q - strip.p, strip.direction))
    lam = symp(P - strip.p, strip.direction) / w
    return bool(np.all((lam > margin) & (lam < 1.0 - margin)))


# -- d-segments -------------------------------------------------------------------


@dataclass(frozen=True)
class DSegmentRegion:
    a: np.ndarray
    b: np.ndarray
    pieces: tuple  # vertex arrays of convex pieces (a degenerate piece is the segment)

    def area(self) -> float:
        return float(sum(abs(signed_area(P)) for P in self.pieces))

    def vertices(self) -> np.ndarray:
        return np.vstack(self.pieces)

    def main_piece(self) -> np.ndarray:
        return max(self.pieces, key=lambda P: abs(signed_area(P)))

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = as_point(x)
        for P in self.pieces:
            if len(P) >= 3 and abs(signed_area(P)) > 0:
                if kernels.inside_convex(np.ascontiguousarray(P), x[0], x[1], tol):
                    return True
            else:
                a, b = P[0], P[-1]
                e = b - a
                t = float((x - a) @ e / (e @ e))
                if -tol <= t <= 1 + tol and np.linalg.norm(a + t * e - x) <= tol * max(1.0, np.linalg.norm(e)):
                    return True
        return False


def d_member(N, a, b, x, tol: float = 1e-9) -> bool:
    """``x`` is metrically between ``a`` and ``b``."""
    N = make_norm(N)
    a, b, x = as_point(a), as_point(b), as_point(x)
    ab = N.gauge(b - a)
    return abs(N.gauge(x - a) + N.gauge(b - x) - ab) <= tol * ab


def d_segment(N, a, b) -> DSegmentRegion:
    """All points metrically between ``a`` and ``b``.

    For a polygonal norm this is the union over facets ``F`` attaining the
    norm of ``b - a`` of ``(a + cone F) ∩ (b - cone F)``; each piece is a
    parallelogram with sides along the two vertex rays of ``F``.
    """
    N = make_norm(N)
    a, b = as_point(a), as_point(b)
    u = b - a
    if not np.any(u):
        raise GeometryError("a and b coincide")
    if not isinstance(N, PolygonNorm):
        return DSegmentRegion(a, b, (np.array([a, b]),))
    act = N.active_facets(u, tol=1e-12)
    m = len(N.V)
    pieces = []
    for j in act:
        v1, v2 = N.V[j], N.V[(j + 1) % m]
        s, t = np.linalg.solve(np.column_stack([v1, v2]), u)
        s, t = max(float(s), 0.0), max(float(t), 0.0)
        if s * t <= 1e-18 * float(u @ u):
            pieces.append(np.array([a, b]))
        else:
            pieces.append(np.array([a, a + s * v1, b, a + t * v2]))
    return DSegmentRegion(a, b, tuple(pieces))


# -- ball hulls ---------------------------------------------------------------------


def _active_functionals(N: PolygonNorm, u):
    return N.F[N.active_facets(u)]


def ball_hull_member(N, A, z, resolution: int = 200, far_dirs: int = 720, tol: float = 1e-9) -> bool:
    """Sampled test: reject ``z`` if a sampled ball containing ``A`` misses it.

    Centres: a ``resolution x resolution`` grid over the disk of radius
    ``10 * diam(A)`` around the centroid, plus far-field limits in
    ``far_dirs`` directions, where balls become half-planes.
    """
    N = make_norm(N)
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    z = as_point(z)
    c0 = A.mean(axis=0)
    diam = max(float(np.max(np.linalg.norm(A[:, None] - A[None], axis=-1))), 1e-12)
    R = 10.0 * diam
    g = np.linspace(-R, R, resolution)
    X, Y = np.meshgrid(g, g)
    C = np.column_stack([X.ravel(), Y.ravel()])
    C = C[np.hypot(C[:, 0], C[:, 1]) <= R] + c0
    rad = np.max(np.stack([N.gauge_many(a - C) for a in A]), axis=0)
    if np.any(N.gauge_many(z - C) > rad + tol):
        return False
    th = np.arange(far_dirs) * (2 * math.pi / far_dirs)
    for t in th:
        u = np.array([math.cos(t), math.sin(t)])
        if isinstance(N, PolygonNorm):
            Fa = _active_functionals(N, u)
            hz = float(np.max(Fa @ z))
            hA = float(np.max(A @ Fa.T))
        else:
            gr = N.gradient(u)
            hz, hA = float(gr @ z), float(np.max(A @ gr))
        # ball with centre c0 - R' u, R' -> inf:  gauge(x - c) - R' ~ D_u gauge . x
        if hz > hA + tol:
            return False
    return True


def ball_hull_polygon(N: PolygonNorm, A) -> np.ndarray:
    """Intersection of all balls containing ``A`` for a polygonal norm.

    Every ball is cut out by half-planes with the facet normals of ``B``, so
    the hull is ``{x : f_j . x <= beta_j}`` with ``beta_j`` the least value of
    ``f_j . c + r`` over balls ``c + r B`` containing ``A``: one LP per facet.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    F = N.F
    rows, rhs = [], []
    for a in A:
        for f in F:
            # f . (a - c) <= r
            rows.append([-f[0], -f[1], -1.0])
            rhs.append(-float(f @ a))
    rows, rhs = np.array(rows), np.array(rhs)
    beta = []
    for f in F:
        res = linprog([f[0], f[1], 1.0], A_ub=rows, b_ub=rhs, bounds=[(None, None)] * 2 + [(0, None)], method="highs")
        if res.status != 0:
            raise GeometryError(f"ball hull LP failed: {res.message}")
        beta.append(float(res.fun))
    beta = np.array(beta)
    # clip a large box by the half-planes; a degenerate hull stays a segment
    scale = 10.0 * (1.0 + float(np.max(np.abs(A))))
    P = np.array([[-scale, -scale], [scale, -scale], [scale, scale], [-scale, scale]])
    from .geometry import clip

    for f, bj in zip(F, beta):
        P = clip(P, f, bj + 1e-12 * scale)
    return P


def sym_diff_area(P: np.ndarray, Q: np.ndarray) -> float:
    PQ = intersect_convex(P, Q)
    aPQ = abs(signed_area(PQ)) if len(PQ) >= 3 else 0.0
    return abs(signed_area(P)) + abs(signed_area(Q)) - 2.0 * aPQ


@dataclass(frozen=True)
class LassakResult:
    ok: bool
    worst: float
    pairs: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def lassak_pair_defect(N: PolygonNorm, a, b, resolution: int | None = None) -> float:
    """Relative disagreement between ``[a, b]_d`` and the antinorm ball hull of ``{a, b}``."""
    D = d_segment(N, a, b)
    H = ball_hull_polygon(N.anti(), np.array([a, b]))
    area = D.area()
    if area <= 1e-12 * float(np.sum((b - a) ** 2)):
        # both should collapse to the segment
        Hp = ConvexPolygon(convex_hull(H)) if len(convex_hull(H)) >= 3 else None
        if Hp is None:
            return 0.0
        return abs(Hp.area()) / float(np.sum((b - a) ** 2))
    P = convex_hull(D.main_piece())
    Q = convex_hull(H)
    return sym_diff_area(P, Q) / area


def lassak_duality_check(N, pairs: int = 20, seed: int = 0, tol: float = 1e-3) -> LassakResult:
    N = make_norm(N)
    if not isinstance(N, PolygonNorm):
        raise GeometryError("Lassak check needs a polygon backend")

    def chunk(start, stop, rng):
        worst = 0.0
        for _ in range(start, stop):
            a, b = rng.normal(size=(2, 2))
            worst = max(worst, lassak_pair_defect(N, a, b))
        return worst

    worst = max(run_chunks(chunk, pairs, seed, chunk=8))
    return LassakResult(worst <= tol, worst, pairs)


def _sample_in(P: ConvexPolygon, rng, n: int) -> np.ndarray:
    lo, hi = P.vertices.min(axis=0), P.vertices.max(axis=0)
    out = []
    Pv = np.ascontiguousarray(P.vertices)
    while len(out) < n:
        x = rng.uniform(lo, hi)
        if kernels.inside_convex(Pv, x[0], x[1], 0.0):
            out.append(x)
    return np.array(out)


def antiball_dconvex_check(N, pairs: int = 1000, seed: int = 0) -> bool:
    """Every sampled d-segment between points of ``I`` stays inside ``I``."""
    N = make_norm(N)
    I = N.isoperimetrix()
    anti = N.anti()
    rng = np.random.default_rng(seed)
    pts = _sample_in(I, rng, 2 * pairs)
    for a, b in zip(pts[0::2], pts[1::2]):
        D = d_segment(N, a, b)
        if np.any(anti.gauge_many(D.vertices()) > 1.0 + 1e-9):
            return False
    return True
