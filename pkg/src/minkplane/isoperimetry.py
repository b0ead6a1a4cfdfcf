"""Perimeters, anticircle fits, isoperimetric inequalities, Zenodorus polygons."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .geometry import (
    ConvexPolygon,
    GeometryError,
    as_point,
    boundary_arc,
    halfplane_intersection,
    hausdorff,
    rot90,
    rot_neg90,
    signed_area,
    symp,
)
from .norms import POLY_N, Norm, PolygonNorm, make_norm
from .parallel import run_chunks

SLACK_TOL = 1e-9


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before meeting its tolerance."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class AnticircleFit:
    center: np.ndarray
    radius: float

    def as_dict(self) -> dict:
        return {"center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True)
class IsoperimetricReport:
    perimeter: float
    area: float
    iota: float
    rho: float
    sigma: float
    inequality_slacks: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "perimeter": self.perimeter,
            "area": self.area,
            "iota": self.iota,
            "rho": self.rho,
            "sigma": self.sigma,
            "inequality_slacks": dict(self.inequality_slacks),
        }


@dataclass(frozen=True)
class ArcMeasure:
    mu_l: float
    mu_a: float
    mu_anti: float  # antinorm arc length, normalized the same way

    def as_dict(self) -> dict:
        return {"mu_l": self.mu_l, "mu_a": self.mu_a, "mu_anti": self.mu_anti}


def perimeter(N, C) -> float:
    N = make_norm(N)
    E = C.edges if isinstance(C, ConvexPolygon) else np.diff(np.vstack([C, C[:1]]), axis=0)
    return float(np.sum(N.gauge_many(E)))


def iso_support(N: Norm, n) -> float:
    """``max{n . y : y in I}``, which equals ``gauge(J n)``."""
    return N.gauge(rot90(as_point(n)))


def inscribed_anticircle(N, C: ConvexPolygon) -> AnticircleFit:
    """Largest ``c + rho I`` inside ``C`` (linear program in ``(c, rho)``)."""
    N = make_norm(N)
    normals = C.normals
    A = np.column_stack([normals, [iso_support(N, n) for n in normals]])
    b = C.offsets
    res = linprog([0, 0, -1], A_ub=A, b_ub=b, bounds=[(None, None)] * 2 + [(0, None)], method="highs")
    if res.status != 0 or res.x[2] <= 0:
        raise GeometryError("degenerate body: no inscribed anticircle")
    return AnticircleFit(res.x[:2].copy(), float(res.x[2]))


def enclosing_anticircle(N, C: ConvexPolygon) -> AnticircleFit:
    """Smallest ``c + sigma I`` containing ``C``.

    ``antinorm(w - c) = max_v |symp(w - c, v)|`` over the vertices ``v`` of
    ``B`` (polygonized for smooth norms, then ``sigma`` is re-evaluated exactly).
    """
    N = make_norm(N)
    V = N.V if isinstance(N, PolygonNorm) else N.ball(POLY_N).vertices
    V = V[: len(V) // 2]
    rows, rhs = [], []
    for w in C.vertices:
        for v in V:
            # symp(w - c, v) = symp(w, v) - symp(c, v);  symp(c, v) = c1 v2 - c2 v1
            g = np.array([v[1], -v[0]])
            s = float(symp(w, v))
            rows.append([-g[0], -g[1], -1.0])
            rhs.append(-s)
            rows.append([g[0], g[1], -1.0])
            rhs.append(s)
    res = linprog([0, 0, 1], A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(None, None)] * 3, method="highs")
    if res.status != 0:
        raise GeometryError(f"enclosing anticircle LP failed: {res.message}")
    c = res.x[:2].copy()
    sigma = max(N.antinorm(w - c) for w in C.vertices)
    return AnticircleFit(c, float(sigma))


def tangent_polygon(N, C: ConvexPolygon, fit: AnticircleFit) -> ConvexPolygon:
    """Polygon with the sides parallel to those of ``C`` circumscribed about the fit."""
    N = make_norm(N)
    normals = C.normals
    offs = normals @ fit.center + fit.radius * np.array([iso_support(N, n) for n in normals])
    return halfplane_intersection(normals, offs)


def inequality_report(N, C: ConvexPolygon, alpha_samples: int = 101) -> IsoperimetricReport:
    N = make_norm(N)
    p = perimeter(N, C)
    A = C.area()
    AI = N.iso_area()
    ins = inscribed_anticircle(N, C)
    enc = enclosing_anticircle(N, C)
    rho, sigma = ins.radius, enc.radius
    Q = tangent_polygon(N, C, ins)
    pQ, AQ = perimeter(N, Q), Q.area()
    alphas = np.linspace(rho, sigma, alpha_samples)
    fam = alphas * p - A - alphas**2 * AI
    vertex = p / (2 * AI)
    if rho <= vertex <= sigma:
        fam = np.append(fam, vertex * p - A - vertex**2 * AI)
    slacks = {
        "circump": 2 * A - rho * p,
        "chakerian_star": rho * p - A - AQ,
        "lhuilier": p * p * rho * rho - 4 * A * AQ,
        "ratio_diff": p * p / A - pQ * pQ / AQ - (p - pQ) ** 2 / A,
        "bonnesen_plus": rho * p - A - rho * rho * AI,
        "bonnesen_plusplus": sigma * p - A - sigma * sigma * AI,
        "blaschke_family_min": float(fam.min()),
        "petty_deficit": p * p - 4 * AI * A - AI * AI * (sigma - rho) ** 2,
    }
    return IsoperimetricReport(p, A, p * p / A, rho, sigma, {k: float(v) for k, v in slacks.items()})


def iso_ratio(N, C: ConvexPolygon) -> float:
    return perimeter(N, C) ** 2 / C.area()


def homothet_distance(N, C: ConvexPolygon) -> float:
    """Hausdorff distance from ``C`` to its inscribed anticircle."""
    N = make_norm(N)
    fit = inscribed_anticircle(N, C)
    I = N.isoperimetrix()
    H = ConvexPolygon(fit.center + fit.radius * I.vertices)
    return hausdorff(C, H)


# -- Zenodorus ------------------------------------------------------------


@dataclass
class _Zstate:
    theta: np.ndarray
    polygon: ConvexPolygon
    area: float
    deviation: float


def _iso_geometry(N: Norm):
    """Vertices of a polygonal ``I`` (None for smooth anticircles)."""
    if isinstance(N, PolygonNorm):
        return N.isoperimetrix().vertices
    return None


def _contact(N: Norm, IV, n) -> tuple[np.ndarray, np.ndarray]:
    """Ends of the face of ``I`` with outer normal ``n``."""
    if IV is None:
        c = N.anti().support_point(n)
        return c, c
    vals = IV @ n
    top = vals.max()
    on = np.flatnonzero(vals >= top - 1e-12 * max(1.0, abs(top)))
    t = rot90(n)
    pts = IV[on]
    s = pts @ t
    return pts[int(np.argmin(s))], pts[int(np.argmax(s))]


def _side(P: ConvexPolygon, n, h, scale):
    V = P.vertices
    on = np.abs(V @ n - h) <= 1e-9 * scale * np.linalg.norm(n)
    if not on.any():
        return None
    t = rot90(n)
    pts = V[on]
    s = pts @ t
    return pts[int(np.argmin(s))], pts[int(np.argmax(s))]


def _zstate(N: Norm, IV, theta):
    U = np.column_stack([np.cos(theta), np.sin(theta)])
    h = np.array([iso_support(N, u) for u in U])
    P = halfplane_intersection(U, h)
    scale = max(1.0, float(np.max(np.abs(P.vertices))))
    dev = np.zeros(len(theta))
    for j, (u, hj) in enumerate(zip(U, h)):
        side = _side(P, u, hj, scale)
        if side is None:  # redundant line, it only touches P at a vertex beyond tolerance
            continue
        m = 0.5 * (side[0] + side[1])
        c_lo, c_hi = _contact(N, IV, u)
        t = rot90(u)
        s, lo, hi = m @ t, c_lo @ t, c_hi @ t
        dev[j] = s - hi if s > hi else (s - lo if s < lo else 0.0)
    return P, h, dev


def _facet_angles(IV) -> np.ndarray:
    if IV is None:
        return np.zeros(0)
    E = np.roll(IV, -1, axis=0) - IV
    n = rot_neg90(E)
    return np.sort(np.mod(np.arctan2(n[:, 1], n[:, 0]), 2 * math.pi))


def _snap(old, new, facets):
    """Stop at the first facet normal crossed when moving from ``old`` to ``new``."""
    if len(facets) == 0 or new == old:
        return new
    lo, hi = (old, new) if new > old else (new, old)
    ang = facets[None, :] + 2 * math.pi * np.arange(-2, 3)[:, None]
    crossed = ang[(ang > lo + 1e-15) & (ang < hi - 1e-15)]
    if crossed.size == 0:
        return new
    return float(crossed.min() if new > old else crossed.max())


def _zenodorus_run(N: Norm, IV, theta, tol, max_iter):
    facets = _facet_angles(IV)
    best = None
    for _ in range(max_iter):
        P, h, dev = _zstate(N, IV, theta)
        d = float(np.max(np.abs(dev)))
        if best is None or d < best.deviation:
            best = _Zstate(theta.copy(), P, P.area(), d)
        if d <= tol:
            return best, True
        step = 0.5 * np.arctan2(dev, h)
        new = theta + step
        theta = np.array([_snap(o, t, facets) for o, t in zip(theta, new)])
        theta = np.sort(theta)
    return best, False


def zenodorus(N, n: int, tol: float = 1e-6, max_iter: int = 10_000, starts: int = 8):
    """Locally area-minimal ``n``-gon circumscribed about the unit anticircle.

    Each side is parametrized by its outer normal angle. A side whose midpoint
    lies off its contact face is rotated towards it; the area decreases at
    rate ``length * offset`` under that rotation, and the midpoint condition
    is exactly stationarity. Angles stop at facet normals of a polygonal
    ``I`` so a side can settle on a whole edge.
    """
    N = make_norm(N)
    if n < 3:
        raise GeometryError("zenodorus needs n >= 3")
    if max_iter < 1:
        raise GeometryError("max_iter must be positive")
    IV = _iso_geometry(N)
    results = []
    best_any = None
    for s in range(starts):
        theta = (np.arange(n) + s / starts) * (2 * math.pi / n) + 1e-3
        state, ok = _zenodorus_run(N, IV, theta, tol, max_iter)
        if ok:
            results.append(state)
        if best_any is None or state.deviation < best_any.deviation:
            best_any = state
    if not results:
        raise ConvergenceError(
            f"midpoint iteration did not reach {tol:g} (best {best_any.deviation:.3g})",
            best=(best_any.polygon, best_any.area),
        )
    win = min(results, key=lambda r: r.area)
    return win.polygon, win.area


def midpoint_deviation(N, P: ConvexPolygon) -> float:
    """Largest offset of a side midpoint from its contact face with ``I``."""
    N = make_norm(N)
    IV = _iso_geometry(N)
    worst = 0.0
    for u, e, v in zip(P.normals, P.edges, P.vertices):
        u = u / np.linalg.norm(u)
        m = v + 0.5 * e
        c_lo, c_hi = _contact(N, IV, u)
        t = rot90(u)
        s, lo, hi = m @ t, c_lo @ t, c_hi @ t
        worst = max(worst, s - hi, lo - s, 0.0)
    return worst


def zenodorus_grid_oracle(N, n: int = 3, steps: int = 240) -> float:
    """Minimum area over circumscribed ``n``-gons with normals on a coarse angular grid,
    followed by coordinate refinement."""
    N = make_norm(N)
    grid = np.arange(steps) * (2 * math.pi / steps)

    def area_of(th):
        th = np.sort(np.mod(th, 2 * math.pi))
        gaps = np.diff(np.concatenate([th, [th[0] + 2 * math.pi]]))
        if np.any(gaps >= math.pi - 1e-9):
            return math.inf
        U = np.column_stack([np.cos(th), np.sin(th)])
        h = np.array([iso_support(N, u) for u in U])
        try:
            return halfplane_intersection(U, h).area()
        except GeometryError:
            return math.inf

    if n != 3:
        raise GeometryError("grid oracle implemented for triangles")
    U = np.column_stack([np.cos(grid), np.sin(grid)])
    H = np.array([iso_support(N, u) for u in U])
    J, K = np.triu_indices(steps, 1)
    best = (math.inf, None)
    for i in range(steps - 2):
        m = J > i
        j, k = J[m], K[m]
        bounded = (grid[j] - grid[i] < math.pi) & (grid[k] - grid[j] < math.pi) & (grid[i] + 2 * math.pi - grid[k] < math.pi)
        j, k = j[bounded], k[bounded]
        if not len(j):
            continue
        # lines u . x = h; area = det([u | -h])^2 / (2 |C_i C_j C_k|), C = pairwise cross products
        cij = U[i, 0] * U[j, 1] - U[i, 1] * U[j, 0]
        cjk = U[j, 0] * U[k, 1] - U[j, 1] * U[k, 0]
        cki = U[k, 0] * U[i, 1] - U[k, 1] * U[i, 0]
        D = -(H[i] * cjk + H[j] * cki + H[k] * cij)
        area = D * D / (2 * np.abs(cij * cjk * cki))
        t = int(np.argmin(area))
        if area[t] < best[0]:
            best = (float(area[t]), grid[[i, j[t], k[t]]].copy())
    a, th = best
    h = 2 * math.pi / steps
    while h > 1e-9:
        improved = False
        for idx in range(n):
            for sgn in (1, -1):
                t2 = th.copy()
                t2[idx] += sgn * h
                v = area_of(t2)
                if v < a:
                    a, th, improved = v, t2, True
        if not improved:
            h /= 2
    return a


# -- girth and angular measures --------------------------------------------


@dataclass(frozen=True)
class GirthReport:
    p_B_of_B: float
    p_I_of_I: float
    p_B_of_I: float
    p_I_of_B: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def girth_report(N) -> GirthReport:
    N = make_norm(N)
    if not isinstance(N, PolygonNorm):
        raise GeometryError("girth report needs a polygon backend")
    B, I = N.B, N.isoperimetrix()
    A = N.anti()
    return GirthReport(perimeter(N, B), perimeter(A, I), perimeter(N, I), perimeter(A, B))


def angular_measures(N, theta0: float, theta1: float) -> ArcMeasure:
    """Normalized norm length, sector area and antinorm length of an arc of ``∂B``.

    The arc runs counterclockwise between the boundary points at polar angles
    ``theta0`` and ``theta1``.
    """
    N = make_norm(N)
    if not isinstance(N, PolygonNorm):
        raise GeometryError("angular measures need a polygon backend")
    B = N.B
    arc = boundary_arc(B, theta0, theta1)
    D = np.diff(arc, axis=0)
    length = float(np.sum(N.gauge_many(D)))
    anti_len = float(np.sum(N.antinorm_many(D)))
    sector = 0.5 * float(np.sum(symp(arc[:-1], arc[1:])))
    two_pi = 2 * math.pi
    return ArcMeasure(
        two_pi * length / perimeter(N, B),
        two_pi * sector / B.area(),
        two_pi * anti_len / perimeter(N.anti(), B),
    )


def _walk(poly: np.ndarray, lengths: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Points at cumulative lengths ``targets`` along the closed polyline."""
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    out = []
    m = len(poly)
    for s in targets:
        j = min(int(np.searchsorted(cum, s, side="right")) - 1, m - 1)
        t = (s - cum[j]) / lengths[j] if lengths[j] > 0 else 0.0
        out.append(poly[j] + t * (poly[(j + 1) % m] - poly[j]))
    return np.array(out)


def kepler_check(N, k: int) -> float:
    """Spread of sector areas over ``k`` arcs of ``∂I`` with equal norm length."""
    N = make_norm(N)
    if not isinstance(N, PolygonNorm):
        raise GeometryError("kepler check needs a polygon backend")
    I = N.isoperimetrix().vertices
    E = np.roll(I, -1, axis=0) - I
    L = N.gauge_many(E)
    total = float(L.sum())
    cuts = _walk(I, L, np.arange(k) * total / k)
    # angle of each cut point to assemble arcs that include the vertices in between
    cum = np.concatenate([[0.0], np.cumsum(L)])
    areas = []
    for i in range(k):
        s0, s1 = i * total / k, (i + 1) * total / k
        inner = [I[j] for j in range(len(I)) if s0 < cum[j] < s1]
        end = cuts[(i + 1) % k]
        pts = np.vstack([cuts[i]] + inner + [end])
        areas.append(0.5 * float(np.sum(symp(pts[:-1], pts[1:]))))
    return float(max(areas) - min(areas))


def circumscribed_ratio_scan(N, trials: int = 200, seed: int = 0) -> float:
    """Spread (max/min) of ``r * perimeter / area`` over triangles about norm circles."""
    N = make_norm(N)

    def chunk(start, stop, rng):
        vals = []
        while len(vals) < stop - start:
            th = np.sort(rng.uniform(0, 2 * math.pi, 3))
            gaps = np.diff(np.concatenate([th, [th[0] + 2 * math.pi]]))
            if np.any(gaps >= math.pi - 0.05):
                continue
            r = rng.uniform(0.2, 3.0)
            c = rng.normal(size=2)
            U = np.column_stack([np.cos(th), np.sin(th)])
            h = U @ c + r * np.array([N.support(u) for u in U])
            T = halfplane_intersection(U, h)
            vals.append(r * perimeter(N, T) / T.area())
        return vals

    vals = [v for part in run_chunks(chunk, trials, seed) for v in part]
    return max(vals) / min(vals)
