"""Radon curves: construction, detection, radonization, asymmetry measures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .geometry import (
    COLLINEAR_TOL,
    EXACT_TOL,
    GeometryError,
    SymmetricPolygon,
    as_point,
    boundary_arc,
    boundary_point,
    halfplane_intersection,
    rot_neg90,
    symp,
)
from .norms import (
    FINE_TOL,
    POLY_N,
    Norm,
    PolygonNorm,
    make_norm,
    normal_coefficients,
    polygonize,
)
from .parallel import run_chunks

RADON_TOL = 1e-6


@dataclass(frozen=True)
class QuadrantArc:
    """Convex polyline from ``a`` to ``b`` in the cone spanned by ``a`` and ``b``."""

    a: np.ndarray
    b: np.ndarray
    interior: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        object.__setattr__(
            self, "interior", np.asarray(self.interior, dtype=float).reshape(-1, 2)
        )

    @property
    def points(self) -> np.ndarray:
        return np.vstack([self.a, self.interior, self.b])


@dataclass(frozen=True)
class RadonReport:
    is_radon: bool
    lambda_: float
    relative_defect: float
    asymmetry_eps: float

    def as_dict(self) -> dict:
        return {
            "is_radon": self.is_radon,
            "lambda": self.lambda_,
            "relative_defect": self.relative_defect,
            "asymmetry_eps": self.asymmetry_eps,
        }


def _check_arc(pts: np.ndarray, level: float) -> None:
    a, b = pts[0], pts[-1]
    s = float(symp(a, b))
    if s <= 0:
        raise GeometryError("arc endpoints must satisfy symp(a, b) > 0")
    scale2 = max(1.0, float(np.max(np.abs(pts)))) ** 2
    alpha = symp(pts, b) / s
    beta = symp(a, pts) / s
    tol = 1e-9
    if np.any(alpha < -tol) or np.any(beta < -tol) or np.any(alpha > 1 + tol) or np.any(beta > 1 + tol):
        raise GeometryError("arc leaves the parallelogram o, a, b, a+b")
    ring = np.vstack([[0.0, 0.0], pts])
    e = np.roll(ring, -1, axis=0) - ring
    turn = symp(e, np.roll(e, -1, axis=0))
    if np.any(turn < -COLLINEAR_TOL * scale2 * 10):
        raise GeometryError("arc is not in convex position")


def _construct(pts: np.ndarray, level: float) -> SymmetricPolygon:
    """Complete a first-quadrant arc by the anticircle of its partial norm.

    ``level`` is ``symp(a, b)``; working with the form divided by it is the
    same as normalizing ``symp(a, b) = 1``.
    """
    a, b = pts[0], pts[-1]
    W = np.unique(pts, axis=0)
    n = rot_neg90(W)  # symp(x, w) = n . x
    normals = np.vstack([n, -n, rot_neg90(b), rot_neg90(a)])
    offsets = np.concatenate([np.full(len(W), level), np.full(len(W), level), [0.0, 0.0]])
    Q2 = halfplane_intersection(normals, offsets).vertices
    io = int(np.argmin(np.hypot(Q2[:, 0], Q2[:, 1])))
    if np.hypot(*Q2[io]) > 1e-9 * max(1.0, float(np.max(np.abs(pts)))):
        raise GeometryError("second-quadrant piece does not reach the origin")
    chain = np.roll(Q2, -io, axis=0)[1:]  # b, ..., -a
    scale = max(1.0, float(np.max(np.abs(pts))))
    if np.max(np.abs(chain[0] - b)) > 1e-9 * scale or np.max(np.abs(chain[-1] + a)) > 1e-9 * scale:
        raise GeometryError("second-quadrant piece does not join b to -a")
    half = np.vstack([pts, chain[1:-1]])
    return SymmetricPolygon(np.vstack([half, -half]), tol=FINE_TOL)


def radon_construct(arc: QuadrantArc) -> SymmetricPolygon:
    """Unit circle with symmetric normality extending ``arc``."""
    pts = arc.points
    if abs(float(symp(arc.a, arc.b)) - 1.0) > EXACT_TOL:
        raise GeometryError("arc endpoints must satisfy symp(a, b) = 1")
    _check_arc(pts, 1.0)
    return _construct(pts, 1.0)


def _as_polygon_norm(N) -> PolygonNorm:
    N = make_norm(N)
    if isinstance(N, PolygonNorm):
        return N
    return PolygonNorm(N.ball(POLY_N))


def radon_pair(N) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic unit pair ``a ⊣ b`` and ``b ⊣ a`` with ``symp(a, b) > 0``.

    First choice: ``a`` on the positive x-axis and ``b`` the smallest-angle
    direction of its normal cone. If normality fails the other way, fall back
    to the vertex pair maximizing ``symp``; any maximizer is mutually normal.
    """
    P = _as_polygon_norm(N)
    a = np.array([1.0 / P.gauge((1.0, 0.0)), 0.0])
    u = P.normal_cone(a).direction(0.0)
    if u[1] < 0:
        u = -u
    b = u / P.gauge(u)
    cone_b = P.normal_cone(b)
    if cone_b.contains(a, tol=1e-9):
        return a, b
    V = P.V
    S = symp(V[:, None, :], V[None, :, :])
    i, j = np.unravel_index(int(np.argmax(S)), S.shape)
    return V[i].copy(), V[j].copy()


def radonize(N, a=None, b=None) -> SymmetricPolygon:
    """Radon curve that agrees with ``B`` on the arc from ``a`` to ``b``."""
    P = _as_polygon_norm(N)
    if a is None or b is None:
        a, b = radon_pair(P)
    else:
        a = P.unit(a)
        b = P.unit(b)
        if symp(a, b) < 0:
            b = -b
    level = float(symp(a, b))
    arc = boundary_arc(P.B, math.atan2(a[1], a[0]), _ccw_angle(a, b))
    arc[0], arc[-1] = a, b
    _check_arc(arc, level)
    return _construct(arc, level)


def _ccw_angle(a, b) -> float:
    ta = math.atan2(a[1], a[0])
    tb = math.atan2(b[1], b[0])
    while tb <= ta:
        tb += 2 * math.pi
    return tb


def _log_ratio_extremes(P: PolygonNorm, Q: PolygonNorm) -> tuple[float, float]:
    """Range of ``log(gauge_Q / gauge_P)``; both gauges are linear between vertex rays."""
    D = np.vstack([P.V, Q.V])
    d = np.log(Q.gauge_many(D)) - np.log(P.gauge_many(D))
    return float(d.min()), float(d.max())


def multiplicative_distance(N, M) -> float:
    """``min over lambda`` of the spread ``max(gauge ratio) / min(gauge ratio)``."""
    lo, hi = _log_ratio_extremes(_as_polygon_norm(N), _as_polygon_norm(M))
    return math.exp(hi - lo)


def _arc_distance(P: PolygonNorm, x, cone) -> float:
    """Distance from ``x`` to the unit vectors ``z`` with ``y ⊣ z`` (both signs)."""
    best = math.inf
    F, V = P.F, P.V
    for sign in (1.0, -1.0):
        if cone.is_singleton:
            z = sign * cone.direction(0.0)
            best = min(best, P.gauge(x - z / P.gauge(z)))
            continue
        th0 = cone.theta_lo + (0.0 if sign > 0 else math.pi)
        arc = boundary_arc(P.B, th0, th0 + cone.width)
        for s, t in zip(arc[:-1], arc[1:]):
            best = min(best, kernels.seg_min_gauge(F, V, x[0], x[1], s[0], s[1], t[0], t[1])[0])
    return best


def asymmetry_eps(N, n_dirs: int = 720, cone_samples: int = 6) -> float:
    """Smallest ``eps`` for which normality is symmetric up to ``eps`` (sampled)."""
    P = _as_polygon_norm(N)
    th = np.arange(n_dirs) * (2 * math.pi / n_dirs)
    U = np.column_stack([np.cos(th), np.sin(th)])
    X = np.vstack([U / P.gauge_many(U)[:, None], P.V])
    worst = 0.0
    for x in X:
        cx = P.normal_cone(x)
        ts = [0.0] if cx.is_singleton else np.linspace(0.0, 1.0, cone_samples + 2)
        for t in ts:
            y = cx.direction(float(t))
            y = y / P.gauge(y)
            worst = max(worst, _arc_distance(P, x, P.normal_cone(y)))
    return worst


def _smooth_log_ratio(N: Norm, n_dirs: int = 4096) -> tuple[float, float]:
    th = np.arange(n_dirs) * (2 * math.pi / n_dirs)
    U = np.column_stack([np.cos(th), np.sin(th)])
    d = np.log(N.antinorm_many(U)) - np.log(N.gauge_many(U))
    return float(d.min()), float(d.max())


def is_radon(N, with_eps: bool = True) -> RadonReport:
    """Compare ``B`` with the best multiple of ``I``.

    Polygons are compared on all breakpoint directions, which is exact;
    analytic norms on 4096 sampled directions with their own antinorm.
    """
    N = make_norm(N)
    if isinstance(N, PolygonNorm):
        P = N
        lo, hi = _log_ratio_extremes(P, P.anti())
    else:
        P = None
        lo, hi = _smooth_log_ratio(N)
    # B = lambda * I means gauge_I / gauge_B = lambda
    lam = math.exp(0.5 * (lo + hi))
    defect = 0.5 * (hi - lo)
    eps = asymmetry_eps(N) if with_eps else float("nan")
    return RadonReport(defect <= RADON_TOL, lam, defect, eps)


def stability_ratio(N) -> float:
    """``(mu - 1) / eps`` with ``mu`` the multiplicative distance to the radonized norm."""
    P = _as_polygon_norm(N)
    eps = asymmetry_eps(P)
    if eps < 1e-9:
        raise GeometryError("ratio undefined: normality is symmetric")
    mu = multiplicative_distance(P, PolygonNorm(radonize(P)))
    return (mu - 1.0) / eps


def reverse_normal_coefficients(N: Norm, x, y) -> tuple[float, float]:
    """All ``mu`` with ``mu y + x ⊣ y``, i.e. the minimizers of ``t -> gauge(x + t y)``."""
    x = as_point(x)
    y = N._nonzero(y)
    if isinstance(N, PolygonNorm):
        _, lo, hi = kernels.line_min_gauge(N.F, N.V, x[0], x[1], 0.0, 0.0, -y[0], -y[1])
        return lo, hi
    z = N.support_point(rot_neg90(y))
    mu = -float(symp(x, z)) / float(symp(y, z))
    return mu, mu


def _random_pair(rng):
    while True:
        x, y = rng.normal(size=(2, 2))
        if abs(symp(x, y)) > 1e-3 * np.linalg.norm(x) * np.linalg.norm(y):
            return x, y


def sign_test_3prime(N, trials: int = 1000, seed: int = 0, return_witness: bool = False):
    """True iff ``lambda * mu >= 0`` whenever ``x ⊣ lambda x + y`` and ``y ⊣ mu y + x``."""
    N = make_norm(N)

    def chunk(start, stop, rng):
        for _ in range(start, stop):
            x, y = _random_pair(rng)
            lam = normal_coefficients(N, x, y)
            mu = normal_coefficients(N, y, x)
            prods = [l * m for l in lam for m in mu]
            if min(prods) < -1e-9:
                return (x, y, lam, mu)
        return None

    hits = [w for w in run_chunks(chunk, trials, seed) if w is not None]
    ok = not hits
    if return_witness:
        return ok, (hits[0] if hits else None)
    return ok


def normal_product_range(N, trials: int = 1000, seed: int = 0) -> tuple[float, float]:
    """Extremes of ``lambda * mu`` with ``x ⊣ lambda x + y`` and ``mu y + x ⊣ y``."""
    N = make_norm(N)

    def chunk(start, stop, rng):
        lo, hi = math.inf, -math.inf
        for _ in range(start, stop):
            x, y = _random_pair(rng)
            lam = normal_coefficients(N, x, y)
            mu = reverse_normal_coefficients(N, x, y)
            prods = [l * m for l in lam for m in mu]
            lo, hi = min(lo, min(prods)), max(hi, max(prods))
        return lo, hi

    res = run_chunks(chunk, trials, seed)
    return min(r[0] for r in res), max(r[1] for r in res)


def regular_polygon(k: int, radius: float = 1.0, phase: float = 0.0) -> SymmetricPolygon:
    if k < 4 or k % 2:
        raise GeometryError("a symmetric regular polygon needs an even k >= 4")
    th = phase + np.arange(k // 2) * (2 * math.pi / k)
    half = radius * np.column_stack([np.cos(th), np.sin(th)])
    return SymmetricPolygon(np.vstack([half, -half]), tol=FINE_TOL)


def generator_regular_gon(k: int) -> SymmetricPolygon:
    """Regular ``k``-gon with circumradius 1; only the Radon cases ``k = 4n + 2``."""
    if k < 6 or k % 4 != 2:
        raise GeometryError("regular k-gon is Radon only for k = 4n + 2 (k >= 6)")
    return regular_polygon(k)


def generator_mixed(p: float, n: int) -> SymmetricPolygon:
    """Mixed l_p / l_q ball with ``n`` vertices per quadrant."""
    from .norms import MixedNorm

    return polygonize(MixedNorm(p).gauge_many, 4 * n)
