"""Norm backends, the antinorm, the isoperimetrix and Birkhoff normality.

Every backend exposes the same small interface:

* ``gauge(x)``     the norm of ``x`` (unit ball ``B``);
* ``antinorm(x)``  ``sup{symp(x, y) : gauge(y) = 1}`` (unit ball ``I``);
* ``support(n)``   ``max{n . y : y in B}`` for a Euclidean covector ``n``;
* ``support_point(n)`` a maximizer of the above;
* ``normal_cone(x)``  the directions ``y`` with ``x ⊣ y``.

Since ``symp(x, y) = (Jx) . y`` with ``J`` the quarter turn, the antinorm is
``support(J x)``; the backends use this identity directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq
from scipy.special import gamma

from . import kernels
from .geometry import (
    EXACT_TOL,
    ConvexPolygon,
    GeometryError,
    SymmetricPolygon,
    as_point,
    hausdorff,
    rot90,
    rot_neg90,
    symp,
)

POLY_N = 1440
# polygonizations of very flat smooth curves keep nearly collinear vertices
FINE_TOL = 1e-16
ZERO_TOL = 1e-12


def _angle_mod_pi(v) -> float:
    return math.atan2(float(v[1]), float(v[0])) % math.pi


@dataclass(frozen=True)
class NormalCone:
    """Closed arc of directions modulo pi: ``[theta_lo, theta_lo + width]``."""

    theta_lo: float
    width: float = 0.0

    @property
    def theta_hi(self) -> float:
        return self.theta_lo + self.width

    @property
    def is_singleton(self) -> bool:
        return self.width == 0.0

    def direction(self, t: float = 0.0) -> np.ndarray:
        th = self.theta_lo + t * self.width
        return np.array([math.cos(th), math.sin(th)])

    def endpoints(self) -> list[np.ndarray]:
        if self.is_singleton:
            return [self.direction(0.0)]
        return [self.direction(0.0), self.direction(1.0)]

    def contains(self, y, tol: float = 1e-9) -> bool:
        d = (math.atan2(float(y[1]), float(y[0])) - self.theta_lo) % math.pi
        return d <= self.width + tol or d >= math.pi - tol

    def as_dict(self) -> dict:
        return {"theta_lo": self.theta_lo, "theta_hi": self.theta_hi}


@dataclass(frozen=True)
class NormalityWitness:
    x: np.ndarray
    y: np.ndarray
    residual: float


class Norm:
    """Base class; subclasses provide the evaluation primitives."""

    kind = "abstract"

    # -- primitives -------------------------------------------------------
    def gauge(self, x) -> float:
        raise NotImplementedError

    def gauge_many(self, P) -> np.ndarray:
        return np.array([self.gauge(p) for p in np.asarray(P, dtype=float).reshape(-1, 2)])

    def support(self, n) -> float:
        raise NotImplementedError

    def support_point(self, n) -> np.ndarray:
        raise NotImplementedError

    def antinorm(self, x) -> float:
        return self.support(rot90(as_point(x)))

    def antinorm_many(self, P) -> np.ndarray:
        return np.array([self.antinorm(p) for p in np.asarray(P, dtype=float).reshape(-1, 2)])

    def gradient(self, x) -> np.ndarray:
        """Euclidean gradient of the gauge (smooth backends)."""
        raise NotImplementedError

    @property
    def is_polygonal(self) -> bool:
        return False

    @property
    def is_strictly_convex(self) -> bool:
        return not self.is_polygonal

    # -- derived ----------------------------------------------------------
    def distance(self, p, q) -> float:
        return self.gauge(as_point(q) - as_point(p))

    def normal_cone(self, x) -> NormalCone:
        u = self._nonzero(x)
        g = self.gradient(u)
        return NormalCone(_angle_mod_pi(rot90(g)))

    def unit(self, x) -> np.ndarray:
        x = self._nonzero(x)
        return x / self.gauge(x)

    def _nonzero(self, x, scale: float = 1.0) -> np.ndarray:
        x = as_point(x)
        if not np.any(x) or self.gauge(x) < ZERO_TOL * scale:
            raise GeometryError("zero vector")
        return x

    def ball(self, n: int = POLY_N) -> SymmetricPolygon:
        """The unit ball, polygonized with ``n`` vertices for smooth backends."""
        return polygonize(self.gauge_many, n)

    def isoperimetrix(self, n: int = POLY_N) -> SymmetricPolygon:
        return polygonize(self.antinorm_many, n)

    def anti(self) -> "Norm":
        """The antinorm as a norm in its own right."""
        return AntiNorm(self)

    def ball_area(self) -> float:
        return self.ball().area()

    def iso_area(self) -> float:
        return self.isoperimetrix().area()

    def distance_to_polygon(self, p, S: ConvexPolygon) -> float:
        return nearest_in_polygon(self, S, p)[0]

    def describe(self) -> dict:
        return {"type": self.kind}


def polygonize(fn_many, n: int = POLY_N) -> SymmetricPolygon:
    if n < 4 or n % 2:
        raise GeometryError("polygonization needs an even vertex count >= 4")
    th = np.arange(n // 2) * (2 * math.pi / n)
    u = np.column_stack([np.cos(th), np.sin(th)])
    half = u / fn_many(u)[:, None]
    return SymmetricPolygon(np.vstack([half, -half]), tol=FINE_TOL)


class PolygonNorm(Norm):
    """Norm whose unit ball is a symmetric polygon; everything is exact."""

    kind = "polygon"

    def __init__(self, B):
        if not isinstance(B, SymmetricPolygon):
            B = SymmetricPolygon(B)
        self.B = B
        self.F = np.ascontiguousarray(B.facets)
        self.V = np.ascontiguousarray(B.vertices)

    def __repr__(self):
        return f"PolygonNorm({len(self.B)} vertices)"

    @property
    def is_polygonal(self) -> bool:
        return True

    def gauge(self, x) -> float:
        x = as_point(x)
        return kernels.poly_gauge(self.F, x[0], x[1])

    def gauge_many(self, P) -> np.ndarray:
        return kernels.poly_gauge_many(self.F, np.ascontiguousarray(P, dtype=float).reshape(-1, 2))

    def antinorm(self, x) -> float:
        x = as_point(x)
        return kernels.poly_antinorm(self.V, x[0], x[1])

    def antinorm_many(self, P) -> np.ndarray:
        return kernels.poly_antinorm_many(self.V, np.ascontiguousarray(P, dtype=float).reshape(-1, 2))

    def support(self, n) -> float:
        return float(np.max(self.V @ as_point(n)))

    def support_point(self, n) -> np.ndarray:
        return self.V[int(np.argmax(self.V @ as_point(n)))].copy()

    def ball(self, n: int = POLY_N) -> SymmetricPolygon:
        return self.B

    @cached_property
    def _iso(self) -> SymmetricPolygon:
        # polar vertices are the facet functionals; a quarter turn maps them onto I
        return SymmetricPolygon(rot_neg90(self.F), tol=FINE_TOL)

    def isoperimetrix(self, n: int = POLY_N) -> SymmetricPolygon:
        return self._iso

    def anti(self) -> "PolygonNorm":
        return PolygonNorm(self._iso)

    def ball_area(self) -> float:
        return self.B.area()

    def iso_area(self) -> float:
        return self._iso.area()

    def active_facets(self, x, tol: float = EXACT_TOL) -> np.ndarray:
        x = as_point(x)
        vals = self.F @ x
        g = vals.max()
        return np.flatnonzero(vals >= g - tol * abs(g))

    def normal_cone(self, x) -> NormalCone:
        x = self._nonzero(x)
        act = self.active_facets(x)
        m = len(self.V)
        E = self.B.edges
        if len(act) == 1:
            return NormalCone(_angle_mod_pi(E[act[0]]))
        # x points at a vertex; the tangent fan runs from the incoming to the outgoing edge
        s = set(int(a) for a in act)
        j = next(i for i in s if (i + 1) % m in s and (i - 1) % m not in s)
        k = j
        while (k + 1) % m in s:
            k = (k + 1) % m
        e_in, e_out = E[j], E[k]
        width = math.atan2(float(symp(e_in, e_out)), float(e_in @ e_out))
        return NormalCone(_angle_mod_pi(e_in), width)

    def gradient(self, x) -> np.ndarray:
        act = self.active_facets(x)
        return self.F[act].mean(axis=0)

    def distance_to_polygon(self, p, S: ConvexPolygon) -> float:
        p = as_point(p)
        return kernels.polygon_nearest(self.F, self.V, np.ascontiguousarray(S.vertices), p[0], p[1])[0]

    def describe(self) -> dict:
        return {"type": "polygon", "vertices": self.V[: len(self.V) // 2].tolist()}


def _lp_norm(x, p):
    a = np.abs(np.asarray(x, dtype=float))
    m = np.max(a, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = m * np.sum((a / np.where(m > 0, m, 1.0)[..., None]) ** p, axis=-1) ** (1.0 / p)
    return np.where(m > 0, r, 0.0)


def _lp_support_point(n, p):
    """Maximizer of ``n . y`` over the l_p unit ball."""
    q = p / (p - 1.0)
    nq = float(_lp_norm(n, q))
    return np.sign(n) * (np.abs(n) / nq) ** (q - 1.0)


def _lp_gradient(x, p):
    g = float(_lp_norm(x, p))
    return np.sign(x) * (np.abs(x) / g) ** (p - 1.0)


def lp_ball_area(p: float) -> float:
    return 4.0 * gamma(1.0 + 1.0 / p) ** 2 / gamma(1.0 + 2.0 / p)


class LpNorm(Norm):
    kind = "lp"

    def __init__(self, p: float):
        p = float(p)
        if not (1.0 < p < math.inf):
            raise GeometryError("lp norm needs 1 < p < inf")
        self.p = p
        self.q = p / (p - 1.0)

    def __repr__(self):
        return f"LpNorm({self.p:g})"

    def gauge(self, x) -> float:
        return float(_lp_norm(as_point(x), self.p))

    def gauge_many(self, P) -> np.ndarray:
        return _lp_norm(np.asarray(P, dtype=float).reshape(-1, 2), self.p)

    def support(self, n) -> float:
        return float(_lp_norm(as_point(n), self.q))

    def antinorm(self, x) -> float:
        return float(_lp_norm(as_point(x), self.q))

    def antinorm_many(self, P) -> np.ndarray:
        return _lp_norm(np.asarray(P, dtype=float).reshape(-1, 2), self.q)

    def support_point(self, n) -> np.ndarray:
        return _lp_support_point(as_point(n), self.p)

    def gradient(self, x) -> np.ndarray:
        return _lp_gradient(as_point(x), self.p)

    def ball_area(self) -> float:
        return lp_ball_area(self.p)

    def iso_area(self) -> float:
        return lp_ball_area(self.q)

    def describe(self) -> dict:
        return {"type": "lp", "p": self.p}


class MixedNorm(Norm):
    """l_p on the quadrants where x1*x2 >= 0, l_q (conjugate exponent) elsewhere."""

    kind = "mixed"

    def __init__(self, p: float):
        p = float(p)
        if not (1.0 < p < math.inf):
            raise GeometryError("mixed norm needs 1 < p < inf")
        self.p = p
        self.q = p / (p - 1.0)

    def __repr__(self):
        return f"MixedNorm({self.p:g})"

    def _exp(self, x):
        return self.p if x[0] * x[1] >= 0 else self.q

    def gauge(self, x) -> float:
        x = as_point(x)
        return float(_lp_norm(x, self._exp(x)))

    def gauge_many(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=float).reshape(-1, 2)
        same = P[:, 0] * P[:, 1] >= 0
        return np.where(same, _lp_norm(P, self.p), _lp_norm(P, self.q))

    def support_point(self, n) -> np.ndarray:
        # the maximizer of n . y sits in the quadrant of n, hence on the matching branch
        n = as_point(n)
        return _lp_support_point(n, self._exp(n))

    def support(self, n) -> float:
        n = as_point(n)
        return float(n @ self.support_point(n))

    def antinorm_many(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=float).reshape(-1, 2)
        J = rot90(P)
        same = J[:, 0] * J[:, 1] >= 0
        # dual exponent of the branch selected by the quadrant of Jx
        return np.where(same, _lp_norm(J, self.q), _lp_norm(J, self.p))

    def gradient(self, x) -> np.ndarray:
        x = as_point(x)
        return _lp_gradient(x, self._exp(x))

    def ball_area(self) -> float:
        return 0.5 * (lp_ball_area(self.p) + lp_ball_area(self.q))

    def iso_area(self) -> float:
        # the quarter turn swaps the two quadrant pairs and the polar swaps exponents
        return self.ball_area()

    def describe(self) -> dict:
        return {"type": "mixed", "p": self.p}


class EuclideanNorm(Norm):
    kind = "euclidean"

    def __repr__(self):
        return "EuclideanNorm()"

    def gauge(self, x) -> float:
        x = as_point(x)
        return math.hypot(x[0], x[1])

    def gauge_many(self, P) -> np.ndarray:
        return np.hypot(*np.asarray(P, dtype=float).reshape(-1, 2).T)

    antinorm = gauge
    antinorm_many = gauge_many
    support = gauge

    def support_point(self, n) -> np.ndarray:
        n = as_point(n)
        return n / math.hypot(n[0], n[1])

    def gradient(self, x) -> np.ndarray:
        return self.support_point(x)

    def anti(self) -> "EuclideanNorm":
        return self

    def ball_area(self) -> float:
        return math.pi

    iso_area = ball_area

    def distance_to_polygon(self, p, S: ConvexPolygon) -> float:
        p = as_point(p)
        if S.contains(p, tol=1e-14):
            return 0.0
        best = math.inf
        for a, e in zip(S.vertices, S.edges):
            t = min(1.0, max(0.0, float((p - a) @ e / (e @ e))))
            best = min(best, math.hypot(*(p - a - t * e)))
        return best


class AntiNorm(Norm):
    """The antinorm of a smooth backend, used as a norm.

    The antinorm of the antinorm is the original norm, so the roles swap.
    """

    kind = "anti"

    def __init__(self, base: Norm):
        self.base = base

    def __repr__(self):
        return f"AntiNorm({self.base!r})"

    def gauge(self, x) -> float:
        return self.base.antinorm(x)

    def gauge_many(self, P) -> np.ndarray:
        return self.base.antinorm_many(P)

    def antinorm(self, x) -> float:
        return self.base.gauge(x)

    def antinorm_many(self, P) -> np.ndarray:
        return self.base.gauge_many(P)

    def support(self, n) -> float:
        return self.base.gauge(rot90(as_point(n)))

    def support_point(self, n) -> np.ndarray:
        # the contact point lies along the tangent of B at J n
        t = rot90(self.base.gradient(rot90(as_point(n))))
        t = t / self.gauge(t)
        return t if t @ n >= 0 else -t

    def gradient(self, x) -> np.ndarray:
        return rot_neg90(self.base.support_point(rot90(as_point(x))))

    def anti(self) -> Norm:
        return self.base

    def ball_area(self) -> float:
        return self.base.iso_area()

    def iso_area(self) -> float:
        return self.base.ball_area()

    def describe(self) -> dict:
        return {"type": "anti", "of": self.base.describe()}


NormSpec = Norm


def make_norm(spec) -> Norm:
    """Build a backend from a descriptor dict, a polygon, or a Norm."""
    if isinstance(spec, Norm):
        return spec
    if isinstance(spec, SymmetricPolygon):
        return PolygonNorm(spec)
    if not isinstance(spec, dict) or "type" not in spec:
        raise GeometryError("norm descriptor must be an object with a 'type' key")
    kind = spec["type"]
    if kind == "polygon":
        if "vertices" not in spec:
            raise GeometryError("polygon norm needs 'vertices'")
        return PolygonNorm(SymmetricPolygon.from_half(spec["vertices"]))
    if kind == "lp":
        return LpNorm(spec.get("p", 2.0))
    if kind == "mixed":
        return MixedNorm(spec.get("p", 2.0))
    if kind == "euclidean":
        return EuclideanNorm()
    raise GeometryError(f"unknown norm type {kind!r}")


# -- module-level operations ---------------------------------------------


def gauge(N: Norm, x) -> float:
    return N.gauge(x)


def antinorm(N: Norm, x) -> float:
    return N.antinorm(x)


def isoperimetrix(N: Norm, n: int = POLY_N) -> SymmetricPolygon:
    return N.isoperimetrix(n)


def antinorm_involution_defect(N: Norm) -> float:
    if not isinstance(N, PolygonNorm):
        raise GeometryError("involution defect needs a polygon backend")
    I2 = PolygonNorm(N.isoperimetrix()).isoperimetrix()
    return hausdorff(N.B, I2)


def is_normal(N: Norm, x, y, tol: float = EXACT_TOL) -> bool:
    """Birkhoff normality ``x ⊣ y`` via ``|symp(x,y)| = gauge(x) antinorm(y)``."""
    x = N._nonzero(x)
    y = N._nonzero(y)
    rhs = N.gauge(x) * N.antinorm(y)
    return abs(abs(float(symp(x, y))) - rhs) <= tol * rhs


def normality_residual(N: Norm, x, y, lam_range: float = 10.0, n: int = 20001) -> NormalityWitness:
    """Grid oracle for the definition: ``min_lambda gauge(x + lambda y) - gauge(x)``."""
    x = as_point(x)
    y = as_point(y)
    lam = np.linspace(-lam_range, lam_range, n)
    vals = N.gauge_many(x[None, :] + lam[:, None] * y[None, :])
    return NormalityWitness(x, y, float(vals.min() - N.gauge(x)))


def normal_cone(N: Norm, x) -> NormalCone:
    return N.normal_cone(x)


def normal_coefficients(N: Norm, x, y) -> tuple[float, float]:
    """All ``alpha`` with ``x ⊣ alpha x + y``, as a closed interval."""
    x = N._nonzero(x)
    y = as_point(y)
    if abs(float(symp(x, y))) <= ZERO_TOL * np.linalg.norm(x) * max(np.linalg.norm(y), 1e-300):
        raise GeometryError("x and y are linearly dependent")
    cone = N.normal_cone(x)
    alphas = [-float(symp(y, u)) / float(symp(x, u)) for u in cone.endpoints()]
    return min(alphas), max(alphas)


def nearest_in_polygon(N: Norm, S: ConvexPolygon, p):
    """Distance from ``p`` to ``S`` in ``N`` and the extreme nearest points.

    Returns ``(dist, lo, hi)``; ``lo == hi`` when the nearest point is unique.
    """
    p = as_point(p)
    if isinstance(N, PolygonNorm):
        d, x0, y0, x1, y1 = kernels.polygon_nearest(
            N.F, N.V, np.ascontiguousarray(S.vertices), p[0], p[1]
        )
        return d, np.array([x0, y0]), np.array([x1, y1])
    if S.contains(p, tol=1e-14):
        return 0.0, p.copy(), p.copy()
    best = (math.inf, None)
    for a, e in zip(S.vertices, S.edges):
        # the derivative along the edge is monotone; its root is found to full
        # precision, unlike a bracketing search on the flat objective
        slope = lambda t: -float(N.gradient(p - a - t * e) @ e)
        cands = [0.0, 1.0]
        if slope(0.0) < 0.0 < slope(1.0):
            cands.append(brentq(slope, 0.0, 1.0, xtol=1e-15, rtol=1e-15))
        for t in cands:
            v = N.gauge(p - a - t * e)
            if v < best[0]:
                best = (v, a + t * e)
    return best[0], best[1], best[1].copy()
