"""Plane primitives: the symplectic form, convex polygons, support, polarity.

Points are plain length-2 float arrays. The symplectic form is fixed as the
coordinate determinant, so ``symp(e1, e2) == 1`` and counterclockwise means
positive area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

COLLINEAR_TOL = 1e-12
EXACT_TOL = 1e-9
OPT_TOL = 1e-6


class GeometryError(ValueError):
    """Invalid geometric input (degenerate, non-convex, unbounded, ...)."""


def as_point(x) -> np.ndarray:
    p = np.asarray(x, dtype=float).reshape(2)
    if not np.all(np.isfinite(p)):
        raise GeometryError(f"non-finite point {x!r}")
    return p


def symp(x, y):
    """The symplectic form ``x1*y2 - x2*y1``; broadcasts over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0]


def rot90(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.stack([-x[..., 1], x[..., 0]], axis=-1)


def rot_neg90(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.stack([x[..., 1], -x[..., 0]], axis=-1)


def angle_of(x) -> float:
    return math.atan2(float(x[1]), float(x[0]))


@dataclass(frozen=True)
class Functional:
    """The linear functional ``x -> symp(x, g)``.

    Its Euclidean normal vector is ``(g2, -g1)``.
    """

    g: np.ndarray

    def __post_init__(self):
        g = as_point(self.g)
        if not np.any(g):
            raise GeometryError("zero functional")
        object.__setattr__(self, "g", g)

    def __call__(self, x):
        return symp(x, self.g)

    @property
    def normal(self) -> np.ndarray:
        return rot_neg90(self.g)

    @classmethod
    def from_normal(cls, n) -> "Functional":
        return cls(rot90(as_point(n)))


def signed_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]))


def _scale(v: np.ndarray) -> float:
    return max(1e-300, float(np.max(np.abs(v)))) if len(v) else 1.0


def _clean(v: np.ndarray, tol: float = COLLINEAR_TOL) -> np.ndarray:
    """Drop repeated and collinear vertices of a closed polyline."""
    s2 = _scale(v) ** 2
    if len(v) > 1:
        same = np.all(np.abs(v - np.roll(v, 1, axis=0)) <= tol * math.sqrt(s2), axis=1)
        same[0] = same[0] and not np.all(same)
        v = v[~same]
    changed = True
    while changed and len(v) >= 3:
        changed = False
        keep = []
        m = len(v)
        for i in range(m):
            a, b, c = v[i - 1], v[i], v[(i + 1) % m]
            if abs(symp(b - a, c - b)) <= tol * s2 and np.dot(b - a, c - b) >= 0:
                continue
            keep.append(i)
        if len(keep) < m:
            v = v[keep]
            changed = True
    return v


def convex_hull(points, tol: float = COLLINEAR_TOL) -> np.ndarray:
    """Monotone-chain hull, counterclockwise, collinear points removed."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        return pts
    s2 = _scale(pts) ** 2

    def chain(seq):
        out: list[np.ndarray] = []
        for p in seq:
            while len(out) >= 2 and symp(out[-1] - out[-2], p - out[-1]) <= tol * s2:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


class ConvexPolygon:
    """Strictly convex polygon, counterclockwise, at least three vertices."""

    __slots__ = ("vertices", "_edges")

    def __init__(self, vertices, *, tol: float = COLLINEAR_TOL):
        v = np.array(vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(v)):
            raise GeometryError("non-finite vertex")
        if signed_area(v) < 0:
            v = v[::-1]
        v = _clean(v, tol)
        if len(v) < 3:
            raise GeometryError("polygon needs at least 3 non-collinear vertices")
        e = np.roll(v, -1, axis=0) - v
        turn = symp(e, np.roll(e, -1, axis=0))
        s2 = _scale(v) ** 2
        if np.any(turn <= tol * s2):
            raise GeometryError("polygon is not strictly convex")
        total = sum(
            math.atan2(float(turn[i]), float(np.dot(e[i], e[(i + 1) % len(v)])))
            for i in range(len(v))
        )
        if abs(total - 2 * math.pi) > 1e-6:
            raise GeometryError("polygon winds more than once")
        v.setflags(write=False)
        self.vertices = v
        self._edges = None

    @classmethod
    def hull(cls, points) -> "ConvexPolygon":
        return cls(convex_hull(points))

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.vertices.tolist()!r})"

    @property
    def edges(self) -> np.ndarray:
        if self._edges is None:
            e = np.roll(self.vertices, -1, axis=0) - self.vertices
            e.setflags(write=False)
            self._edges = e
        return self._edges

    @property
    def normals(self) -> np.ndarray:
        """Outward (unnormalized) edge normals ``(e2, -e1)``."""
        return rot_neg90(self.edges)

    @property
    def offsets(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.normals, self.vertices)

    def edge_functionals(self) -> list[Functional]:
        return [Functional(e) for e in self.edges]

    def area(self) -> float:
        return signed_area(self.vertices)

    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        cr = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
        return np.array([np.sum((v[:, 0] + w[:, 0]) * cr), np.sum((v[:, 1] + w[:, 1]) * cr)]) / (
            3.0 * np.sum(cr)
        )

    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", d, d))))

    def scale_hint(self) -> float:
        return _scale(self.vertices)

    def contains(self, x, tol: float = EXACT_TOL) -> bool:
        x = as_point(x)
        lhs = self.normals @ x - self.offsets
        return bool(np.all(lhs <= tol * np.linalg.norm(self.normals, axis=1) * max(1.0, self.scale_hint())))

    def translated(self, t) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + as_point(t))

    def scaled(self, s: float, center=(0.0, 0.0)) -> "ConvexPolygon":
        c = as_point(center)
        return ConvexPolygon(c + s * (self.vertices - c))


class SymmetricPolygon(ConvexPolygon):
    """Centrally symmetric convex polygon with the origin inside: a unit ball."""

    __slots__ = ("facets",)

    def __init__(self, vertices, *, tol: float = COLLINEAR_TOL):
        super().__init__(vertices, tol=tol)
        v = self.vertices
        n = len(v)
        if n % 2:
            raise GeometryError("symmetric polygon must have an even vertex count")
        h = n // 2
        if not np.allclose(v[h:], -v[:h], rtol=0.0, atol=1e-9 * self.scale_hint()):
            raise GeometryError("polygon is not centrally symmetric about the origin")
        off = self.offsets
        if np.any(off <= 0):
            raise GeometryError("origin is not interior")
        f = self.normals / off[:, None]
        f.setflags(write=False)
        self.facets = f

    @classmethod
    def from_half(cls, half) -> "SymmetricPolygon":
        h = np.asarray(half, dtype=float).reshape(-1, 2)
        return cls(np.vstack([h, -h]))

    @classmethod
    def symmetrize_hull(cls, points) -> "SymmetricPolygon":
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        hull = convex_hull(np.vstack([p, -p]))
        # rotate so that vertex list starts at the smallest polar angle in [0, pi)
        ang = np.mod(np.arctan2(hull[:, 1], hull[:, 0]), 2 * np.pi)
        hull = np.roll(hull, -int(np.argmin(ang)), axis=0)
        return cls(hull)

    def rotated(self, theta: float) -> "SymmetricPolygon":
        c, s = math.cos(theta), math.sin(theta)
        return SymmetricPolygon(self.vertices @ np.array([[c, s], [-s, c]]))


def area(P: ConvexPolygon) -> float:
    return P.area()


class Support(NamedTuple):
    value: float
    face: tuple  # (i,) for a vertex, (i, i+1) for an edge


def support(P: ConvexPolygon, phi: Functional, tol: float = COLLINEAR_TOL) -> Support:
    """Maximum of ``phi`` over ``P`` and the face where it is attained."""
    vals = phi(P.vertices)
    best = float(vals.max())
    slack = tol * max(1.0, abs(best), _scale(P.vertices) * float(np.abs(phi.g).max()))
    on = np.flatnonzero(vals >= best - slack)
    if len(on) == 1:
        return Support(best, (int(on[0]),))
    m = len(P)
    on = sorted(int(i) for i in on)
    if len(on) == 2 and (on[1] - on[0]) == m - 1:
        return Support(best, (on[1], on[0]))
    return Support(best, tuple(on))


def polar(B: SymmetricPolygon) -> SymmetricPolygon:
    """Euclidean polar body; its vertices are the facet functionals of ``B``."""
    return SymmetricPolygon(B.facets)


def halfplane_intersection(normals, offsets, tol: float = 1e-12) -> ConvexPolygon:
    """Intersect half-planes ``n . x <= c`` (sorted-angle deque sweep)."""
    N = np.asarray(normals, dtype=float).reshape(-1, 2)
    C = np.asarray(offsets, dtype=float).reshape(-1)
    lens = np.linalg.norm(N, axis=1)
    if np.any(lens == 0):
        raise GeometryError("zero half-plane normal")
    N = N / lens[:, None]
    C = C / lens
    ang = np.arctan2(N[:, 1], N[:, 0])
    order = np.lexsort((C, ang))
    lines: list[tuple[np.ndarray, float, float]] = []
    for i in order:
        if lines and abs(ang[i] - lines[-1][2]) <= 1e-12:
            continue  # same direction; the first one kept is tighter
        lines.append((N[i], float(C[i]), float(ang[i])))
    if len(lines) > 1 and abs(lines[0][2] + 2 * math.pi - lines[-1][2]) <= 1e-12:
        if lines[-1][1] < lines[0][1]:
            lines[0] = lines[-1]
        lines.pop()
    angs = np.array([l[2] for l in lines])
    gaps = np.diff(np.concatenate([angs, [angs[0] + 2 * math.pi]]))
    if len(lines) < 3 or np.any(gaps >= math.pi - 1e-12):
        raise GeometryError("insufficient directions: intersection is unbounded")
    scale = 1.0 + max(abs(l[1]) for l in lines)

    def meet(l1, l2):
        A = np.array([l1[0], l2[0]])
        return np.linalg.solve(A, [l1[1], l2[1]])

    def outside(l, p):
        return float(l[0] @ p) > l[1] + tol * scale

    dq: list = []
    for l in lines:
        while len(dq) >= 2 and outside(l, meet(dq[-1], dq[-2])):
            dq.pop()
        while len(dq) >= 2 and outside(l, meet(dq[0], dq[1])):
            dq.pop(0)
        dq.append(l)
    while len(dq) >= 3 and outside(dq[0], meet(dq[-1], dq[-2])):
        dq.pop()
    while len(dq) >= 3 and outside(dq[-1], meet(dq[0], dq[1])):
        dq.pop(0)
    if len(dq) < 3:
        raise GeometryError("empty half-plane intersection")
    verts = np.array([meet(dq[i], dq[(i + 1) % len(dq)]) for i in range(len(dq))])
    viol = N @ verts.T - C[:, None]
    if np.any(viol > 1e-9 * scale):
        raise GeometryError("empty half-plane intersection")
    return ConvexPolygon(verts)


def clip(vertices, normal, offset) -> np.ndarray:
    """Clip a convex polygon (possibly degenerate) to ``normal . x <= offset``."""
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    n = np.asarray(normal, dtype=float)
    if len(v) == 0:
        return v
    s = v @ n - offset
    out = []
    m = len(v)
    for i in range(m):
        a, b = v[i], v[(i + 1) % m]
        sa, sb = s[i], s[(i + 1) % m]
        if sa <= 0:
            out.append(a)
        if (sa < 0 < sb) or (sb < 0 < sa):
            out.append(a + (sa / (sa - sb)) * (b - a))
    return np.array(out).reshape(-1, 2)


def intersect_convex(P, Q) -> np.ndarray:
    """Vertices of ``P ∩ Q`` for convex CCW vertex arrays (may be degenerate/empty)."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    Q = np.asarray(Q, dtype=float).reshape(-1, 2)
    out = P
    m = len(Q)
    for i in range(m):
        a, b = Q[i], Q[(i + 1) % m]
        e = b - a
        if not np.any(e):
            continue
        n = np.array([e[1], -e[0]])
        out = clip(out, n, float(n @ a))
        if len(out) == 0:
            break
    return out


def hausdorff(P: ConvexPolygon, Q: ConvexPolygon, metric=None) -> float:
    """Symmetric Hausdorff distance of two convex polygons in the given norm.

    The distance to a convex set is convex, so only vertices need checking.
    ``metric=None`` means Euclidean.
    """
    if metric is None:
        from .norms import EuclideanNorm

        metric = EuclideanNorm()
    d1 = max(metric.distance_to_polygon(p, Q) for p in P.vertices)
    d2 = max(metric.distance_to_polygon(q, P) for q in Q.vertices)
    return float(max(d1, d2))


def circumscribe(C: ConvexPolygon, directions: Sequence[Functional]) -> ConvexPolygon:
    """Polygon cut out by the supporting half-planes of ``C`` with the given outer functionals."""
    if len(directions) < 3:
        raise GeometryError("insufficient directions: need at least 3 functionals")
    normals = np.array([phi.normal for phi in directions])
    offsets = np.max(normals @ C.vertices.T, axis=1)
    return halfplane_intersection(normals, offsets)


def boundary_point(P: ConvexPolygon, direction) -> tuple[np.ndarray, int]:
    """Where the ray from the origin (assumed interior) along ``direction`` leaves ``P``.

    Returns the point and the index of the edge it lies on.
    """
    d = as_point(direction)
    v = P.vertices
    e = P.edges
    den = symp(e, d)
    num = symp(v, d)
    best = None
    for i in range(len(v)):
        if den[i] == 0:
            continue
        t = -num[i] / den[i]  # v + t e on the ray: symp(v + t e, d) = 0
        if -1e-12 <= t <= 1 + 1e-12:
            p = v[i] + min(max(t, 0.0), 1.0) * e[i]
            if p @ d > 0:
                if best is None or abs(t - 0.5) < best[2]:
                    best = (p, i, abs(t - 0.5))
    if best is None:
        raise GeometryError("ray does not leave the polygon")
    return best[0], best[1]


def boundary_arc(P: ConvexPolygon, theta0: float, theta1: float) -> np.ndarray:
    """Polyline along ``∂P`` from polar angle ``theta0`` CCW to ``theta1`` (origin interior)."""
    span = theta1 - theta0
    if span <= 0 or span > 2 * math.pi + 1e-12:
        raise GeometryError("arc must have 0 < theta1 - theta0 <= 2*pi")
    ang = np.mod(np.arctan2(P.vertices[:, 1], P.vertices[:, 0]) - theta0, 2 * math.pi)
    snap = 1e-12

    def endpoint(theta: float, offset: float) -> np.ndarray:
        # an angle within rounding of a vertex direction means that vertex
        d = np.abs(np.mod(ang - offset + math.pi, 2 * math.pi) - math.pi)
        j = int(np.argmin(d))
        if d[j] < snap:
            return P.vertices[j].copy()
        return boundary_point(P, (math.cos(theta), math.sin(theta)))[0]

    p0, p1 = endpoint(theta0, 0.0), endpoint(theta1, span)
    inner = ang > snap
    inner &= ang < span - snap
    idx = np.flatnonzero(inner)
    idx = idx[np.argsort(ang[idx])]
    return np.vstack([p0, P.vertices[idx], p1])
