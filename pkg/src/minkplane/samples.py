"""Random and library test objects shared by the property suite and the tests."""

from __future__ import annotations

import math

import numpy as np

from .geometry import ConvexPolygon, SymmetricPolygon, convex_hull
from .norms import EuclideanNorm, LpNorm, MixedNorm, Norm, PolygonNorm
from .radon import QuadrantArc, generator_regular_gon, regular_polygon
from .triangle import Triangle


def random_symmetric_polygon(rng: np.random.Generator, k: int | None = None) -> SymmetricPolygon:
    """Hull of ``k`` random points on an annulus and their negatives."""
    if k is None:
        k = int(rng.integers(3, 9))
    while True:
        th = np.sort(rng.uniform(0, math.pi, k))
        r = rng.uniform(0.6, 1.4, k)
        pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
        try:
            return SymmetricPolygon.symmetrize_hull(np.vstack([pts, -pts]))
        except ValueError:
            continue


def random_polygon_norm(rng: np.random.Generator, k: int | None = None) -> PolygonNorm:
    return PolygonNorm(random_symmetric_polygon(rng, k))


def random_convex_polygon(rng: np.random.Generator, k: int = 8, scale: float = 1.0) -> ConvexPolygon:
    while True:
        pts = rng.normal(size=(k, 2)) * scale + rng.normal(size=2) * scale
        h = convex_hull(pts)
        if len(h) >= 3:
            return ConvexPolygon(h)


def random_triangle(rng: np.random.Generator, min_area: float = 1e-2) -> Triangle:
    while True:
        try:
            T = Triangle(*rng.normal(size=(3, 2)))
        except ValueError:
            continue
        if T.area() >= min_area:
            return T


def square_norm() -> PolygonNorm:
    """The max norm, unit ball ``[-1, 1]^2``."""
    return PolygonNorm(SymmetricPolygon.from_half([(1, -1), (1, 1)]))


def diamond_norm() -> PolygonNorm:
    """The sum norm, unit ball with vertices on the axes."""
    return PolygonNorm(SymmetricPolygon.from_half([(1, 0), (0, 1)]))


def library() -> dict[str, Norm]:
    """Named norms used across the suites; Radon status is known for each."""
    return {
        "square": square_norm(),
        "diamond": diamond_norm(),
        "hexagon": PolygonNorm(generator_regular_gon(6)),
        "octagon": PolygonNorm(regular_polygon(8)),
        "decagon": PolygonNorm(generator_regular_gon(10)),
        "lp4": LpNorm(4),
        "mixed4": MixedNorm(4),
        "euclidean": EuclideanNorm(),
    }


RADON_LIBRARY = {"hexagon", "decagon", "mixed4", "euclidean"}


def random_quadrant_arc(rng: np.random.Generator, k: int = 4) -> QuadrantArc:
    """Convex arc from ``(1, 0)`` to ``(0, 1)`` inside the unit square."""
    a, b = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    pts = rng.uniform(0, 1, size=(k, 2))
    pts = pts[pts.sum(axis=1) > 1.0 + 1e-6]
    hull = convex_hull(np.vstack([[0.0, 0.0], a, b, pts]))
    i0 = int(np.argmin(np.hypot(hull[:, 0], hull[:, 1])))
    ring = np.roll(hull, -i0, axis=0)[1:]  # from a counterclockwise to b
    return QuadrantArc(a, b, ring[1:-1])
