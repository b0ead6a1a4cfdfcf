import math

import numpy as np
import pytest

from minkplane.geometry import ConvexPolygon, GeometryError
from minkplane.norms import EuclideanNorm, LpNorm, MixedNorm, PolygonNorm
from minkplane.projections import (
    antiball_dconvex_check,
    antiball_projection_uniqueness_scan,
    ball_hull_member,
    ball_hull_polygon,
    bisector_sample,
    bisector_strip,
    d_member,
    d_segment,
    lassak_duality_check,
    lassak_pair_defect,
    metric_projection,
    metric_projection_many,
    nearest_on_line,
    nonexpansive_scan,
    radial_projection,
    strip_test,
)
from minkplane.radon import generator_regular_gon, regular_polygon
from minkplane.samples import diamond_norm, random_convex_polygon, random_polygon_norm, square_norm

from helpers import same_vertex_set

LINF = square_norm()
HEXAGON = PolygonNorm(generator_regular_gon(6))


def grid_line_min(N, x, q, d, n=4001, span=20.0, levels=6):
    """Minimum over a grid of line parameters, zoomed around the best node."""
    x, q, d = (np.asarray(v, dtype=float) for v in (x, q, d))
    lo, hi = -span, span
    for _ in range(levels):
        t = np.linspace(lo, hi, n)
        vals = N.gauge_many(x - (q + t[:, None] * d))
        k = int(np.argmin(vals))
        h = t[1] - t[0]
        lo, hi = t[k] - 2 * h, t[k] + 2 * h
    return float(vals.min())


class TestRadial:
    def test_examples(self):
        assert np.array_equal(radial_projection(LINF, (2, 2)), [1, 1])
        assert np.array_equal(radial_projection(LINF, (0.5, 0.2)), [0.5, 0.2])
        assert np.allclose(radial_projection(diamond_norm(), (3, 1)), [0.75, 0.25], atol=1e-15)

    def test_square_norm_witness(self):
        assert nonexpansive_scan(LINF, "radial", "norm", 2000, 0, adaptive=True).max_ratio > 1

    def test_hexagon_norm_nonexpansive(self):
        assert nonexpansive_scan(HEXAGON, "radial", "norm", 10_000, 0).max_ratio <= 1 + 1e-9

    def test_antinorm_nonexpansive(self, rng):
        N = random_polygon_norm(rng)
        assert nonexpansive_scan(N, "radial", "antinorm", 10_000, 1).max_ratio <= 1 + 1e-9

    def test_smooth(self):
        assert nonexpansive_scan(LpNorm(4), "radial", "antinorm", 5000, 2).max_ratio <= 1 + 1e-9


class TestMetricProjection:
    def test_square_face(self):
        S = LINF.B
        r = metric_projection(LINF, S, (3, 0))
        assert r.distance == 2
        assert np.allclose(r.point, (1, 0), atol=1e-12)
        assert not r.unique
        assert same_vertex_set(np.array(r.face), [(1, -1), (1, 1)], 1e-12)

    def test_inside(self):
        r = metric_projection(LINF, LINF.B, (0.3, -0.2))
        assert r.distance == 0 and np.array_equal(r.point, [0.3, -0.2])

    def test_euclidean(self):
        S = ConvexPolygon([(-1, 0), (1, 0), (0, -1)])
        r = metric_projection(EuclideanNorm(), S, (0, 2))
        assert np.allclose(r.point, (0, 0), atol=1e-12) and r.distance == pytest.approx(2)

    def test_vectorized_matches(self, rng):
        N, S = random_polygon_norm(rng), random_convex_polygon(rng)
        P = rng.normal(size=(50, 2)) * 3
        V = metric_projection_many(N, S, P)
        for p, v in zip(P, V):
            r = metric_projection(N, S, p)
            assert N.gauge(p - v) == pytest.approx(r.distance, rel=1e-9, abs=1e-12)

    def test_antinorm_nonexpansive(self, rng):
        N, S = random_polygon_norm(rng), random_convex_polygon(rng)
        assert nonexpansive_scan(N, S, "antinorm", 10_000, 3).max_ratio <= 1 + 1e-9

    def test_octagon_norm_witness(self, norms):
        assert nonexpansive_scan(norms["octagon"], "radial", "norm", 5000, 4, adaptive=True).max_ratio > 1


class TestNearestOnLine:
    def test_linf_antinorm(self):
        assert np.allclose(nearest_on_line(LINF, (1, 1), (0, 0), (1, 0), "antinorm"), (1, 0), atol=1e-12)

    def test_euclidean(self):
        assert np.allclose(nearest_on_line(EuclideanNorm(), (3, 4), (0, 0), (1, 0)), (3, 0), atol=1e-12)

    def test_against_grid(self, rng):
        for _ in range(10):
            N = random_polygon_norm(rng)
            x, q, d = rng.normal(size=(3, 2))
            m = nearest_on_line(N, x, q, d, "norm")
            assert N.gauge(x - m) == pytest.approx(grid_line_min(N, x, q, d), abs=1e-12)

    def test_smooth_against_grid(self, rng):
        N = LpNorm(3)
        x, q, d = rng.normal(size=(3, 2))
        m = nearest_on_line(N, x, q, d, "antinorm")
        assert N.antinorm(x - m) == pytest.approx(grid_line_min(N.anti(), x, q, d), abs=1e-12)

    def test_nearest_inside_ball(self, rng):
        # a unit x has its antinorm-nearest point on any line through o inside B
        N = random_polygon_norm(rng)
        for _ in range(100):
            x, y = N.unit(rng.normal(size=2)), rng.normal(size=2)
            assert N.gauge(nearest_on_line(N, x, (0, 0), y, "antinorm")) <= 1 + 1e-9


class TestBisectors:
    def test_lp4_symmetric(self):
        S = bisector_sample(LpNorm(4), (-1, 0), (1, 0))
        assert len(S) == 200 and np.allclose(S[:, 0], 0, atol=1e-12)
        assert strip_test(S, bisector_strip(LpNorm(4), (-1, 0), (1, 0)))

    @pytest.mark.parametrize("N", [LpNorm(4), MixedNorm(4), EuclideanNorm(), LpNorm(1.5)])
    def test_anticircle_strip(self, N, rng):
        p, q = rng.normal(size=(2, 2))
        assert strip_test(bisector_sample(N, p, q), bisector_strip(N, p, q, "anti"))

    def test_norm_strip_radon(self):
        p, q = np.array([0.1, 0.2]), np.array([1.3, 0.9])
        N = MixedNorm(4)
        assert strip_test(bisector_sample(N, p, q), bisector_strip(N, p, q, "norm"))

    def test_norm_strip_witness(self):
        p, q = np.array([0.1, 0.2]), np.array([1.3, 0.9])
        N = LpNorm(4)
        assert not strip_test(bisector_sample(N, p, q), bisector_strip(N, p, q, "norm"))

    def test_requires_strict_convexity(self):
        with pytest.raises(GeometryError, match="strict convexity"):
            bisector_sample(LINF, (0, 0), (1, 0))


class TestDSegments:
    def test_linf_diamond(self):
        D = d_segment(LINF, (0, 0), (2, 0))
        assert same_vertex_set(D.main_piece(), [(0, 0), (1, 1), (2, 0), (1, -1)], 1e-12)
        g = np.linspace(-0.5, 2.5, 61)
        for x in g:
            for y in g:
                assert D.contains((x, y), 1e-9) == d_member(LINF, (0, 0), (2, 0), (x, y), 1e-9)

    def test_membership(self):
        assert d_member(LINF, (0, 0), (2, 0), (1, 1))
        assert not d_member(LINF, (0, 0), (2, 0), (1, 1.01))

    def test_euclidean_segment(self):
        D = d_segment(EuclideanNorm(), (0, 0), (1, 2))
        assert D.area() == 0

    def test_vertex_direction_degenerate(self):
        # b - a along a vertex of B: only the segment is between them
        assert d_segment(LINF, (0, 0), (1, 1)).area() == pytest.approx(0, abs=1e-15)
        assert d_segment(LINF, (0, 0), (1, 0.5)).area() > 0

    def test_random_against_definition(self, rng):
        N = random_polygon_norm(rng)
        a, b = rng.normal(size=(2, 2))
        D = d_segment(N, a, b)
        lo, hi = np.minimum(a, b) - 1, np.maximum(a, b) + 1
        for x in rng.uniform(lo, hi, size=(2000, 2)):
            inside, between = D.contains(x, 1e-9), d_member(N, a, b, x, 1e-9)
            if inside != between:
                # only boundary points may disagree at the tolerance
                assert abs(N.gauge(x - a) + N.gauge(b - x) - N.gauge(b - a)) < 1e-6


class TestBallHull:
    def test_diamond_pair(self):
        N = diamond_norm()
        A = [(0, 0), (2, 0)]
        assert ball_hull_member(N, A, (1, 1))
        assert not ball_hull_member(N, A, (1, 1.2))
        H = ConvexPolygon(ball_hull_polygon(N, np.array(A)))
        assert same_vertex_set(H.vertices, [(0, 0), (1, 1), (2, 0), (1, -1)], 1e-9)

    def test_convex_hull_inside(self, rng):
        N = random_polygon_norm(rng)
        A = rng.normal(size=(4, 2))
        z = rng.dirichlet(np.ones(4)) @ A
        assert ball_hull_member(N, A, z, resolution=60)

    def test_lassak(self):
        assert lassak_duality_check(LINF, 20, 0).ok
        assert lassak_duality_check(HEXAGON, 20, 0).ok
        assert lassak_pair_defect(LINF, np.array([0.0, 0.0]), np.array([2.0, 0.0])) <= 1e-9

    def test_lassak_fine_polygon(self):
        N = PolygonNorm(regular_polygon(90))
        assert lassak_pair_defect(N, np.array([0.0, 0.0]), np.array([1.0, 0.3])) <= 1e-3


class TestAntiball:
    def test_dconvex(self):
        for N in (LINF, HEXAGON, PolygonNorm(EuclideanNorm().ball(360))):
            assert antiball_dconvex_check(N, 300, 0)

    def test_uniqueness_scan(self):
        I, B = LINF.isoperimetrix(), LINF.B
        assert antiball_projection_uniqueness_scan(LINF, I, 4000, 0)[0]
        ok, res = antiball_projection_uniqueness_scan(LINF, B, 4000, 0)
        assert not ok and res.max_ratio > 1
        assert antiball_projection_uniqueness_scan(LINF, I.vertices * 3, 4000, 0)[0]
