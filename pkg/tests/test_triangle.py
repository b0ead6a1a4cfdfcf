import math

import numpy as np
import pytest

from minkplane.geometry import GeometryError
from minkplane.norms import EuclideanNorm, LpNorm, PolygonNorm
from minkplane.radon import generator_regular_gon
from minkplane.samples import diamond_norm, random_polygon_norm, random_triangle, square_norm
from minkplane.triangle import (
    Triangle,
    angle_between,
    anti_equilateral_triangle,
    anti_incenter,
    anti_side_lengths,
    bisector_concurrency,
    busemann_bisector,
    fermat_torricelli,
    ft_grid_oracle,
    gbt_spread,
    glogovskii_bisector,
    glogovskii_oracle,
    incenter,
    is_anti_equilateral,
    line_distance,
    line_distance_oracle,
    min_width,
    reduced_check,
    triangle_report,
    verify_ft_characterization,
    viviani_defect,
)

LINF = square_norm()
HEXAGON = PolygonNorm(generator_regular_gon(6))
SMALL = Triangle((0, 0), (1, 0), (0.5, 0.5))


def parallel(u, v, tol=1e-12):
    return angle_between(u, v) <= tol


def grid_incenter(N, T, metric, n=801):
    """Point of the triangle maximizing its smallest distance to the side lines."""
    v = T.vertices
    lo, hi = v.min(axis=0), v.max(axis=0)
    X, Y = np.meshgrid(np.linspace(lo[0], hi[0], n), np.linspace(lo[1], hi[1], n))
    P = np.column_stack([X.ravel(), Y.ravel()])
    dist = np.full(len(P), np.inf)
    for i in range(3):
        q, r = v[(i + 1) % 3], v[(i + 2) % 3]
        e = r - q
        s = (e[0] * (P[:, 1] - q[1]) - e[1] * (P[:, 0] - q[0])) * np.sign(
            e[0] * (v[i][1] - q[1]) - e[1] * (v[i][0] - q[0]))
        dual = N.antinorm(e) if metric == "norm" else N.gauge(e)
        dist = np.minimum(dist, s / dual)
    k = int(np.argmax(dist))
    return P[k], float(dist[k])


class TestLineDistance:
    def test_linf_example(self):
        q, d = (1, 0), (-1, 1)
        assert line_distance(LINF, (0, 0), q, d, "norm") == 0.5
        assert line_distance(LINF, (0, 0), q, d, "antinorm") == 1.0
        assert line_distance_oracle(LINF, (0, 0), q, d, "norm") == pytest.approx(0.5, abs=1e-12)
        assert line_distance_oracle(LINF, (0, 0), q, d, "antinorm") == pytest.approx(1.0, abs=1e-12)

    def test_on_line(self):
        assert line_distance(LINF, (0.3, 0.7), (1, 0), (-1, 1)) == 0

    def test_euclidean(self):
        assert line_distance(EuclideanNorm(), (0, 3), (0, 0), (1, 0)) == 3

    def test_against_oracle(self, rng):
        for _ in range(50):
            N = random_polygon_norm(rng)
            p, q, d = rng.normal(size=(3, 2))
            for metric in ("norm", "antinorm"):
                assert line_distance(N, p, q, d, metric) == pytest.approx(
                    line_distance_oracle(N, p, q, d, metric), rel=1e-9, abs=1e-12)

    def test_smooth_oracle(self, rng):
        N = LpNorm(4)
        p, q, d = rng.normal(size=(3, 2))
        assert line_distance(N, p, q, d, "antinorm") == pytest.approx(
            line_distance_oracle(N, p, q, d, "antinorm"), rel=1e-7)

    def test_zero_direction(self):
        with pytest.raises(GeometryError):
            line_distance(LINF, (0, 0), (1, 0), (0, 0))


class TestIncenters:
    def test_linf_right_triangle(self):
        T = Triangle((0, 0), (4, 0), (0, 4))
        c, r = incenter(LINF, T)
        assert np.allclose(c, (1, 1), atol=1e-12) and r == pytest.approx(1, abs=1e-12)
        g, gr = grid_incenter(LINF, T, "norm")
        assert np.allclose(g, (1, 1), atol=1e-2) and gr == pytest.approx(1, abs=1e-2)

    def test_anti_equilateral_incenter_is_centroid(self):
        assert np.allclose(anti_side_lengths(LINF, SMALL), 1.0, atol=1e-15)
        assert is_anti_equilateral(LINF, SMALL)
        c, _ = incenter(LINF, SMALL)
        assert np.allclose(c, (0.5, 1 / 6), atol=1e-6)

    def test_random_against_grid(self, rng):
        for _ in range(3):
            N, T = random_polygon_norm(rng), random_triangle(rng, 0.2)
            for metric, fn in (("norm", incenter), ("antinorm", anti_incenter)):
                _, r = fn(N, T)
                _, gr = grid_incenter(N, T, metric)
                assert gr <= r * (1 + 1e-12)
                assert gr == pytest.approx(r, rel=2e-2)


class TestBisectors:
    def test_busemann_linf(self):
        assert parallel(busemann_bisector(LINF, (0, 0), (1, 0), (0, 1)), (1, 1))
        assert parallel(busemann_bisector(LINF, (0, 0), (1, 0), (1, 1)), (2, 1))

    def test_busemann_euclidean(self):
        u = busemann_bisector(EuclideanNorm(), (0, 0), (1, 0), (0, 1))
        assert np.allclose(u, np.array([1, 1]) / math.sqrt(2), atol=1e-15)

    def test_glogovskii_linf(self):
        assert parallel(glogovskii_bisector(LINF, (0, 0), (1, 0), (0, 1), "norm"), (1, 1))
        u = glogovskii_bisector(LINF, (0, 0), (1, 0), (1, 1), "antinorm")
        assert parallel(u, (2, 1))
        assert parallel(glogovskii_oracle(LINF, (0, 0), (1, 0), (1, 1), "antinorm"), (2, 1), 1e-9)

    def test_glogovskii_against_oracle(self, rng):
        for _ in range(30):
            N = random_polygon_norm(rng)
            r1, r2 = rng.normal(size=(2, 2))
            for metric in ("norm", "antinorm"):
                u = glogovskii_bisector(N, (0, 0), r1, r2, metric)
                assert angle_between(u, glogovskii_oracle(N, (0, 0), r1, r2, metric)) <= 1e-8

    def test_parallel_rays(self):
        with pytest.raises(GeometryError):
            busemann_bisector(LINF, (0, 0), (1, 0), (-2, 0))

    def test_concurrency(self, rng):
        for kind in ("busemann", "glogovskii", "anti-glogovskii"):
            _, spread = bisector_concurrency(random_polygon_norm(rng), random_triangle(rng, 0.1), kind)
            assert spread <= 1e-9


class TestAreaIdentity:
    def test_hexagon_gbt_constant(self, rng):
        for _ in range(20):
            assert gbt_spread(HEXAGON, random_triangle(rng)) <= 1e-9

    def test_report(self):
        T = Triangle((0, 0), (4, 0), (0, 4))
        r = triangle_report(LINF, T)
        beta, eta_a = np.array(r.beta), np.array(r.eta_anti)
        assert np.allclose(0.5 * beta * eta_a, T.area(), rtol=1e-12)
        assert r.as_dict()["area"] == 8.0


class TestFermatTorricelli:
    def test_l1_median(self):
        x, v = fermat_torricelli(diamond_norm(), Triangle((0, 0), (1, 0), (0, 1)))
        assert np.array_equal(x, [0.0, 0.0]) and v == 2.0
        _, g = ft_grid_oracle(diamond_norm(), Triangle((0, 0), (1, 0), (0, 1)), n=1000)
        assert g == pytest.approx(2.0, abs=1e-12)
        assert verify_ft_characterization(diamond_norm(), Triangle((0, 0), (1, 0), (0, 1)), x).trivial

    def test_euclidean_equilateral(self):
        h = math.sqrt(3) / 2
        T = Triangle((0, 0), (1, 0), (0.5, h))
        x, _ = fermat_torricelli(EuclideanNorm(), T)
        assert np.allclose(x, T.centroid(), atol=1e-7)
        assert verify_ft_characterization(EuclideanNorm(), T, x).ok

    def test_linf_nonunique(self):
        T = Triangle((0, 0), (4, 0), (0, 4))
        _, v = fermat_torricelli(LINF, T)
        _, g = ft_grid_oracle(LINF, T, n=1000)
        assert v == pytest.approx(g, abs=1e-6)

    def test_hexagon_characterization(self, rng):
        seen = 0
        for _ in range(20):
            T = random_triangle(rng, 0.1)
            c = verify_ft_characterization(HEXAGON, T)
            assert c.ok
            seen += not c.trivial
        assert seen > 0

    def test_smooth_against_grid(self, rng):
        T = random_triangle(rng, 0.1)
        _, v = fermat_torricelli(LpNorm(3), T)
        _, g = ft_grid_oracle(LpNorm(3), T, n=400)
        assert v <= g + 1e-9 and v == pytest.approx(g, abs=1e-6)


class TestAntiEquilateral:
    def test_viviani_linf(self, rng):
        u = rng.dirichlet(np.ones(3), size=100)
        pts = u @ SMALL.vertices
        assert viviani_defect(LINF, SMALL, pts) <= 1e-9

    def test_viviani_euclidean(self, rng):
        T = Triangle((0, 0), (1, 0), (0.5, math.sqrt(3) / 2))
        pts = rng.dirichlet(np.ones(3), size=100) @ T.vertices
        assert viviani_defect(EuclideanNorm(), T, pts) <= 1e-12

    def test_viviani_rejects(self):
        with pytest.raises(GeometryError):
            viviani_defect(LINF, Triangle((0, 0), (4, 0), (0, 4)), [(1, 1)])

    def test_constructed_triangle(self, rng):
        N = random_polygon_norm(rng)
        T = anti_equilateral_triangle(N, 0.3, 2.0)
        assert np.allclose(anti_side_lengths(N, T), 2.0, rtol=1e-12)

    def test_reduced(self, rng):
        N = random_polygon_norm(rng)
        red, consistent = reduced_check(N, anti_equilateral_triangle(N, 1.0))
        assert red and consistent
        red, consistent = reduced_check(N, Triangle((0, 0), (5, 0), (0, 1)))
        assert not red and consistent

    def test_min_width_square_triangle(self):
        # the right triangle with legs 4 has linf width 2 across its hypotenuse direction
        assert min_width(LINF, Triangle((0, 0), (4, 0), (0, 4))) == pytest.approx(2.0, abs=1e-12)


def test_degenerate_triangle():
    with pytest.raises(GeometryError):
        Triangle((0, 0), (1, 1), (2, 2))
