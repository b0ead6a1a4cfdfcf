import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkplane.geometry import (
    ConvexPolygon,
    Functional,
    GeometryError,
    SymmetricPolygon,
    boundary_arc,
    circumscribe,
    convex_hull,
    halfplane_intersection,
    hausdorff,
    polar,
    signed_area,
    support,
    symp,
)
from minkplane.norms import PolygonNorm
from minkplane.samples import diamond_norm, random_convex_polygon, square_norm

from helpers import same_vertex_set

SQUARE = SymmetricPolygon([(1, -1), (1, 1), (-1, 1), (-1, -1)])
DIAMOND = SymmetricPolygon([(1, 0), (0, 1), (-1, 0), (0, -1)])

coords = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
vectors = st.tuples(coords, coords).map(np.array)


def dense_boundary(P: ConvexPolygon, per_edge: int = 400) -> np.ndarray:
    t = np.linspace(0, 1, per_edge, endpoint=False)[:, None]
    V = P.vertices
    return np.vstack([V[i] + t * (V[(i + 1) % len(V)] - V[i]) for i in range(len(V))])


class TestSymp:
    def test_examples(self):
        assert symp((1, 0), (0, 1)) == 1
        assert symp((2, 1), (3, 4)) == 5

    @given(vectors)
    def test_alternating(self, x):
        assert symp(x, x) == 0

    @given(vectors, vectors)
    def test_antisymmetric(self, x, y):
        assert symp(x, y) == -symp(y, x)

    def test_vectorized(self):
        X = np.array([[1.0, 0.0], [2.0, 1.0]])
        Y = np.array([[0.0, 1.0], [3.0, 4.0]])
        assert np.array_equal(symp(X, Y), [1.0, 5.0])


class TestPolygons:
    def test_areas(self):
        assert SQUARE.area() == 4
        assert DIAMOND.area() == 2
        assert ConvexPolygon([(0, 0), (1, 0), (0, 1)]).area() == 0.5

    def test_orientation_normalized(self):
        P = ConvexPolygon([(0, 0), (0, 1), (1, 0)])
        assert signed_area(P.vertices) > 0

    def test_rejects_collinear(self):
        with pytest.raises(GeometryError):
            ConvexPolygon([(0, 0), (1, 0), (2, 0)])

    def test_rejects_nonconvex(self):
        with pytest.raises(GeometryError):
            ConvexPolygon([(0, 0), (2, 0), (1, 0.2), (1, 2)])

    def test_rejects_nonfinite(self):
        with pytest.raises(GeometryError):
            ConvexPolygon([(0, 0), (1, 0), (math.nan, 1)])

    def test_symmetric_requires_symmetry(self):
        with pytest.raises(GeometryError):
            SymmetricPolygon([(1, 0), (0, 1), (-1, 0), (0, -2)])

    def test_hull_matches_brute_force(self, rng):
        pts = rng.normal(size=(200, 2))
        H = convex_hull(pts)
        # every hull edge has all points on its left
        for i in range(len(H)):
            e = H[(i + 1) % len(H)] - H[i]
            assert np.all(symp(e, pts - H[i]) >= -1e-12)

    def test_contains(self):
        assert SQUARE.contains((1, 0.5))
        assert not SQUARE.contains((1.01, 0))


class TestSupport:
    def test_square_edge(self):
        s = support(SQUARE, Functional((0, 1)))
        assert s.value == 1
        assert {tuple(SQUARE.vertices[i]) for i in s.face} == {(1.0, -1.0), (1.0, 1.0)}

    def test_diamond_edge(self):
        s = support(DIAMOND, Functional((-1, 1)))
        assert s.value == 1
        assert {tuple(DIAMOND.vertices[i]) for i in s.face} == {(1.0, 0.0), (0.0, 1.0)}

    @given(vectors.filter(lambda g: np.abs(g).max() > 1e-3))
    def test_width_nonnegative(self, g):
        phi, neg = Functional(g), Functional(-g)
        assert support(SQUARE, phi).value + support(SQUARE, neg).value >= 0


class TestPolar:
    def test_square(self):
        assert same_vertex_set(polar(SQUARE).vertices, DIAMOND.vertices)

    def test_hexagon(self):
        th = np.arange(6) * math.pi / 3
        H = SymmetricPolygon(np.column_stack([np.cos(th), np.sin(th)]))
        r = 2 / math.sqrt(3)
        expect = r * np.column_stack([np.cos(th + math.pi / 6), np.sin(th + math.pi / 6)])
        assert same_vertex_set(polar(H).vertices, expect, 1e-12)

    def test_involution(self, rng):
        B = SymmetricPolygon.symmetrize_hull(rng.normal(size=(10, 2)))
        assert same_vertex_set(polar(polar(B)).vertices, B.vertices, 1e-9)


class TestHausdorff:
    def test_identical(self):
        assert hausdorff(SQUARE, SQUARE) == 0

    def test_scaled_square(self):
        assert hausdorff(SQUARE, SQUARE.scaled(1.1)) == pytest.approx(0.1 * math.sqrt(2), rel=1e-12)

    def test_square_diamond_linf(self):
        # brute force over dense boundary samples of both bodies
        L = square_norm()
        P, Q = dense_boundary(SQUARE), dense_boundary(DIAMOND)
        d = lambda X, Y: max(np.min(np.max(np.abs(Y - x), axis=1)) for x in X[::7])
        brute = max(d(DIAMOND.vertices, Q), d(SQUARE.vertices, Q), d(DIAMOND.vertices, P))
        assert brute == pytest.approx(0.5, abs=1e-9)
        assert hausdorff(SQUARE, DIAMOND, L) == pytest.approx(0.5, abs=1e-12)


class TestCircumscribe:
    def test_axis_functionals(self):
        dirs = [Functional.from_normal(n) for n in [(1, 0), (0, 1), (-1, 0), (0, -1)]]
        assert same_vertex_set(circumscribe(DIAMOND, dirs).vertices, SQUARE.vertices)

    def test_own_edges(self, rng):
        C = random_convex_polygon(rng)
        assert same_vertex_set(circumscribe(C, C.edge_functionals()).vertices, C.vertices, 1e-9)

    def test_too_few(self):
        with pytest.raises(GeometryError):
            circumscribe(DIAMOND, [Functional((0, -1)), Functional((-1, 0))])

    def test_unbounded(self):
        with pytest.raises(GeometryError):
            halfplane_intersection([(1, 0), (0, 1), (1, 1)], [1, 1, 1])


class TestBoundaryArc:
    def test_snaps_to_vertices(self):
        arc = boundary_arc(SQUARE, -math.pi / 4, math.pi / 4)
        assert np.array_equal(arc, [[1, -1], [1, 1]])

    def test_full_turn(self):
        arc = boundary_arc(DIAMOND, 0.1, 0.1 + 2 * math.pi)
        assert len(arc) == 6


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_polygon_norm_roundtrip(seed):
    rng = np.random.default_rng(seed)
    B = SymmetricPolygon.symmetrize_hull(rng.normal(size=(8, 2)))
    N = PolygonNorm(B)
    assert np.allclose(N.gauge_many(B.vertices), 1.0, atol=1e-12)


def test_diamond_norm_is_l1():
    N = diamond_norm()
    assert N.gauge((3, 1)) == 4
