import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkplane import _fallback, kernels
from minkplane.norms import PolygonNorm
from minkplane.samples import random_convex_polygon, random_polygon_norm

compiled = pytest.importorskip("minkplane._kernels")

seeds = st.integers(0, 2**32 - 1)


def setup(seed):
    rng = np.random.default_rng(seed)
    N = random_polygon_norm(rng, int(rng.integers(2, 20)))
    S = np.ascontiguousarray(random_convex_polygon(rng).vertices)
    P = rng.normal(size=(64, 2)) * rng.uniform(0.1, 10)
    return rng, N, S, P


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_gauges_agree(seed):
    _, N, _, P = setup(seed)
    for name, M in (("poly_gauge_many", N.F), ("poly_antinorm_many", N.V)):
        a, b = getattr(_fallback, name)(M, P), getattr(compiled, name)(M, P)
        assert np.allclose(a, b, rtol=1e-13, atol=0)
    x, y = P[0]
    assert compiled.poly_gauge(N.F, x, y) == pytest.approx(_fallback.poly_gauge(N.F, x, y), rel=1e-13)
    assert compiled.poly_antinorm(N.V, x, y) == pytest.approx(_fallback.poly_antinorm(N.V, x, y), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_segment_and_line_minima_agree(seed):
    rng, N, _, P = setup(seed)
    for (px, py), (ax, ay), (bx, by) in rng.normal(size=(10, 3, 2)):
        s1, s2 = _fallback.seg_min_gauge(N.F, N.V, px, py, ax, ay, bx, by), compiled.seg_min_gauge(N.F, N.V, px, py, ax, ay, bx, by)
        assert s1[0] == pytest.approx(s2[0], rel=1e-12, abs=1e-15)
        l1, l2 = _fallback.line_min_gauge(N.F, N.V, px, py, ax, ay, bx, by), compiled.line_min_gauge(N.F, N.V, px, py, ax, ay, bx, by)
        assert l1[0] == pytest.approx(l2[0], rel=1e-12, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_polygon_nearest_agrees(seed):
    _, N, S, P = setup(seed)
    # rows are (distance, lo_x, lo_y, hi_x, hi_y)
    a, b = _fallback.polygon_nearest_many(N.F, N.V, S, P), compiled.polygon_nearest_many(N.F, N.V, S, P)
    assert np.allclose(a[:, 0], b[:, 0], rtol=1e-12, atol=1e-14)
    for R in (a, b):
        for cols in ((1, 2), (3, 4)):
            assert np.allclose(N.gauge_many(P - R[:, cols]), R[:, 0], rtol=1e-9, atol=1e-12)
    for p in P[:5]:
        r1 = _fallback.polygon_nearest(N.F, N.V, S, p[0], p[1])
        r2 = compiled.polygon_nearest(N.F, N.V, S, p[0], p[1])
        assert r1[0] == pytest.approx(r2[0], rel=1e-12, abs=1e-14)


def test_inside_convex_agrees(rng):
    S = np.ascontiguousarray(random_convex_polygon(rng).vertices)
    for x, y in rng.normal(size=(500, 2)):
        assert bool(_fallback.inside_convex(S, x, y, 0.0)) == bool(compiled.inside_convex(S, x, y, 0.0))


def test_line_min_brute_force(rng):
    N = random_polygon_norm(rng)
    p, q, d = rng.normal(size=(3, 2))
    val, lo, hi = kernels.line_min_gauge(N.F, N.V, *p, *q, *d)
    t = np.linspace(lo - 5, hi + 5, 200_001)
    brute = N.gauge_many(p - (q + t[:, None] * d)).min()
    assert val <= brute + 1e-15 and val == pytest.approx(brute, abs=1e-6)


def test_selected_backend():
    assert kernels.BACKEND == "cython"


def test_pure_override():
    code = "from minkplane import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, MINKPLANE_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_polygon_norm_uses_kernels(rng):
    N = PolygonNorm(random_polygon_norm(rng).B)
    P = rng.normal(size=(10, 2))
    assert np.array_equal(N.gauge_many(P), kernels.poly_gauge_many(N.F, P))
