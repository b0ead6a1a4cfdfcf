"""Seeded property suites: each check reports a measured value against its threshold."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import isoperimetry as iso
from . import projections as proj
from . import radon, triangle
from .geometry import area, hausdorff, polar, symp
from .norms import PolygonNorm, antinorm_involution_defect, is_normal
from .samples import (
    RADON_LIBRARY,
    library,
    random_convex_polygon,
    random_polygon_norm,
    random_quadrant_arc,
    random_symmetric_polygon,
    random_triangle,
    square_norm,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    suite: str
    ok: bool
    value: float
    threshold: float
    relation: str  # how value is compared to threshold
    seconds: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    fn: Callable[[np.random.Generator], tuple]  # -> (value, threshold, relation)


def _cmp(value, threshold, relation) -> bool:
    if relation == "<=":
        return value <= threshold
    if relation == ">=":
        return value >= threshold
    if relation == "==":
        return value == threshold
    raise ValueError(relation)


CHECKS: list[Check] = []


def check(suite: str, name: str):
    def deco(fn):
        CHECKS.append(Check(name, suite, fn))
        return fn

    return deco


# -- geometry ----------------------------------------------------------------


@check("geometry", "symp antisymmetric and bilinear")
def _symp_forms(rng):
    worst = 0.0
    for _ in range(1000):
        x, y, z = rng.normal(size=(3, 2))
        a, b = rng.normal(size=2)
        s = 1.0 + abs(symp(x, y)) + abs(symp(z, y))
        worst = max(worst, abs(symp(x, y) + symp(y, x)) / s)
        worst = max(worst, abs(symp(a * x + b * z, y) - a * symp(x, y) - b * symp(z, y)) / (s * (1 + abs(a) + abs(b))))
    return worst, 1e-12, "<="


@check("geometry", "polar is an involution")
def _polar_involution(rng):
    worst = 0.0
    for _ in range(50):
        B = random_symmetric_polygon(rng)
        worst = max(worst, hausdorff(B, polar(polar(B))) / B.diameter())
    return worst, 1e-9, "<="


@check("geometry", "area translation and scaling")
def _area_scaling(rng):
    worst = 0.0
    for _ in range(200):
        C = random_convex_polygon(rng)
        t, s = rng.normal(size=2), rng.uniform(0.1, 10)
        a = area(C)
        worst = max(worst, abs(area(C.translated(t)) - a) / a, abs(area(C.scaled(s)) - s * s * a) / (s * s * a))
    return worst, 1e-12, "<="


# -- norms -------------------------------------------------------------------


@check("norms", "cauchy-schwarz bound |[x,y]| <= gauge(x) antinorm(y)")
def _cauchy_schwarz(rng):
    worst = -math.inf
    for N in list(library().values()) + [random_polygon_norm(rng) for _ in range(5)]:
        X, Y = rng.normal(size=(2, 2000, 2))
        rhs = N.gauge_many(X) * N.antinorm_many(Y)
        worst = max(worst, float(np.max((np.abs(symp(X, Y)) - rhs) / rhs)))
    return worst, 1e-9, "<="


@check("norms", "antinorm reverses normality")
def _reversal(rng):
    bad = 0
    for _ in range(20):
        N = random_polygon_norm(rng)
        A = N.anti()
        for _ in range(50):
            x = N.unit(rng.normal(size=2))
            y = N.normal_cone(x).direction(float(rng.uniform()))
            if not is_normal(A, y, x, tol=1e-9):
                bad += 1
    return float(bad), 0.0, "<="


@check("norms", "antinorm involution")
def _involution(rng):
    worst = 0.0
    for _ in range(30):
        N = random_polygon_norm(rng, int(rng.integers(2, 17)))
        worst = max(worst, antinorm_involution_defect(N) / N.B.diameter())
    return worst, 1e-9, "<="


@check("norms", "lambda mu range in [0, 2]")
def _normal_product(rng):
    lo, hi = math.inf, -math.inf
    for _ in range(5):
        N = random_polygon_norm(rng)
        a, b = radon.normal_product_range(N, 200, int(rng.integers(1 << 31)))
        lo, hi = min(lo, a), max(hi, b)
    return max(-lo, hi - 2.0), 1e-6, "<="


@check("norms", "gauge subadditive and homogeneous")
def _subadditive(rng):
    worst = -math.inf
    for N in library().values():
        X, Y = rng.normal(size=(2, 1000, 2))
        s = rng.uniform(-5, 5, size=1000)
        gx, gy = N.gauge_many(X), N.gauge_many(Y)
        worst = max(worst, float(np.max((N.gauge_many(X + Y) - gx - gy) / (gx + gy))))
        worst = max(worst, float(np.max(np.abs(N.gauge_many(s[:, None] * X) - np.abs(s) * gx) / (1 + np.abs(s) * gx))))
    return worst, 1e-12, "<="


# -- radon ---------------------------------------------------------------------


@check("radon", "regular 4n+2-gons are Radon")
def _regular_radon(rng):
    return max(radon.is_radon(radon.generator_regular_gon(4 * n + 2), False).relative_defect for n in range(1, 6)), 1e-9, "<="


@check("radon", "regular 4n-gons are not Radon")
def _regular_not(rng):
    return min(radon.is_radon(radon.regular_polygon(4 * n), False).relative_defect for n in range(1, 4)), 0.01, ">="


@check("radon", "construction has symmetric normality")
def _construct_symmetric(rng):
    bad = 0
    for _ in range(5):
        N = PolygonNorm(radon.radon_construct(random_quadrant_arc(rng)))
        for _ in range(100):
            x = N.unit(rng.normal(size=2))
            y = N.normal_cone(x).direction(float(rng.uniform()))
            if not is_normal(N, y, x, tol=1e-9):
                bad += 1
    return float(bad), 0.0, "<="


@check("radon", "radonize is idempotent")
def _radonize_idem(rng):
    worst = 0.0
    for _ in range(10):
        R = radon.radonize(random_polygon_norm(rng))
        worst = max(worst, hausdorff(R, radon.radonize(R)) / R.diameter())
    return worst, 1e-9, "<="


@check("radon", "sign condition on Radon norms")
def _sign_condition(rng):
    fails = sum(not radon.sign_test_3prime(PolygonNorm(radon.radonize(random_polygon_norm(rng))), 200, int(rng.integers(1 << 31))) for _ in range(5))
    return float(fails), 0.0, "<="


# -- triangle ----------------------------------------------------------------------


@check("triangle", "area identity")
def _area_identity(rng):
    worst = 0.0
    for _ in range(200):
        N, T = random_polygon_norm(rng), random_triangle(rng)
        v = T.vertices
        A = T.area()
        for i in range(3):
            q, r = v[(i + 1) % 3], v[(i + 2) % 3]
            eta_a = triangle.line_distance_oracle(N, v[i], q, r - q, "antinorm")
            worst = max(worst, abs(A - 0.5 * N.gauge(r - q) * eta_a) / A)
    return worst, 1e-9, "<="


@check("triangle", "busemann = antinorm glogovskii")
def _angle_identity(rng):
    worst = 0.0
    for _ in range(200):
        N = random_polygon_norm(rng)
        r1, r2 = rng.normal(size=(2, 2))
        if abs(symp(r1, r2)) < 1e-3:
            continue
        u = triangle.busemann_bisector(N, (0, 0), r1, r2)
        w = triangle.glogovskii_oracle(N, (0, 0), r1, r2, "antinorm")
        worst = max(worst, triangle.angle_between(u, w))
    return worst, 1e-8, "<="


@check("triangle", "busemann bisectors meet at the anti-incenter")
def _busemann_concurrent(rng):
    worst = 0.0
    for _ in range(50):
        N, T = random_polygon_norm(rng), random_triangle(rng, 0.1)
        c, spread = triangle.bisector_concurrency(N, T, "busemann")
        ai, _ = triangle.anti_incenter(N, T)
        worst = max(worst, spread / T.scale, float(np.linalg.norm(c - ai)) / T.scale)
    return worst, 1e-8, "<="


@check("triangle", "bisector coincidence iff Radon")
def _duvelmeyer(rng):
    mismatches = 0
    for name, N in library().items():
        dev = 0.0
        for _ in range(200):
            r1, r2 = rng.normal(size=(2, 2))
            if abs(symp(r1, r2)) < 1e-2:
                continue
            dev = max(dev, triangle.angle_between(
                triangle.busemann_bisector(N, (0, 0), r1, r2),
                triangle.glogovskii_bisector(N, (0, 0), r1, r2, "norm")))
        mismatches += (dev <= 1e-8) != (name in RADON_LIBRARY)
    return float(mismatches), 0.0, "<="


# -- isoperimetry --------------------------------------------------------------------


@check("isoperimetry", "isoperimetric ratio at least 4 area(I)")
def _busemann_iso(rng):
    worst = -math.inf
    for _ in range(5):
        N = random_polygon_norm(rng)
        AI = N.iso_area()
        for _ in range(40):
            C = random_convex_polygon(rng)
            worst = max(worst, 4 * AI - iso.iso_ratio(N, C))
    return worst, 1e-9, "<="


@check("isoperimetry", "inequality slacks nonnegative")
def _slacks(rng):
    worst = -math.inf
    for _ in range(40):
        N, C = random_polygon_norm(rng), random_convex_polygon(rng)
        r = iso.inequality_report(N, C)
        scale = max(1.0, r.perimeter**2)
        worst = max(worst, max(-v / scale for v in r.inequality_slacks.values()))
    return worst, 1e-9, "<="


@check("isoperimetry", "zenodorus areas convex in n")
def _dowker(rng):
    N = square_norm()
    areas = [iso.zenodorus(N, n)[1] for n in range(3, 10)]
    return -min(areas[i - 1] + areas[i + 1] - 2 * areas[i] for i in range(1, len(areas) - 1)), 1e-6, "<="


@check("isoperimetry", "kepler partition")
def _kepler(rng):
    worst = 0.0
    for _ in range(10):
        N = random_polygon_norm(rng)
        k = int(rng.integers(3, 12))
        worst = max(worst, iso.kepler_check(N, k) / (N.isoperimetrix().area() / k))
    return worst, 1e-6, "<="


# -- projections ------------------------------------------------------------------------


@check("projections", "radial projection antinorm-nonexpansive")
def _radial_anti(rng):
    worst = 0.0
    for _ in range(5):
        N = random_polygon_norm(rng)
        worst = max(worst, proj.nonexpansive_scan(N, "radial", "antinorm", 4000, int(rng.integers(1 << 31))).max_ratio)
    return worst, 1 + 1e-9, "<="


@check("projections", "metric projection antinorm-nonexpansive")
def _metric_anti(rng):
    worst = 0.0
    for _ in range(3):
        N, S = random_polygon_norm(rng), random_convex_polygon(rng)
        worst = max(worst, proj.nonexpansive_scan(N, S, "antinorm", 4000, int(rng.integers(1 << 31))).max_ratio)
    return worst, 1 + 1e-9, "<="


@check("projections", "antinorm-nearest point on a line through o stays in B")
def _nearest_point(rng):
    worst = 0.0
    for _ in range(5):
        N = random_polygon_norm(rng)
        for _ in range(100):
            x, y = N.unit(rng.normal(size=2)), N.unit(rng.normal(size=2))
            if abs(symp(x, y)) < 1e-9:
                continue
            worst = max(worst, N.gauge(proj.nearest_on_line(N, x, (0, 0), y, "antinorm")))
    return worst, 1 + 1e-9, "<="


@check("projections", "radial norm-nonexpansive iff Radon")
def _radial_norm(rng):
    mismatches = 0
    for name in ("square", "octagon", "hexagon", "euclidean"):
        N = library()[name]
        r = proj.nonexpansive_scan(N, "radial", "norm", 4000, int(rng.integers(1 << 31)), adaptive=True)
        mismatches += (r.max_ratio <= 1 + 1e-9) != (name in RADON_LIBRARY)
    return float(mismatches), 0.0, "<="


# -- convexity --------------------------------------------------------------------------


@check("convexity", "d-segment contains ab and is degenerate exactly at vertex directions")
def _dsegment(rng):
    bad = 0
    for _ in range(10):
        N = random_polygon_norm(rng)
        for _ in range(20):
            a, b = rng.normal(size=(2, 2))
            D = proj.d_segment(N, a, b)
            bad += not all(D.contains(a + t * (b - a)) for t in np.linspace(0, 1, 5))
        for v in N.V[:2]:
            a = rng.normal(size=2)
            bad += proj.d_segment(N, a, a + v).area() > 1e-12
    return float(bad), 0.0, "<="


@check("convexity", "lassak duality")
def _lassak(rng):
    worst = 0.0
    for N in (square_norm(), PolygonNorm(radon.generator_regular_gon(6))):
        worst = max(worst, proj.lassak_duality_check(N, 5, int(rng.integers(1 << 31))).worst)
    return worst, 1e-3, "<="


@check("convexity", "antiballs are d-convex")
def _antiball(rng):
    fails = 0
    for name, N in library().items():
        if isinstance(N, PolygonNorm):
            fails += not proj.antiball_dconvex_check(N, 200, int(rng.integers(1 << 31)))
    return float(fails), 0.0, "<="


SUITES = tuple(dict.fromkeys(c.suite for c in CHECKS))


def run_suite(suite: str = "all", seed: int = 42) -> list[CheckResult]:
    """Run the named suite; each check gets its own stream spawned from ``seed``."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    chosen = [c for c in CHECKS if suite == "all" or c.suite == suite]
    streams = np.random.SeedSequence(seed).spawn(len(CHECKS))
    out = []
    for i, c in enumerate(CHECKS):
        if c not in chosen:
            continue
        t = time.perf_counter()
        value, threshold, relation = c.fn(np.random.default_rng(streams[i]))
        value = float(value)
        out.append(CheckResult(c.name, c.suite, _cmp(value, threshold, relation), value, float(threshold), relation, time.perf_counter() - t))
    return out


def format_table(results: list[CheckResult]) -> str:
    w = max(len(r.name) for r in results) if results else 10
    lines = [f"{'suite':<13} {'check':<{w}}  {'value':>12} {'':2} {'threshold':>10}  result"]
    for r in results:
        lines.append(f"{r.suite:<13} {r.name:<{w}}  {r.value:>12.4g} {r.relation:2} {r.threshold:>10.4g}  {'PASS' if r.ok else 'FAIL'}")
    return "\n".join(lines)
