"""Command line entry point: ``minkplane <command> --scene scene.json``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import isoperimetry as iso
from . import projections as proj
from . import radon, svg, triangle
from .geometry import ConvexPolygon, GeometryError, symp
from .isoperimetry import ConvergenceError
from .norms import PolygonNorm, antinorm_involution_defect, is_normal
from .scene import Scene, SceneError, _point, _points, load

EXIT_OK, EXIT_VALIDATION, EXIT_CONVERGENCE, EXIT_PROPERTY = 0, 2, 3, 4

TOL_DEFAULTS = {
    "radon": radon.RADON_TOL,  # relative defect for the Radon test
    "normality": 1e-9,  # relative tolerance of the normality equality test
    "slack": 1e-9,  # inequality slacks, times scale
    "ratio": 1e-9,  # expansion ratios above 1
    "zenodorus": 1e-6,  # midpoint tangency
    "lassak": 1e-3,  # relative symmetric-difference area
}

SEED_RULE = "numpy SeedSequence(seed).spawn(k): one child per chunk of 256 trials, in order"

COMMANDS = (
    "antinorm", "isoperimetrix", "radon-check", "radon-construct", "radonize",
    "triangle", "bisectors", "fermat", "iso-report", "zenodorus", "girth",
    "angles", "projections", "convexity", "proptest",
)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


class Report:
    """Outputs plus checks; each check records value, threshold and relation."""

    def __init__(self, command: str):
        self.command = command
        self.outputs: dict = {}
        self.checks: list = []
        self.figure: svg.Figure | None = None

    def check(self, name, value, threshold, relation="<="):
        ok = value <= threshold if relation == "<=" else value >= threshold
        self.checks.append({"name": name, "value": value, "threshold": threshold, "relation": relation, "ok": bool(ok)})
        return ok

    def flag(self, name, ok: bool):
        self.checks.append({"name": name, "value": bool(ok), "threshold": True, "relation": "==", "ok": bool(ok)})


def _poly(N) -> PolygonNorm:
    return N if isinstance(N, PolygonNorm) else PolygonNorm(N.ball())


def _scale(P) -> float:
    return max(1.0, float(np.max(np.abs(np.asarray(P)))))


# -- commands -----------------------------------------------------------------------


def cmd_antinorm(sc: Scene, rep: Report, tol: dict, seed: int):
    N = sc.norm
    pts = sc.option("points", [[1, 0], [0, 1], [1, 1], [2, -1]])
    P = np.asarray(pts, dtype=float).reshape(-1, 2)
    rep.outputs["points"] = [
        {"x": p, "gauge": N.gauge(p), "antinorm": N.antinorm(p)} for p in P
    ]
    worst = max((abs(symp(x, y)) - N.gauge(x) * N.antinorm(y)) / max(N.gauge(x) * N.antinorm(y), 1e-300)
                for x in P for y in P if np.any(x) and np.any(y))
    rep.check("cauchy_schwarz_excess", worst, tol["normality"])
    _iso_outputs(sc, rep, tol)


def _iso_outputs(sc: Scene, rep: Report, tol: dict):
    N = sc.norm
    B, I = N.ball(), N.isoperimetrix()
    rep.outputs["ball"] = B.vertices
    rep.outputs["isoperimetrix"] = I.vertices
    rep.outputs["ball_area"] = N.ball_area()
    rep.outputs["iso_area"] = N.iso_area()
    if isinstance(N, PolygonNorm):
        rep.check("involution_defect", antinorm_involution_defect(N) / B.diameter(), tol["normality"])
    rep.figure = svg.ball_figure(B.vertices, I.vertices, "unit circle (solid) and isoperimetrix (dashed)")


def cmd_isoperimetrix(sc, rep, tol, seed):
    _iso_outputs(sc, rep, tol)


def cmd_radon_check(sc, rep, tol, seed):
    N = sc.norm
    r = radon.is_radon(N)
    is_r = r.relative_defect <= tol["radon"]
    rep.outputs.update(r.as_dict())
    rep.outputs["is_radon"] = is_r
    rep.outputs["radon_threshold"] = tol["radon"]
    if not is_r and isinstance(N, PolygonNorm) and r.asymmetry_eps >= 1e-9:
        rep.outputs["stability_ratio"] = radon.stability_ratio(N)
    B = N.ball()
    rep.figure = svg.ball_figure(B.vertices, r.lambda_ * N.isoperimetrix().vertices, f"B and lambda*I, lambda = {r.lambda_:.6g}")


def _arc(sc: Scene) -> radon.QuadrantArc:
    spec = sc.option("arc")
    if not isinstance(spec, dict) or "a" not in spec or "b" not in spec:
        raise SceneError("radon-construct needs options.arc with 'a', 'b' and optional 'interior'")
    interior = spec.get("interior", [])
    return radon.QuadrantArc(_point(spec["a"], "arc.a"), _point(spec["b"], "arc.b"),
                             _points(interior, "arc.interior") if len(interior) else np.zeros((0, 2)))


def _symmetric_normality_scan(N: PolygonNorm, trials: int, seed: int, tol: float) -> int:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(trials):
        x = N.unit(rng.normal(size=2))
        y = N.normal_cone(x).direction(float(rng.uniform()))
        bad += not is_normal(N, y, x, tol=tol)
    return bad


def cmd_radon_construct(sc, rep, tol, seed):
    B = radon.radon_construct(_arc(sc))
    N = PolygonNorm(B)
    rep.outputs["ball"] = B.vertices
    rep.outputs["half"] = B.vertices[: len(B.vertices) // 2]
    trials = int(sc.option("trials", 1000))
    rep.check("normality_asymmetric_pairs", _symmetric_normality_scan(N, trials, seed, tol["normality"]), 0)
    rep.check("relative_defect", radon.is_radon(N, False).relative_defect, tol["radon"])
    rep.figure = svg.quadrant_figure(B.vertices, "constructed Radon curve by quadrant")


def cmd_radonize(sc, rep, tol, seed):
    N = _poly(sc.norm)
    R = radon.radonize(N)
    rep.outputs["radon_pair"] = list(radon.radon_pair(N))
    rep.outputs["ball"] = R.vertices
    rep.outputs["multiplicative_distance"] = radon.multiplicative_distance(N, PolygonNorm(R))
    rep.check("relative_defect", radon.is_radon(R, False).relative_defect, tol["radon"])
    f = svg.ball_figure(N.B.vertices, R.vertices, "input ball (solid) and radonized ball (dashed)")
    rep.figure = f


def _triangle(sc: Scene) -> triangle.Triangle:
    return sc.body(triangle.Triangle, sc.option("body"))


def cmd_triangle(sc, rep, tol, seed):
    N, T = sc.norm, _triangle(sc)
    r = triangle.triangle_report(N, T, seed)
    rep.outputs.update(r.as_dict())
    worst = max(abs(r.area - 0.5 * b * e) / r.area for b, e in zip(r.beta, r.eta_anti))
    rep.check("area_identity_defect", worst, tol["slack"])
    rep.flag("reduced_crosscheck", r.reduced_crosscheck)
    rep.figure = svg.Figure("triangle, incenter and anti-incenter").polygon(T.ccw).points(
        [r.incenter, r.anti_incenter])


def cmd_bisectors(sc, rep, tol, seed):
    N = sc.norm
    fig = svg.Figure("bisectors")
    if any(isinstance(b, triangle.Triangle) for b in sc.bodies.values()):
        T = _triangle(sc)
        cb, sb = triangle.bisector_concurrency(N, T, "busemann")
        cg, sg = triangle.bisector_concurrency(N, T, "glogovskii")
        ai, _ = triangle.anti_incenter(N, T)
        ic, _ = triangle.incenter(N, T)
        rep.outputs["busemann_point"], rep.outputs["glogovskii_point"] = cb, cg
        rep.outputs["anti_incenter"], rep.outputs["incenter"] = ai, ic
        rep.check("busemann_spread", sb / T.scale, 1e-8)
        rep.check("busemann_to_anti_incenter", float(np.linalg.norm(cb - ai)) / T.scale, 1e-8)
        rep.check("glogovskii_to_incenter", float(np.linalg.norm(cg - ic)) / T.scale, 1e-8)
        fig.polygon(T.ccw)
        for c, v in ((cb, T.vertices), (cg, T.vertices)):
            for a in v:
                fig.polyline([a, c], svg.PALETTE[1])
        fig.points([cb, cg])
    p, q = sc.point_option("p"), sc.point_option("q")
    if p is not None and q is not None:
        count = int(sc.option("count", 201))
        S = proj.bisector_sample(N, p, q, count)
        rep.outputs["bisector_samples"] = S
        anti = proj.bisector_strip(N, p, q, "anti")
        norm = proj.bisector_strip(N, p, q, "norm")
        rep.outputs["strip_direction_anti"] = anti.direction
        rep.outputs["strip_direction_norm"] = norm.direction
        rep.flag("strip_anticircle", proj.strip_test(S, anti))
        rep.outputs["strip_norm_circle"] = proj.strip_test(S, norm)
        fig = svg.strip_figure(S, p, q, anti.direction,
                               0.5 * float(N.antinorm(q - p)) * N.isoperimetrix().vertices,
                               "bisector inside the anticircle strip")
    if not sc.bodies and (p is None or q is None):
        raise SceneError("bisectors needs a triangle body or options p and q")
    rep.figure = fig


def cmd_fermat(sc, rep, tol, seed):
    N, T = sc.norm, _triangle(sc)
    x, val = triangle.fermat_torricelli(N, T)
    rep.outputs["point"], rep.outputs["value"] = x, val
    c = triangle.verify_ft_characterization(N, T, x)
    rep.outputs["characterization"] = {"ok": c.ok, "trivial": c.trivial, "defect": c.defect}
    rep.flag("characterization", c.ok)
    rep.figure = svg.Figure("Fermat-Torricelli point").polygon(T.ccw).points([x])


def cmd_iso_report(sc, rep, tol, seed):
    N = sc.norm
    C = sc.body(ConvexPolygon, sc.option("body"))
    r = iso.inequality_report(N, C)
    rep.outputs.update(r.as_dict())
    scale = max(1.0, r.perimeter**2)
    for k, v in r.inequality_slacks.items():
        rep.check(f"slack_{k}", v, -tol["slack"] * scale, ">=")
    I = N.isoperimetrix().vertices
    fit = iso.inscribed_anticircle(N, C)
    rep.figure = svg.Figure("body with inscribed anticircle").polygon(C.vertices).polygon(
        fit.center + fit.radius * I, svg.PALETTE[1], dashed=True)


def cmd_zenodorus(sc, rep, tol, seed):
    N = sc.norm
    n = int(sc.option("n", 4))
    P, a = iso.zenodorus(N, n, tol=tol["zenodorus"], max_iter=int(sc.option("max_iter", 10_000)))
    rep.outputs["n"], rep.outputs["polygon"], rep.outputs["area"] = n, P.vertices, a
    rep.check("midpoint_deviation", iso.midpoint_deviation(N, P), tol["zenodorus"])
    rep.figure = svg.Figure(f"least-area {n}-gon about the anticircle").polygon(P.vertices).polygon(
        N.isoperimetrix().vertices, svg.PALETTE[1], dashed=True)


def cmd_girth(sc, rep, tol, seed):
    rep.outputs.update(iso.girth_report(_poly(sc.norm)).as_dict())


def cmd_angles(sc, rep, tol, seed):
    N = _poly(sc.norm)
    t0, t1 = float(sc.option("theta0", -math.pi / 4)), float(sc.option("theta1", math.pi / 4))
    rep.outputs.update(iso.angular_measures(N, t0, t1).as_dict())
    k = int(sc.option("kepler_k", 6))
    dev = iso.kepler_check(N, k)
    rep.outputs["kepler_k"], rep.outputs["kepler_spread"] = k, dev
    if radon.is_radon(N, False).relative_defect <= tol["radon"]:
        rep.check("kepler_spread_relative", dev / (N.isoperimetrix().area() / k), 1e-6)


def cmd_projections(sc, rep, tol, seed):
    N = sc.norm
    trials = int(sc.option("trials", 10_000))
    lim = 1.0 + tol["ratio"]
    r = proj.nonexpansive_scan(N, "radial", "antinorm", trials, seed)
    rep.outputs["radial_antinorm"] = r.as_dict()
    rep.check("radial_antinorm_ratio", r.max_ratio, lim)
    r = proj.nonexpansive_scan(N, "radial", "norm", trials, seed, adaptive=True)
    rep.outputs["radial_norm"] = r.as_dict()
    rep.outputs["radial_norm_nonexpansive"] = r.max_ratio <= lim
    bodies = [b for b in sc.bodies.values() if isinstance(b, ConvexPolygon)]
    for i, S in enumerate(bodies):
        r = proj.nonexpansive_scan(N, S, "antinorm", trials, seed + i + 1)
        rep.outputs[f"metric_antinorm_{i}"] = r.as_dict()
        rep.check(f"metric_antinorm_ratio_{i}", r.max_ratio, lim)
    x = sc.point_option("x")
    if x is not None:
        q = sc.point_option("line_point", [0.0, 0.0])
        d = sc.point_option("line_direction", [1.0, 0.0])
        rep.outputs["nearest_norm"] = proj.nearest_on_line(N, x, q, d, "norm")
        rep.outputs["nearest_antinorm"] = proj.nearest_on_line(N, x, q, d, "antinorm")
    rep.figure = svg.ball_figure(N.ball().vertices, N.isoperimetrix().vertices, "projection target B")


def cmd_convexity(sc, rep, tol, seed):
    N = sc.norm
    a, b = sc.point_option("a", [0.0, 0.0]), sc.point_option("b", [2.0, 0.0])
    P = _poly(N)
    D = proj.d_segment(P, a, b)
    rep.outputs["d_segment"] = [p for p in D.pieces]
    rep.outputs["d_segment_area"] = D.area()
    pairs = int(sc.option("pairs", 20))
    L = proj.lassak_duality_check(P, pairs, seed, tol["lassak"])
    rep.outputs["lassak"] = L.as_dict()
    rep.check("lassak_worst", L.worst, tol["lassak"])
    rep.flag("antiball_dconvex", proj.antiball_dconvex_check(P, int(sc.option("dconvex_pairs", 1000)), seed))
    fig = svg.Figure("d-segment and antinorm ball hull")
    for piece in D.pieces:
        fig.polygon(piece)
    fig.polygon(proj.ball_hull_polygon(P.anti(), np.array([a, b])), svg.PALETTE[1], dashed=True)
    rep.figure = fig


HANDLERS = {
    "antinorm": cmd_antinorm,
    "isoperimetrix": cmd_isoperimetrix,
    "radon-check": cmd_radon_check,
    "radon-construct": cmd_radon_construct,
    "radonize": cmd_radonize,
    "triangle": cmd_triangle,
    "bisectors": cmd_bisectors,
    "fermat": cmd_fermat,
    "iso-report": cmd_iso_report,
    "zenodorus": cmd_zenodorus,
    "girth": cmd_girth,
    "angles": cmd_angles,
    "projections": cmd_projections,
    "convexity": cmd_convexity,
}


# -- driver ---------------------------------------------------------------------


def _parse_tol(items) -> dict:
    tol = dict(TOL_DEFAULTS)
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            key, sep, val = part.partition("=")
            key = key.strip()
            if not sep or key not in tol:
                raise SceneError(f"--tol expects key=value with key in {', '.join(sorted(tol))}; got {part!r}")
            try:
                v = float(val)
            except ValueError:
                raise SceneError(f"--tol {key}: not a number: {val!r}") from None
            if not math.isfinite(v) or v < 0:
                raise SceneError(f"--tol {key}: must be finite and nonnegative")
            tol[key] = v
    return tol


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minkplane", description="Computations in normed planes with a fixed area form.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--scene", type=Path, help="scene JSON file (not needed for proptest)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    ap.add_argument("--svg", type=Path, help="write an SVG figure")
    ap.add_argument("--tol", action="append", metavar="KEY=VALUE", help="override a tolerance; repeatable")
    ap.add_argument("--suite", default="all", help="proptest suite name")
    ap.add_argument("--version", action="version", version=f"minkplane {__version__}")
    return ap


def _emit(doc: dict, out: Path | None):
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _run_proptest(args) -> int:
    from .proptest import format_table, run_suite

    try:
        results = run_suite(args.suite, args.seed)
    except ValueError as e:
        print(f"minkplane: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    print(format_table(results), file=sys.stderr if args.out is None else sys.stdout)
    ok = all(r.ok for r in results)
    doc = {
        "command": "proptest", "version": __version__, "seed": args.seed, "seed_rule": SEED_RULE,
        "suite": args.suite, "ok": ok,
        "checks": [{k: v for k, v in r.as_dict().items() if k != "seconds"} for r in results],
    }
    if args.out is not None:
        _emit(doc, args.out)
    if args.svg is not None:
        args.svg.write_text(svg.Figure(f"proptest {args.suite}: {'pass' if ok else 'fail'}").render())
    return EXIT_OK if ok else EXIT_PROPERTY


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "proptest":
        return _run_proptest(args)
    try:
        tol = _parse_tol(args.tol)
        if args.scene is None:
            raise SceneError("--scene is required")
        sc = load(args.scene)
        rep = Report(args.command)
        HANDLERS[args.command](sc, rep, tol, args.seed)
    except (SceneError, GeometryError) as e:
        print(f"minkplane: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as e:
        print(f"minkplane: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    doc = {
        "command": args.command,
        "version": __version__,
        "seed": args.seed,
        "seed_rule": SEED_RULE,
        "inputs": sc.raw,
        "tolerances": tol,
        "outputs": rep.outputs,
        "checks": rep.checks,
        "ok": all(c["ok"] for c in rep.checks),
    }
    _emit(doc, args.out)
    if args.svg is not None:
        fig = rep.figure or svg.Figure(args.command)
        args.svg.write_text(fig.render())
    return EXIT_OK if doc["ok"] else EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
