"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both implementations are imported directly, so the result does not depend
on ``MINKPLANE_PURE``.
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from minkplane import _fallback
from minkplane.geometry import ConvexPolygon, SymmetricPolygon
from minkplane.norms import PolygonNorm

try:
    from minkplane import _kernels
except ImportError:
    _kernels = None


def _setup(m: int = 64, n_points: int = 2000, seed: int = 0):
    th = np.arange(m) * (2 * math.pi / m)
    B = SymmetricPolygon(np.column_stack([np.cos(th), np.sin(th)]) * (1 + 0.2 * np.cos(2 * th))[:, None])
    N = PolygonNorm(B)
    rng = np.random.default_rng(seed)
    S = ConvexPolygon(np.array([[-1.0, -1.0], [1.0, -1.2], [1.5, 0.5], [0.0, 1.3], [-1.2, 0.4]]))
    P = rng.normal(size=(n_points, 2)) * 3
    return N, np.ascontiguousarray(S.vertices), P


def cases(N, S, P):
    F, V = N.F, N.V
    p = P[:200]
    return {
        "poly_gauge_many": lambda k: k.poly_gauge_many(F, P),
        "poly_antinorm_many": lambda k: k.poly_antinorm_many(V, P),
        "seg_min_gauge x200": lambda k: [k.seg_min_gauge(F, V, x, y, -1.0, 0.3, 2.0, 1.0) for x, y in p],
        "line_min_gauge x200": lambda k: [k.line_min_gauge(F, V, x, y, 0.0, 0.0, 1.0, 0.2) for x, y in p],
        "polygon_nearest_many": lambda k: k.polygon_nearest_many(F, V, S, P),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    N, S, P = _setup()
    print(f"{'kernel':<24} {'numpy ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in cases(N, S, P).items():
        t_py = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:<24} {t_py:>10.3f} {'n/a':>10} {'':>8}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<24} {t_py:>10.3f} {t_cy:>10.3f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
