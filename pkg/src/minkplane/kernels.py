"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``MINKPLANE_PURE=1`` to force the fallback (used by the benchmark and by
the tests that compare both implementations).
"""

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("MINKPLANE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback

poly_gauge = _impl.poly_gauge
poly_gauge_many = _impl.poly_gauge_many
poly_antinorm = _impl.poly_antinorm
poly_antinorm_many = _impl.poly_antinorm_many
seg_min_gauge = _impl.seg_min_gauge
line_min_gauge = _impl.line_min_gauge
inside_convex = _impl.inside_convex
polygon_nearest = _impl.polygon_nearest
polygon_nearest_many = _impl.polygon_nearest_many

__all__ = [
    "BACKEND",
    "poly_gauge",
    "poly_gauge_many",
    "poly_antinorm",
    "poly_antinorm_many",
    "seg_min_gauge",
    "line_min_gauge",
    "inside_convex",
    "polygon_nearest",
    "polygon_nearest_many",
]
