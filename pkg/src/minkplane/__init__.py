"""Computational geometry of normed planes with a fixed symplectic form."""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    ConvexPolygon,
    Functional,
    GeometryError,
    SymmetricPolygon,
    polar,
    symp,
)
from .isoperimetry import ConvergenceError, inequality_report, zenodorus  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .norms import (  # noqa: E402
    EuclideanNorm,
    LpNorm,
    MixedNorm,
    Norm,
    PolygonNorm,
    is_normal,
    make_norm,
    normal_cone,
)
from .radon import QuadrantArc, is_radon, radon_construct, radonize  # noqa: E402
from .triangle import Triangle, fermat_torricelli, triangle_report  # noqa: E402

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "ConvexPolygon",
    "EuclideanNorm",
    "Functional",
    "GeometryError",
    "LpNorm",
    "MixedNorm",
    "Norm",
    "PolygonNorm",
    "QuadrantArc",
    "SymmetricPolygon",
    "Triangle",
    "fermat_torricelli",
    "inequality_report",
    "is_normal",
    "is_radon",
    "make_norm",
    "normal_cone",
    "polar",
    "radon_construct",
    "radonize",
    "symp",
    "triangle_report",
    "zenodorus",
]
