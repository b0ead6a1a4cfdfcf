"""Deterministic SVG 1.1 figures in a y-up frame."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

MARGIN = 0.05
PALETTE = ("#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#566573")


def _num(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@dataclass
class _Item:
    tag: str
    points: np.ndarray
    stroke: str
    fill: str
    label: str
    dashed: bool


@dataclass
class Figure:
    caption: str = ""
    items: list = field(default_factory=list)

    def _add(self, tag, pts, stroke, fill, label, dashed):
        P = np.asarray(pts, dtype=float).reshape(-1, 2)
        if len(P):
            self.items.append(_Item(tag, P, stroke, fill, label, dashed))
        return self

    def polygon(self, pts, stroke=PALETTE[0], fill="none", label="", dashed=False):
        return self._add("polygon", pts, stroke, fill, label, dashed)

    def polyline(self, pts, stroke=PALETTE[1], label="", dashed=False):
        return self._add("polyline", pts, stroke, "none", label, dashed)

    def points(self, pts, fill=PALETTE[2], label=""):
        return self._add("points", pts, "none", fill, label, False)

    def bounds(self):
        if not self.items:
            return np.array([-1.0, -1.0]), np.array([1.0, 1.0])
        A = np.vstack([it.points for it in self.items])
        return A.min(axis=0), A.max(axis=0)

    def render(self) -> str:
        lo, hi = self.bounds()
        span = np.maximum(hi - lo, 1e-9)
        diam = float(max(span))
        pad = MARGIN * span + (MARGIN * diam if not self.items else 0.0)
        x0, x1 = lo[0] - pad[0], hi[0] + pad[0]
        y0, y1 = lo[1] - pad[1], hi[1] + pad[1]
        cap_h = 0.06 * diam if self.caption else 0.0
        width, height = x1 - x0, y1 - y0 + cap_h
        sw = 0.004 * diam
        r = 0.012 * diam
        # y-up: plot (x, y) at (x, -y); the viewBox covers the flipped box
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="{_num(x0)} {_num(-y1)} {_num(width)} {_num(height)}">',
        ]
        for it in self.items:
            coords = " ".join(f"{_num(x)},{_num(-y)}" for x, y in it.points)
            title = f"<title>{escape(it.label)}</title>" if it.label else ""
            dash = f' stroke-dasharray="{_num(3 * sw)},{_num(2 * sw)}"' if it.dashed else ""
            if it.tag == "points":
                out.append(f"<g fill=\"{it.fill}\">{title}")
                for x, y in it.points:
                    out.append(f'<circle cx="{_num(x)}" cy="{_num(-y)}" r="{_num(r)}"/>')
                out.append("</g>")
            else:
                out.append(
                    f'<{it.tag} points="{coords}" fill="{it.fill}" stroke="{it.stroke}" '
                    f'stroke-width="{_num(sw)}"{dash}>{title}</{it.tag}>'
                )
        if self.caption:
            out.append(
                f'<text x="{_num(x0 + 0.5 * width)}" y="{_num(-y0 + 0.75 * cap_h)}" '
                f'font-size="{_num(0.5 * cap_h)}" text-anchor="middle" '
                f'font-family="sans-serif">{escape(self.caption)}</text>'
            )
        out.append("</svg>")
        return "\n".join(out) + "\n"


# -- figure builders ---------------------------------------------------------------


def ball_figure(B, I, caption="unit circle and anticircle") -> Figure:
    f = Figure(caption)
    f.polygon(B, PALETTE[0], label="unit ball")
    f.polygon(I, PALETTE[1], label="isoperimetrix", dashed=True)
    f.points([[0.0, 0.0]], PALETTE[5], label="origin")
    return f


def normality_figure(B, x, y, caption="normality x ⊣ y") -> Figure:
    """Ball, the ray to ``x`` and the tangent line through ``x`` in direction ``y``."""
    f = Figure(caption)
    f.polygon(B, PALETTE[0], label="unit ball")
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    s = float(np.max(np.abs(B))) * 1.5
    u = y / max(float(np.linalg.norm(y)), 1e-300)
    f.polyline([[0.0, 0.0], x], PALETTE[5], label="x")
    f.polyline([x - s * u, x + s * u], PALETTE[1], label="tangent direction y")
    f.points([x], PALETTE[2], label="x")
    return f


def quadrant_figure(vertices, caption="radon construction") -> Figure:
    """Closed curve coloured by the quadrant of each edge midpoint."""
    f = Figure(caption)
    V = np.asarray(vertices, dtype=float).reshape(-1, 2)
    n = len(V)
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        m = 0.5 * (a + b)
        q = int(math.floor(math.atan2(m[1], m[0]) % (2 * math.pi) / (math.pi / 2))) % 4
        f.polyline([a, b], PALETTE[q], label=f"Q{q + 1}")
    return f


def strip_figure(samples, p, q, direction, ball=None, caption="bisector and strip") -> Figure:
    f = Figure(caption)
    S = np.asarray(samples, dtype=float).reshape(-1, 2)
    p, q, v = (np.asarray(t, dtype=float) for t in (p, q, direction))
    ext = max(float(np.max(np.abs(S - 0.5 * (p + q)))) if len(S) else 1.0, 1.0)
    v = v / float(np.linalg.norm(v)) * ext
    f.polyline([p - v, p + v], PALETTE[1], label="strip line through p", dashed=True)
    f.polyline([q - v, q + v], PALETTE[1], label="strip line through q", dashed=True)
    if ball is not None:
        f.polygon(np.asarray(ball) + 0.5 * (p + q), PALETTE[3], label="circle with diameter pq")
    if len(S):
        f.polyline(S, PALETTE[0], label="bisector")
    f.points([p, q], PALETTE[2], label="p, q")
    return f
