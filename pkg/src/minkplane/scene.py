"""Scene files: a norm descriptor, named bodies and options, read from JSON."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import ConvexPolygon, GeometryError
from .norms import Norm, make_norm
from .triangle import Triangle


class SceneError(ValueError):
    """Invalid scene; the message carries line and column when known."""


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _finite_float(text):
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(f"number {text} overflows to infinity")
    return x


def _position(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def loads(text: str, name: str = "<scene>"):
    try:
        return json.loads(text, parse_constant=_reject_constant, parse_float=_finite_float)
    except json.JSONDecodeError as e:
        raise SceneError(f"{name}:{e.lineno}:{e.colno}: {e.msg}") from None
    except ValueError as e:
        # number hooks have no position; locate the first bad literal ourselves
        pos = _first_bad_number(text)
        if pos is None:
            raise SceneError(f"{name}: {e}") from None
        line, col = _position(text, pos)
        raise SceneError(f"{name}:{line}:{col}: {e}") from None


def _first_bad_number(text: str):
    in_str = False
    i = 0
    while i < len(text):
        c = text[i]
        if in_str:
            if c == "\\":
                i += 2
                continue
            if c == '"':
                in_str = False
        elif c == '"':
            in_str = True
        else:
            m = re.match(r"-?(NaN|Infinity)|-?\d+(\.\d+)?([eE][-+]?\d+)?", text[i:])
            if m:
                tok = m.group(0)
                if m.group(1) or not math.isfinite(float(tok)):
                    return i
                i += len(tok)
                continue
        i += 1
    return None


def _points(obj, what: str, count: int | None = None) -> np.ndarray:
    try:
        P = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise SceneError(f"{what}: expected a list of [x, y] pairs") from None
    if P.ndim != 2 or P.shape[1] != 2 or (count is not None and len(P) != count):
        n = "" if count is None else f"{count} "
        raise SceneError(f"{what}: expected a list of {n}[x, y] pairs")
    return P


def _point(obj, what: str) -> np.ndarray:
    return _points([obj], what, 1)[0]


@dataclass
class Scene:
    norm: Norm
    norm_spec: dict
    bodies: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def body(self, kind: type, name: str | None = None):
        """Named body, or the first body of the requested kind."""
        if name is not None:
            if name not in self.bodies:
                raise SceneError(f"unknown body {name!r}")
            b = self.bodies[name]
            if not isinstance(b, kind):
                raise SceneError(f"body {name!r} is not a {kind.__name__}")
            return b
        for b in self.bodies.values():
            if isinstance(b, kind):
                return b
        raise SceneError(f"scene has no {kind.__name__} body")

    def option(self, key: str, default=None):
        return self.options.get(key, default)

    def point_option(self, key: str, default=None) -> np.ndarray | None:
        v = self.options.get(key)
        if v is None:
            return None if default is None else np.asarray(default, dtype=float)
        return _point(v, f"options.{key}")


def _body(name: str, spec) -> object:
    if not isinstance(spec, dict) or "type" not in spec:
        raise SceneError(f"body {name!r}: expected an object with a 'type' key")
    kind = spec["type"]
    try:
        if kind == "polygon":
            return ConvexPolygon(_points(spec.get("vertices"), f"body {name!r} vertices"))
        if kind == "triangle":
            return Triangle.of(_points(spec.get("vertices"), f"body {name!r} vertices", 3))
        if kind == "points":
            return _points(spec.get("points"), f"body {name!r} points")
    except GeometryError as e:
        raise SceneError(f"body {name!r}: {e}") from None
    raise SceneError(f"body {name!r}: unknown type {kind!r}")


def from_dict(data, name: str = "<scene>") -> Scene:
    if not isinstance(data, dict):
        raise SceneError(f"{name}: top level must be an object")
    if "norm" not in data:
        raise SceneError(f"{name}: missing 'norm'")
    spec = data["norm"]
    if isinstance(spec, dict) and spec.get("type") == "polygon":
        _points(spec.get("vertices"), "norm vertices")
    try:
        norm = make_norm(spec)
    except (GeometryError, TypeError, ValueError) as e:
        raise SceneError(f"{name}: norm: {e}") from None
    bodies_raw = data.get("bodies", {})
    if not isinstance(bodies_raw, dict):
        raise SceneError(f"{name}: 'bodies' must be an object")
    bodies = {k: _body(k, v) for k, v in bodies_raw.items()}
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise SceneError(f"{name}: 'options' must be an object")
    return Scene(norm, norm.describe(), bodies, options, data)


def load(path) -> Scene:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SceneError(f"{path}: {e.strerror}") from None
    return from_dict(loads(text, str(path)), str(path))
