"""Polyline curves with arc-length parametrization over [0, 1].

A Curve is built once from sample points: consecutive duplicates are dropped,
closed curves get their closing segment, and the cumulative chord-length
table is computed. Evaluation at t walks to arc length t*L by binary search
in that table and interpolates linearly, so it is exact for polylines.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.spatial.distance import pdist

from .errors import ContractError, DomainError, InvalidCurveError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Curve:
    """An immutable polyline in R^d, parametrized by normalized arc length."""

    points: np.ndarray
    closed: bool
    cumulative: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])

    @property
    def length(self) -> float:
        return float(self.cumulative[-1])

    def evaluate(self, t: float) -> np.ndarray:
        """Point at arc length t*L along the curve."""
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"parameter {t!r} outside [0, 1]")
        if self.length == 0.0:
            return self.points[0].copy()
        s = t * self.length
        cum = self.cumulative
        i = int(np.searchsorted(cum, s, side="right")) - 1
        i = min(max(i, 0), len(cum) - 2)
        frac = min(max((s - cum[i]) / (cum[i + 1] - cum[i]), 0.0), 1.0)
        # (1-a)p + aq keeps the endpoints bit-exact at a = 0 and a = 1
        return (1.0 - frac) * self.points[i] + frac * self.points[i + 1]

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        """Vectorized evaluate; returns an array of shape (len(ts), d)."""
        ts = np.asarray(ts, dtype=float)
        if not np.all((ts >= 0.0) & (ts <= 1.0)):
            raise DomainError("parameters must lie in [0, 1]")
        if self.length == 0.0:
            return np.repeat(self.points[:1], len(ts), axis=0)
        s = ts * self.length
        cum = self.cumulative
        i = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(cum) - 2)
        frac = np.clip((s - cum[i]) / (cum[i + 1] - cum[i]), 0.0, 1.0)[:, None]
        return (1.0 - frac) * self.points[i] + frac * self.points[i + 1]

    def sub_polyline(self, s: float, t: float) -> np.ndarray:
        """Vertices of the restriction to [s, t], endpoints included."""
        if not 0.0 <= s <= t <= 1.0:
            raise DomainError(f"need 0 <= s <= t <= 1, got s={s!r}, t={t!r}")
        lo, hi = s * self.length, t * self.length
        inner = self.points[(self.cumulative > lo) & (self.cumulative < hi)]
        return np.vstack([self.evaluate(s), inner, self.evaluate(t)])

    def diameter(self) -> float:
        """Largest distance between two vertices, which is the diameter of a polyline."""
        return float(pdist(self.points).max())

    def to_dict(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension,
            "closed": self.closed,
            "points": self.points.tolist(),
        }


def build_curve(points: Sequence[Sequence[float]] | np.ndarray, closed: bool) -> Curve:
    """Build a polyline from sample points.

    Raises InvalidCurveError for fewer than two points, mismatched
    dimensions, non-finite coordinates, or zero total length.
    """
    try:
        arr = np.array(points, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidCurveError(f"points must be d-vectors of one dimension: {exc}") from exc
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise InvalidCurveError("points must be a list of d-vectors with d >= 1")
    if len(arr) < 2:
        raise InvalidCurveError(f"need at least 2 points, got {len(arr)}")
    if not np.all(np.isfinite(arr)):
        raise InvalidCurveError("points must have finite coordinates")

    keep = np.ones(len(arr), dtype=bool)
    keep[1:] = np.any(arr[1:] != arr[:-1], axis=1)
    arr = arr[keep]
    if closed and len(arr) > 1 and np.any(arr[0] != arr[-1]):
        arr = np.vstack([arr, arr[:1]])
    if len(arr) < 2:
        raise InvalidCurveError("curve has zero total length")

    segments = np.linalg.norm(np.diff(arr, axis=0), axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(segments)])
    if not cumulative[-1] > 0.0:
        raise InvalidCurveError("curve has zero total length")

    arr.setflags(write=False)
    cumulative.setflags(write=False)
    return Curve(points=arr, closed=closed, cumulative=cumulative)


def point_curve(point: Sequence[float] | np.ndarray) -> Curve:
    """Closed curve of zero length sitting at one point.

    build_curve rejects zero length; this is what a loop made only of empty
    pieces reassembles into.
    """
    p = np.asarray(point, dtype=float).reshape(1, -1)
    arr = np.vstack([p, p])
    cumulative = np.zeros(2)
    arr.setflags(write=False)
    cumulative.setflags(write=False)
    return Curve(points=arr, closed=True, cumulative=cumulative)


def rotate_curve(curve: Curve, s: float) -> Curve:
    """Re-start a closed curve at parameter s; new t' = (t - s) mod 1."""
    if not curve.closed:
        raise ContractError("only closed curves can be re-started")
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"start parameter {s!r} outside [0, 1]")
    if s in (0.0, 1.0):
        return curve
    start = curve.evaluate(s)
    at = s * curve.length
    after = curve.points[curve.cumulative > at]
    before = curve.points[1:][curve.cumulative[1:] < at]
    return build_curve(np.vstack([start, after, before, start]), closed=True)


def transform_curve(
    curve: Curve, matrix: Sequence[Sequence[float]] | np.ndarray, offset: Sequence[float]
) -> Curve:
    """Apply x -> Mx + b to every sample point."""
    m = np.asarray(matrix, dtype=float)
    b = np.asarray(offset, dtype=float)
    d = curve.dimension
    if m.shape != (d, d) or b.shape != (d,):
        raise ContractError(f"transform must be ({d}x{d}, {d}) for a {d}-dimensional curve")
    return build_curve(curve.points @ m.T + b, closed=curve.closed)


def self_intersections(curve: Curve, limit: int = 1) -> list[tuple[int, int]]:
    """Pairs of non-adjacent segments that cross properly (planar curves only).

    Stops after ``limit`` pairs. Touching and collinear overlaps are not reported.
    """
    if curve.dimension != 2:
        return []
    p = curve.points
    a, b = p[:-1], p[1:]
    count = len(a)
    found: list[tuple[int, int]] = []

    def orient(o: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return (u[..., 0] - o[..., 0]) * (v[..., 1] - o[..., 1]) - (
            u[..., 1] - o[..., 1]
        ) * (v[..., 0] - o[..., 0])

    for i in range(count - 2):
        j = np.arange(i + 2, count)
        if curve.closed and i == 0:
            j = j[j != count - 1]
        if len(j) == 0:
            continue
        d1 = orient(a[i], b[i], a[j])
        d2 = orient(a[i], b[i], b[j])
        d3 = orient(a[j], b[j], a[i])
        d4 = orient(a[j], b[j], b[i])
        hits = j[(d1 * d2 < 0) & (d3 * d4 < 0)]
        for k in hits[: limit - len(found)]:
            found.append((i, int(k)))
        if len(found) >= limit:
            break
    return found


def warn_if_self_intersecting(curve: Curve, max_segments: int = 4096) -> bool:
    """Log a warning for crossing planar polylines; returns True if one was found."""
    if curve.dimension != 2 or len(curve.points) - 1 > max_segments:
        return False
    crossings = self_intersections(curve, limit=1)
    if crossings:
        logger.warning(
            "curves: polyline is self-intersecting (segments %d and %d); "
            "accepted, but inscribed-shape guarantees assume a simple loop",
            *crossings[0],
        )
        return True
    return False


# ---------------------------------------------------------------------------
# Builtin curves
# ---------------------------------------------------------------------------


def _edges(corners: np.ndarray, samples: int) -> np.ndarray:
    """Subdivide each edge of a closed polygon evenly, about samples points total."""
    per_edge = max(1, samples // len(corners))
    nxt = np.roll(corners, -1, axis=0)
    steps = np.arange(per_edge)[:, None] / per_edge
    return np.vstack([c + steps * (e - c) for c, e in zip(corners, nxt)])


def _circle(
    samples: int,
    r: float = 1.0,
    center: Sequence[float] = (0.0, 0.0),
    radius: float | None = None,
) -> np.ndarray:
    if radius is not None:
        r = radius
    if not r > 0.0:
        raise DomainError(f"circle radius must be positive, got {r!r}")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    return np.column_stack([np.cos(theta), np.sin(theta)]) * r + np.asarray(center)


def _ellipse(samples: int, a: float = 2.0, b: float = 1.0) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(samples) / samples
    return np.column_stack([a * np.cos(theta), b * np.sin(theta)])


def _square(samples: int, side: float = 1.0) -> np.ndarray:
    corners = np.array([[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]])
    return _edges(corners, samples)


def _triangle(
    samples: int, vertices: Sequence[Sequence[float]] = ((0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2))
) -> np.ndarray:
    corners = np.asarray(vertices, dtype=float)
    if corners.shape != (3, 2):
        raise DomainError("triangle needs three planar vertices")
    return _edges(corners, samples)


def _trefoil3d(samples: int, scale: float = 1.0) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(samples) / samples
    return scale * np.column_stack(
        [
            np.sin(theta) + 2.0 * np.sin(2.0 * theta),
            np.cos(theta) - 2.0 * np.cos(2.0 * theta),
            -np.sin(3.0 * theta),
        ]
    )


_BUILTINS: dict[str, tuple[Callable[..., np.ndarray], int]] = {
    "circle": (_circle, 8),
    "ellipse": (_ellipse, 8),
    "square": (_square, 4),
    "triangle": (_triangle, 8),
    "trefoil3d": (_trefoil3d, 8),
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def builtin_curve(name: str, params: dict[str, Any] | None = None, samples: int = 1024) -> Curve:
    """Closed polyline approximating a named curve.

    Known names: circle(r, center), ellipse(a, b), square(side),
    triangle(vertices), trefoil3d(scale). The circle also takes radius as an
    alias for r. Square accepts as few as 4 samples (its corners); the others
    need at least 8.
    """
    if name not in _BUILTINS:
        raise DomainError(f"unknown builtin curve '{name}'. Available: {builtin_names()}")
    builder, min_samples = _BUILTINS[name]
    if samples < min_samples:
        raise DomainError(f"{name} needs at least {min_samples} samples, got {samples}")
    try:
        points = builder(samples, **(params or {}))
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name}: {exc}") from exc
    return build_curve(points, closed=True)
