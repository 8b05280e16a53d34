"""Feature functions [0,1] -> R fed into the splitter.

Each class implements the Feature protocol. Curve-backed features evaluate
the curve once per call for a whole array of parameters.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any

import numpy as np

from .curves import Curve
from .errors import DomainError


class _FeatureBase:
    """Scalar evaluation and info in terms of evaluate_many."""

    kind: str = "feature"
    tabulated: bool = False

    def evaluate(self, t: float) -> float:
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"parameter {t!r} outside [0, 1]")
        return float(self.evaluate_many(np.array([t], dtype=float))[0])

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def params(self) -> dict[str, Any]:
        return {}

    def info(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": self.params()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params()})"


class IdentityFeature(_FeatureBase):
    """f(t) = t; turns arc-length parameters into lengths."""

    kind = "identity"

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        return np.array(ts, dtype=float)


class ConstantFeature(_FeatureBase):
    """f(t) = c. Its increments vanish, so it never constrains a split."""

    kind = "constant"

    def __init__(self, value: float = 0.0) -> None:
        self.value = float(value)

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        return np.full(np.shape(ts), self.value)

    def params(self) -> dict[str, Any]:
        return {"value": self.value}


class PolynomialFeature(_FeatureBase):
    """f(t) = c0 + c1 t + c2 t^2 + ..."""

    kind = "polynomial"

    def __init__(self, coefficients: Sequence[float]) -> None:
        if len(coefficients) == 0:
            raise DomainError("polynomial needs at least one coefficient")
        self.coefficients = [float(c) for c in coefficients]

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        return np.polynomial.polynomial.polyval(np.asarray(ts, dtype=float), self.coefficients)

    def params(self) -> dict[str, Any]:
        return {"coefficients": self.coefficients}


class CoordinateFeature(_FeatureBase):
    """f(t) = gamma_i(t), the i-th coordinate of a curve."""

    kind = "coordinate"

    def __init__(self, curve: Curve, index: int) -> None:
        if not 0 <= index < curve.dimension:
            raise DomainError(
                f"coordinate index {index} outside [0, {curve.dimension}) for this curve"
            )
        self.curve = curve
        self.index = int(index)

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        return self.curve.evaluate_many(ts)[:, self.index]

    def params(self) -> dict[str, Any]:
        return {"index": self.index}


class SquaredNormFeature(_FeatureBase):
    """g(t) = |gamma(t)|^2; balancing it turns parallelograms into rectangles."""

    kind = "squared-norm"

    def __init__(self, curve: Curve) -> None:
        self.curve = curve

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        p = self.curve.evaluate_many(ts)
        return np.einsum("ij,ij->i", p, p)


class WindowRampFeature(_FeatureBase):
    """0 on [0,x], 1 on [y,1], linear in between.

    An alternating balance 2f(t1)+2f(t3)+1 = 2f(t2)+2f(t4) has no solution
    with every f(t_i) in {0, 1}, which forces a parameter into (x, y).
    """

    kind = "window-ramp"

    def __init__(self, x: float, y: float) -> None:
        if not 0.0 <= x < y <= 1.0:
            raise DomainError(f"window needs 0 <= x < y <= 1, got x={x!r}, y={y!r}")
        self.x = float(x)
        self.y = float(y)

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        return np.clip((np.asarray(ts, dtype=float) - self.x) / (self.y - self.x), 0.0, 1.0)

    def params(self) -> dict[str, Any]:
        return {"x": self.x, "y": self.y}


class TabulatedFeature(_FeatureBase):
    """Piecewise-linear interpolation of (knot, value) pairs covering [0, 1]."""

    kind = "tabulated"
    tabulated = True

    def __init__(self, knots: Sequence[float], values: Sequence[float]) -> None:
        k = np.asarray(knots, dtype=float)
        v = np.asarray(values, dtype=float)
        if k.ndim != 1 or k.shape != v.shape or len(k) < 2:
            raise DomainError("table needs matching knots and values, at least two each")
        if k[0] != 0.0 or k[-1] != 1.0:
            raise DomainError("table knots must start at 0 and end at 1")
        if np.any(np.diff(k) <= 0.0):
            raise DomainError("table knots must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise DomainError("table values must be finite")
        self.knots = k
        self.values = v

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        return np.interp(np.asarray(ts, dtype=float), self.knots, self.values)

    def params(self) -> dict[str, Any]:
        return {"knots": self.knots.tolist(), "values": self.values.tolist()}


class CumulativeMeasureFeature(TabulatedFeature):
    """Cumulative function of a measure with constant density on equal bins.

    ``masses[i]`` is the mass of bin [i/N, (i+1)/N]. A bead necklace is the
    case of 0/1 masses, one feature per bead type.
    """

    kind = "cumulative-measure"

    def __init__(self, masses: Sequence[float]) -> None:
        w = np.asarray(masses, dtype=float)
        if w.ndim != 1 or len(w) == 0:
            raise DomainError("cumulative measure needs at least one bin mass")
        self.masses = w
        super().__init__(
            np.linspace(0.0, 1.0, len(w) + 1), np.concatenate([[0.0], np.cumsum(w)])
        )

    def params(self) -> dict[str, Any]:
        return {"masses": self.masses.tolist()}


class RestrictedFeature(_FeatureBase):
    """A feature restricted to a union of intervals, glued into one function.

    The intervals [a_j, b_j] are laid end to end and rescaled to [0, 1] by
    total length. On the j-th piece the value is f(x) - f(a_j) plus the
    increments of all earlier pieces, so the result is continuous and its
    total increment equals the sum of the pieces' increments.
    """

    kind = "restricted"

    def __init__(self, base: Any, intervals: Sequence[tuple[float, float]]) -> None:
        if len(intervals) == 0:
            raise DomainError("restriction needs at least one interval")
        self.base = base
        self.starts = np.array([a for a, _ in intervals], dtype=float)
        self.ends = np.array([b for _, b in intervals], dtype=float)
        widths = self.ends - self.starts
        if np.any(widths < 0.0):
            raise DomainError("restriction intervals must have a <= b")
        self.offsets = np.concatenate([[0.0], np.cumsum(widths)])
        self.total = float(self.offsets[-1])
        if self.total <= 0.0:
            raise DomainError("restriction intervals have zero total length")
        increments = base.evaluate_many(self.ends) - base.evaluate_many(self.starts)
        self.base_at_start = base.evaluate_many(self.starts)
        self.carried = np.concatenate([[0.0], np.cumsum(increments)])[:-1]

    @property
    def tabulated(self) -> bool:  # type: ignore[override]
        return bool(getattr(self.base, "tabulated", False))

    def locate(self, us: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Piece index and original parameter for compressed parameters ``us``."""
        pos = np.asarray(us, dtype=float) * self.total
        piece = np.clip(
            np.searchsorted(self.offsets, pos, side="right") - 1, 0, len(self.starts) - 1
        )
        x = np.minimum(self.starts[piece] + (pos - self.offsets[piece]), self.ends[piece])
        return piece, x

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        piece, x = self.locate(ts)
        return self.base.evaluate_many(x) - self.base_at_start[piece] + self.carried[piece]

    def params(self) -> dict[str, Any]:
        return {
            "base": self.base.info(),
            "intervals": [[float(a), float(b)] for a, b in zip(self.starts, self.ends)],
        }


def discrete_necklace_features(beads: Sequence[str]) -> tuple[list[str], list[CumulativeMeasureFeature]]:
    """One cumulative bead-count feature per bead type, types in sorted order."""
    types = sorted(set(beads))
    features = [
        CumulativeMeasureFeature([1.0 if bead == kind else 0.0 for bead in beads])
        for kind in types
    ]
    return types, features
