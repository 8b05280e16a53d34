"""FeatureRegistry: maps feature kind names to factories.

Problem files name features by kind ('coordinate', 'window-ramp', ...).
The registry validates the name, checks whether the kind needs a curve,
and builds the feature. New kinds register under a fresh name.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from .curves import Curve
from .errors import DomainError
from .features import (
    ConstantFeature,
    CoordinateFeature,
    CumulativeMeasureFeature,
    IdentityFeature,
    PolynomialFeature,
    SquaredNormFeature,
    TabulatedFeature,
    WindowRampFeature,
)
from .protocol import Feature

logger = logging.getLogger(__name__)

FeatureFactory = Callable[[dict[str, Any], Curve | None], Feature]


@dataclass
class FeatureKind:
    """A registered feature kind with its factory."""

    name: str
    factory: FeatureFactory
    needs_curve: bool = False
    description: str = ""


class FeatureRegistry:
    """In-memory registry mapping kind names to feature factories."""

    def __init__(self) -> None:
        self._kinds: dict[str, FeatureKind] = {}

    def register(
        self,
        name: str,
        factory: FeatureFactory,
        needs_curve: bool = False,
        description: str = "",
    ) -> None:
        """Register a feature kind. Raises ValueError on duplicate name."""
        if name in self._kinds:
            raise ValueError(f"Feature kind '{name}' already exists")
        self._kinds[name] = FeatureKind(
            name=name, factory=factory, needs_curve=needs_curve, description=description
        )

    def get(self, name: str) -> FeatureKind | None:
        return self._kinds.get(name)

    def create(
        self, name: str, params: dict[str, Any] | None = None, curve: Curve | None = None
    ) -> Feature:
        """Build a feature of the named kind.

        Raises DomainError for unknown kinds, missing curves, and bad params.
        """
        kind = self._kinds.get(name)
        if kind is None:
            raise DomainError(f"unknown feature kind '{name}'. Available: {self.kinds()}")
        if kind.needs_curve and curve is None:
            raise DomainError(f"feature kind '{name}' needs a curve")
        try:
            return kind.factory(params or {}, curve)
        except (KeyError, TypeError) as exc:
            raise DomainError(f"bad parameters for feature '{name}': {exc}") from exc

    def kinds(self) -> list[str]:
        return sorted(self._kinds)

    def list_kinds(self) -> list[dict[str, Any]]:
        return [
            {"name": k.name, "needs_curve": k.needs_curve, "description": k.description}
            for k in sorted(self._kinds.values(), key=lambda k: k.name)
        ]


def _default() -> FeatureRegistry:
    registry = FeatureRegistry()
    registry.register(
        "identity", lambda p, c: IdentityFeature(), description="f(t) = t"
    )
    registry.register(
        "constant",
        lambda p, c: ConstantFeature(float(p.get("value", 0.0))),
        description="f(t) = value",
    )
    registry.register(
        "polynomial",
        lambda p, c: PolynomialFeature(p["coefficients"]),
        description="f(t) = sum of coefficients[i] * t^i",
    )
    registry.register(
        "coordinate",
        lambda p, c: CoordinateFeature(c, int(p["index"])),  # type: ignore[arg-type]
        needs_curve=True,
        description="i-th coordinate of the curve",
    )
    registry.register(
        "squared-norm",
        lambda p, c: SquaredNormFeature(c),  # type: ignore[arg-type]
        needs_curve=True,
        description="|gamma(t)|^2",
    )
    registry.register(
        "window-ramp",
        lambda p, c: WindowRampFeature(float(p["x"]), float(p["y"])),
        description="0 on [0,x], 1 on [y,1], linear between",
    )
    registry.register(
        "cumulative-measure",
        lambda p, c: CumulativeMeasureFeature(p["masses"]),
        description="cumulative function of equal-bin masses",
    )
    registry.register(
        "tabulated",
        lambda p, c: TabulatedFeature(p["knots"], p["values"]),
        description="piecewise-linear table on [0,1]",
    )
    return registry


_DEFAULT_REGISTRY: FeatureRegistry | None = None


def default_registry() -> FeatureRegistry:
    """The process-wide registry holding the builtin kinds."""
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        _DEFAULT_REGISTRY = _default()
        logger.debug("registry: created default registry with %d kinds", len(_DEFAULT_REGISTRY.kinds()))
    return _DEFAULT_REGISTRY


def make_feature(
    kind: str, params: dict[str, Any] | None = None, curve: Curve | None = None
) -> Feature:
    """Build a feature from the default registry."""
    return default_registry().create(kind, params, curve)
