"""Feature protocol: the uniform interface every splitter input implements.

A feature is a continuous function [0,1] -> R. Coordinates of a curve, the
identity, squared norms, window ramps, cumulative measures and tabulated
tables all implement this protocol, so the splitter never needs to know
where the numbers come from.
"""

from __future__ import annotations

from typing import Any, Protocol, runtime_checkable

import numpy as np


@runtime_checkable
class Feature(Protocol):
    """Uniform interface for evaluable functions on [0, 1]."""

    @property
    def kind(self) -> str:
        """Kind identifier: 'coordinate', 'identity', 'window-ramp', ..."""
        ...

    @property
    def tabulated(self) -> bool:
        """True when the values come from interpolated tables."""
        ...

    def evaluate(self, t: float) -> float:
        """Value at a single parameter t in [0, 1]."""
        ...

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        """Values at an array of parameters, same shape as ``ts``."""
        ...

    def info(self) -> dict[str, Any]:
        """Return kind and parameters for display and serialization."""
        ...
