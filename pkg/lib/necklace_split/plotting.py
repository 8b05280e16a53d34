"""SVG figures of curves, loop splits and inscribed quadrilaterals.

Curves in 3-space are drawn by their projection onto the xy plane.
"""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .curves import Curve
from .models import InscribedQuadrilateral, LoopSplit

logger = logging.getLogger(__name__)

STYLE = {
    "svg.hashsalt": "necklace-split",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.linewidth": 0.6,
    "lines.linewidth": 1.2,
    "savefig.bbox": "tight",
}


def _plane(points: np.ndarray) -> np.ndarray:
    if points.shape[1] >= 2:
        return points[:, :2]
    return np.column_stack([points[:, 0], np.zeros(len(points))])


def _new_figure(curve: Curve, title: str) -> tuple[Figure, object]:
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot(1, 1, 1)
    outline = _plane(curve.points)
    ax.plot(outline[:, 0], outline[:, 1], color="0.75", linewidth=0.8, zorder=1)
    ax.set_aspect("equal", adjustable="datalim")
    suffix = " (xy projection)" if curve.dimension > 2 else ""
    ax.set_title(title + suffix)
    return fig, ax


def _save(fig: Figure, path: str | Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    logger.info("plotting: wrote %s", path)


def plot_loop_split(curve: Curve, split: LoopSplit, path: str | Path) -> None:
    """The curve with each group's pieces in its own color and the cuts marked."""
    with matplotlib.rc_context(STYLE):
        fig, ax = _new_figure(curve, f"loop split into {len(split.groups)}")
        points = [0.0, *split.cuts, 1.0]
        colors = matplotlib.colormaps["tab10"]
        for i, group in enumerate(split.groups):
            for j in group:
                piece = _plane(curve.sub_polyline(points[j - 1], points[j]))
                ax.plot(
                    piece[:, 0],
                    piece[:, 1],
                    color=colors(i % 10),
                    zorder=2,
                    label=f"group {i + 1}" if j == group[0] else None,
                )
        marks = _plane(curve.evaluate_many(np.asarray(split.cuts, dtype=float)))
        ax.scatter(marks[:, 0], marks[:, 1], s=14, color="black", zorder=3)
        ax.legend(loc="best", frameon=False)
        _save(fig, path)


def plot_quadrilateral(curve: Curve, quad: InscribedQuadrilateral, path: str | Path) -> None:
    """The curve with the inscribed quadrilateral and its diagonals."""
    kind = "rectangle" if quad.rectangle else "parallelogram"
    with matplotlib.rc_context(STYLE):
        fig, ax = _new_figure(curve, f"inscribed {kind}")
        v = _plane(np.asarray(quad.vertices, dtype=float))
        ring = np.vstack([v, v[:1]])
        ax.plot(ring[:, 0], ring[:, 1], color="tab:blue", zorder=2)
        for a, b in ((0, 2), (1, 3)):
            ax.plot(v[[a, b], 0], v[[a, b], 1], color="tab:blue", linestyle=":", zorder=2)
        ax.scatter(v[:, 0], v[:, 1], s=16, color="tab:red", zorder=3)
        if quad.window is not None:
            window = _plane(curve.sub_polyline(*quad.window))
            ax.plot(window[:, 0], window[:, 1], color="tab:orange", linewidth=2.4, zorder=1.5)
        _save(fig, path)
