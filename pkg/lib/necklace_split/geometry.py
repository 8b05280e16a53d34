"""Inscribed quadrilaterals and equal-length loop splits.

Every finder here is the splitter applied to features of a closed curve:
- find_parallelogram: coordinates plus a window ramp, four alternating cuts
- find_rectangle: adds |gamma|^2, which turns the parallelogram into a rectangle
- find_balanced_rectangle: coordinates, |gamma|^2 and arc length
- find_anchored_parallelogram: three cuts after re-starting the loop at a vertex
- split_loop / split_loop_colored: coordinates plus arc length with r parts

On a closed curve gamma(0) = gamma(1), so the two-part alternating balance of
a coordinate reads gamma(t1) + gamma(t3) = gamma(t2) + gamma(t4).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np

from .curves import Curve, build_curve, point_curve, rotate_curve
from .errors import ContractError, DomainError, NonConvergenceError
from .features import (
    ConstantFeature,
    CoordinateFeature,
    IdentityFeature,
    SquaredNormFeature,
    WindowRampFeature,
)
from .models import ColorConstraint, InscribedQuadrilateral, LoopSplit, SolverOptions
from .splitter import (
    DEFAULT_TOLERANCE,
    SplitProblem,
    solve_alternating_4,
    solve_colored,
    solve_hobby_rice,
    solve_split,
)

logger = logging.getLogger(__name__)

DEGENERATE_FRACTION = 1e-6


# ---------------------------------------------------------------------------
# Quadrilateral tests
# ---------------------------------------------------------------------------


def parallelogram_residual(a, b, c, d) -> float:
    """|A + C - B - D|; zero when the diagonals bisect each other."""
    return float(np.linalg.norm(np.asarray(a) + np.asarray(c) - np.asarray(b) - np.asarray(d)))


def rectangle_spread(a, b, c, d) -> float:
    """Spread of the squared distances to the diagonal midpoint."""
    pts = np.array([a, b, c, d], dtype=float)
    centered = pts - pts.mean(axis=0)
    norms = np.einsum("ij,ij->i", centered, centered)
    return float(norms.max() - norms.min())


def is_rectangle(a, b, c, d, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """A parallelogram is a rectangle iff its vertices are equidistant from its center.

    Raises ContractError when ABCD is not a parallelogram within tolerance.
    """
    off = parallelogram_residual(a, b, c, d)
    if off > tolerance:
        raise ContractError(f"ABCD is not a parallelogram: |A+C-B-D| = {off:.3e}")
    return rectangle_spread(a, b, c, d) <= tolerance


def is_collinear(points: np.ndarray, tolerance: float) -> bool:
    """True when every point is within tolerance of the best-fit line."""
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    along = centered @ vt[0]
    off_line = centered - np.outer(along, vt[0])
    return float(np.max(np.linalg.norm(off_line, axis=1))) <= tolerance


def is_degenerate(points: np.ndarray, diameter: float) -> bool:
    """Two vertices closer than a millionth of the curve's extent."""
    gaps = [
        np.linalg.norm(points[i] - points[j]) for i in range(4) for j in range(i + 1, 4)
    ]
    return bool(min(gaps) < DEGENERATE_FRACTION * diameter)


def parameters_coincide(ts: Sequence[float]) -> bool:
    """t1 = t2 or t2 = t3 up to DEGENERATE_FRACTION.

    On an embedded loop a parallelogram with t1 = t2 also has t3 = t4, so these
    two gaps decide whether the vertex parameters are distinct.
    """
    return bool(min(ts[1] - ts[0], ts[2] - ts[1]) < DEGENERATE_FRACTION)


def cyclic_arcs(ts: Sequence[float], length: float) -> list[float]:
    """Arc lengths t1->t2, t2->t3, t3->t4 and t4->t1 around the loop."""
    t = list(ts)
    return [
        (t[1] - t[0]) * length,
        (t[2] - t[1]) * length,
        (t[3] - t[2]) * length,
        (1.0 - t[3] + t[0]) * length,
    ]


def _quadrilateral(
    curve: Curve,
    ts: Sequence[float],
    tolerance: float,
    window: tuple[float, float] | None = None,
    with_arcs: bool = False,
) -> InscribedQuadrilateral:
    vertices = curve.evaluate_many(np.asarray(ts, dtype=float))
    a, b, c, d = vertices
    residual = parallelogram_residual(a, b, c, d)
    spread = rectangle_spread(a, b, c, d)
    hit = None
    if window is not None:
        x, y = window
        hit = next((i for i, t in enumerate(ts, start=1) if x < t < y), None)
    return InscribedQuadrilateral(
        t=[float(t) for t in ts],
        vertices=vertices.tolist(),
        residual=residual,
        rectangle=residual <= tolerance and spread <= tolerance,
        collinear=is_collinear(vertices, tolerance),
        degenerate=parameters_coincide(ts) or is_degenerate(vertices, curve.diameter()),
        rectangle_residual=spread,
        window=window,
        window_hit=hit,
        arc_lengths=cyclic_arcs(ts, curve.length) if with_arcs else None,
    )


def _require_closed(curve: Curve) -> None:
    if not curve.closed:
        raise ContractError("inscribed shapes and loop splits need a closed curve")


def _require_planar(curve: Curve, what: str) -> None:
    if curve.dimension != 2:
        raise DomainError(f"{what} needs a planar curve, got dimension {curve.dimension}")


# ---------------------------------------------------------------------------
# Inscribed parallelograms and rectangles
# ---------------------------------------------------------------------------


def find_parallelogram(
    curve: Curve,
    window: tuple[float, float],
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions | None = None,
) -> InscribedQuadrilateral:
    """Inscribed parallelogram with a vertex parameter inside (x, y).

    The window ramp forces a vertex into the window: the ramp balance
    2f(t1) + 2f(t3) + 1 = 2f(t2) + 2f(t4) has no solution with all values
    in {0, 1}. Collinear parallelograms are reported, not rejected. The
    degenerate flag is the non-degeneracy check: it is set when t1 = t2 or
    t2 = t3 within DEGENERATE_FRACTION, or when two vertices are closer than
    DEGENERATE_FRACTION times the curve's diameter.
    """
    _require_closed(curve)
    if curve.dimension not in (2, 3):
        raise DomainError(f"parallelograms need d in (2, 3), got {curve.dimension}")
    x, y = window
    features = [CoordinateFeature(curve, i) for i in range(curve.dimension)]
    features.append(WindowRampFeature(x, y))
    while len(features) < 4:
        features.append(ConstantFeature(0.0))

    logger.info("geometry: parallelogram search in window (%g, %g)", x, y)
    config, _ = solve_alternating_4(
        features, tolerance / math.sqrt(curve.dimension), options
    )
    quad = _quadrilateral(curve, config.cuts, tolerance, window=(x, y))
    if quad.window_hit is None:
        logger.warning("geometry: no vertex parameter strictly inside (%g, %g)", x, y)
    if quad.degenerate:
        logger.warning("geometry: degenerate parallelogram at t=%s", quad.t)
    return quad


def find_rectangle(
    curve: Curve,
    window: tuple[float, float],
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions | None = None,
) -> InscribedQuadrilateral:
    """Inscribed rectangle of a planar loop with a vertex parameter inside (x, y).

    Balancing g = |gamma|^2 on top of the coordinates makes the four vertices
    equidistant from the diagonal midpoint.
    """
    _require_closed(curve)
    _require_planar(curve, "rectangles")
    x, y = window
    features = [
        CoordinateFeature(curve, 0),
        CoordinateFeature(curve, 1),
        WindowRampFeature(x, y),
        SquaredNormFeature(curve),
    ]
    logger.info("geometry: rectangle search in window (%g, %g)", x, y)
    config, report = solve_alternating_4(features, tolerance / 10.0, options)
    quad = _quadrilateral(curve, config.cuts, tolerance, window=(x, y))
    if not quad.rectangle:
        raise NonConvergenceError(
            f"quadrilateral misses the rectangle test (residual {quad.residual:.3e}, "
            f"spread {quad.rectangle_residual:.3e})",
            best=config,
            report=report,
        )
    return quad


def find_balanced_rectangle(
    curve: Curve,
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions | None = None,
) -> InscribedQuadrilateral:
    """Inscribed rectangle whose opposite arcs have equal total length.

    The returned arc lengths satisfy l1 + l3 = l2 + l4 = L/2.
    """
    _require_closed(curve)
    _require_planar(curve, "rectangles")
    features = [
        CoordinateFeature(curve, 0),
        CoordinateFeature(curve, 1),
        SquaredNormFeature(curve),
        IdentityFeature(),
    ]
    logger.info("geometry: balanced rectangle search")
    scale = max(1.0, curve.length)
    config, report = solve_alternating_4(features, tolerance / (10.0 * scale), options)
    quad = _quadrilateral(curve, config.cuts, tolerance, with_arcs=True)
    arcs = quad.arc_lengths or []
    imbalance = abs(arcs[0] + arcs[2] - arcs[1] - arcs[3])
    if not quad.rectangle or imbalance > tolerance * curve.length:
        raise NonConvergenceError(
            f"balanced rectangle missed tolerance (spread {quad.rectangle_residual:.3e}, "
            f"arc imbalance {imbalance:.3e})",
            best=config,
            report=report,
        )
    return quad


def find_anchored_parallelogram(
    curve: Curve,
    anchor: float,
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions | None = None,
) -> InscribedQuadrilateral:
    """Inscribed parallelogram with gamma(anchor) as a vertex.

    Re-start the loop at the anchor and place three alternating cuts a <= b <= c
    balancing both coordinates and arc length: gamma(a) + gamma(c) =
    gamma(0) + gamma(b) and a + (c - b) = 1/2. The arc balance keeps the
    vertices apart.
    """
    _require_closed(curve)
    _require_planar(curve, "anchored parallelograms")
    if not 0.0 <= anchor <= 1.0:
        raise DomainError(f"anchor {anchor!r} outside [0, 1]")
    rotated = rotate_curve(curve, anchor)
    features = [CoordinateFeature(rotated, 0), CoordinateFeature(rotated, 1), IdentityFeature()]
    scale = max(1.0, curve.length)
    logger.info("geometry: parallelogram anchored at t=%g", anchor)
    config, _ = solve_hobby_rice(features, tolerance / (2.0 * scale), options)
    ts = sorted(((anchor + u) % 1.0) for u in (0.0, *config.cuts))
    quad = _quadrilateral(curve, ts, tolerance, with_arcs=True)
    hit = min(range(4), key=lambda i: abs(ts[i] - anchor % 1.0)) + 1
    return quad.model_copy(update={"window_hit": hit})


# ---------------------------------------------------------------------------
# Loop splitting
# ---------------------------------------------------------------------------


def reassemble(
    curve: Curve, cuts: Sequence[float], group: Sequence[int], tolerance: float = 1e-9
) -> Curve:
    """Translate the pieces of a group head to tail, in index order.

    Interval j is gamma restricted to [t_{j-1}, t_j] (1-based). The result is
    closed when the group's displacement is within tolerance * L of zero.
    Empty intervals (repeated cuts) are skipped; a group with only empty
    intervals gives the zero-length loop at gamma(t_{j-1}) of its first index.
    """
    points = [0.0, *cuts, 1.0]
    count = len(points) - 1
    if not group:
        raise ContractError("group must name at least one interval")
    for j in group:
        if not 1 <= j <= count:
            raise ContractError(f"interval index {j} outside 1..{count}")

    nonempty = [j for j in sorted(group) if points[j] > points[j - 1]]
    if not nonempty:
        return point_curve(curve.evaluate(points[min(group) - 1]))

    pieces: list[np.ndarray] = []
    end: np.ndarray | None = None
    for j in nonempty:
        piece = curve.sub_polyline(points[j - 1], points[j])
        if end is not None:
            piece = piece + (end - piece[0])
            piece = piece[1:]
        pieces.append(piece)
        end = piece[-1]
    path = np.vstack(pieces)
    closed = bool(np.linalg.norm(path[-1] - path[0]) <= tolerance * curve.length)
    if closed:
        path[-1] = path[0]
    return build_curve(path, closed=closed)


def _loop_features(curve: Curve) -> list:
    return [CoordinateFeature(curve, i) for i in range(curve.dimension)] + [IdentityFeature()]


def _loop_split(
    curve: Curve,
    cuts: list[float],
    groups: list[list[int]],
    tolerance: float,
    colors: ColorConstraint | None = None,
    guaranteed: bool = True,
) -> LoopSplit:
    points = np.array([0.0, *cuts, 1.0])
    values = curve.evaluate_many(points)
    steps = np.diff(values, axis=0)
    widths = np.diff(points) * curve.length
    displacements = [steps[[j - 1 for j in g]].sum(axis=0).tolist() for g in groups]
    lengths = [float(widths[[j - 1 for j in g]].sum()) for g in groups]
    loops = [reassemble(curve, cuts, g, tolerance) for g in groups]
    return LoopSplit(
        cuts=cuts,
        groups=groups,
        displacements=displacements,
        lengths=lengths,
        loops=loops,
        colors=colors.blocks if colors is not None else None,
        existence_guaranteed=guaranteed,
    )


def _loop_problem(
    curve: Curve, r: int, tolerance: float, colors: ColorConstraint | None
) -> SplitProblem:
    _require_closed(curve)
    if r < 2:
        raise DomainError(f"r must be >= 2, got {r}")
    # coordinate deviations are displacements; the identity deviation is length / L
    solve_tol = tolerance * min(1.0, curve.length) / math.sqrt(curve.dimension)
    return SplitProblem(
        features=_loop_features(curve), r=r, colors=colors, tolerance=solve_tol
    )


def split_loop(
    curve: Curve,
    r: int,
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions | None = None,
) -> LoopSplit:
    """Cut a closed curve with (r-1)(d+1) cuts into r groups of pieces.

    Each group has zero displacement, so its pieces translate into a loop,
    and all r loops have length L/r.
    """
    problem = _loop_problem(curve, r, tolerance, None)
    logger.info("geometry: splitting loop of length %g into %d", curve.length, r)
    config, _ = solve_split(problem, options)
    return _loop_split(curve, config.cuts, config.parts, tolerance)


def split_loop_colored(
    curve: Curve,
    r: int,
    colors: ColorConstraint,
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions | None = None,
) -> LoopSplit:
    """split_loop where every group takes at most one piece of each color."""
    problem = _loop_problem(curve, r, tolerance, colors)
    logger.info("geometry: colored loop split into %d with %d blocks", r, len(colors.blocks))
    config, report = solve_colored(problem, options)
    return _loop_split(
        curve,
        config.cuts,
        config.parts,
        tolerance,
        colors=colors,
        guaranteed=report.existence_guaranteed,
    )
