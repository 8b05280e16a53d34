"""Independent checks of solver output.

The checks here recompute everything from scalar feature and curve
evaluations. Nothing is shared with the solver's vectorized residuals, so
a bug in one path shows up as a disagreement with the other.

- check_split / check_loop_split: re-derive balance, displacement and length
- brute_force_discrete_split: exhaustive fair division of a bead string
- round_to_beads: map continuous cuts to bead boundaries
- density_probe / density_probe_async: run a finder over a grid of windows
"""

from __future__ import annotations

import asyncio
import itertools
import logging
import math
from collections import Counter
from collections.abc import Sequence
from typing import Literal

import numpy as np

from .curves import Curve
from .errors import ContractError, DomainError, ResourceError, SplitterError
from .geometry import find_parallelogram, find_rectangle
from .models import (
    DiscreteDivision,
    InscribedQuadrilateral,
    LoopSplit,
    SolverOptions,
    SplitConfiguration,
    VerificationReport,
)
from .protocol import Feature

logger = logging.getLogger(__name__)

TELESCOPING_TOLERANCE = 1e-12
MAX_BRUTE_FORCE_BEADS = 24

Finder = Literal["parallelogram", "rectangle"]


def _check_cuts(report: VerificationReport, cuts: Sequence[float]) -> bool:
    """Monotonicity and range of the cuts; False when they cannot be evaluated."""
    drop = max((a - b for a, b in zip(cuts, cuts[1:])), default=0.0)
    report.add("monotone", max(drop, 0.0), 0.0)
    outside = max((max(-t, t - 1.0, 0.0) for t in cuts), default=0.0)
    report.add("range", outside, 0.0)
    return outside == 0.0


def check_split(
    features: Sequence[Feature], config: SplitConfiguration, tolerance: float
) -> VerificationReport:
    """Recompute the part sums of every feature by direct summation."""
    report = VerificationReport()
    if not _check_cuts(report, config.cuts):
        return report
    points = [0.0, *config.cuts, 1.0]
    for k, feature in enumerate(features, start=1):
        values = [feature.evaluate(t) for t in points]
        sums = [0.0] * config.r
        for j in range(1, len(points)):
            sums[config.labels[j - 1]] += values[j] - values[j - 1]
        mean = sum(sums) / config.r
        report.add(f"balance[{k}]", max(abs(s - mean) for s in sums), tolerance)
        total = values[-1] - values[0]
        scale = max(1.0, max(abs(v) for v in values))
        report.add(
            f"telescoping[{k}]", abs(sum(sums) - total), TELESCOPING_TOLERANCE * scale
        )
    return report


def _chord_length(polyline: Sequence[np.ndarray]) -> float:
    return float(sum(math.dist(p, q) for p, q in zip(polyline, polyline[1:])))


def _head_to_tail(curve: Curve, points: Sequence[float], group: Sequence[int]) -> list[np.ndarray]:
    """Vertices of a group's pieces translated so each starts where the last ended."""
    path: list[np.ndarray] = []
    for j in sorted(group):
        piece = curve.sub_polyline(points[j - 1], points[j])
        if path:
            shift = path[-1] - piece[0]
            path.extend(p + shift for p in piece[1:])
        else:
            path.extend(piece)
    return path


def check_loop_split(curve: Curve, split: LoopSplit, tolerance: float) -> VerificationReport:
    """Recompute displacements, lengths, closure and colors of a loop split."""
    report = VerificationReport()
    if not _check_cuts(report, split.cuts):
        return report
    points = [0.0, *split.cuts, 1.0]
    count = len(points) - 1
    r = len(split.groups)
    scale = tolerance * curve.length

    indices = sorted(j for g in split.groups for j in g)
    report.add("partition", 0.0, 0.0, passed=indices == list(range(1, count + 1)))
    if indices != list(range(1, count + 1)):
        return report

    for i, group in enumerate(split.groups, start=1):
        displacement = np.zeros(curve.dimension)
        for j in group:
            displacement += curve.evaluate(points[j]) - curve.evaluate(points[j - 1])
        path = _head_to_tail(curve, points, group)
        length = _chord_length(path)
        report.add(f"displacement[{i}]", float(np.linalg.norm(displacement)), scale)
        report.add(f"length[{i}]", abs(length - curve.length / r), scale)
        if i <= len(split.lengths):
            report.add(f"reported-length[{i}]", abs(length - split.lengths[i - 1]), scale)
        report.add(f"closure[{i}]", math.dist(path[0], path[-1]), scale)

    if split.colors is not None:
        label_of = {j: i for i, g in enumerate(split.groups) for j in g}
        clashes = sum(
            len(block) - len({label_of[j] for j in block}) for block in split.colors
        )
        report.add("rainbow", float(clashes), 0.0)
    return report


# ---------------------------------------------------------------------------
# Discrete necklaces
# ---------------------------------------------------------------------------


def is_fair_division(division: DiscreteDivision, beads: Sequence[str]) -> bool:
    """Every thief holds exactly 1/r of every bead type."""
    totals = Counter(beads)
    shares = division.shares(list(beads))
    return all(
        share.get(kind, 0) * division.r == count for share in shares for kind, count in totals.items()
    )


def brute_force_discrete_split(beads: Sequence[str], r: int) -> DiscreteDivision | None:
    """Fair division with the fewest cuts, by exhaustive search.

    Tries 0, 1, ... (r-1)m cuts; for each placement assigns segments to
    thieves depth first with capacity pruning. Returns None when no division
    exists within (r-1)m cuts.
    """
    beads = list(beads)
    if len(beads) > MAX_BRUTE_FORCE_BEADS:
        raise ResourceError(
            f"{len(beads)} beads exceed the exhaustive limit of {MAX_BRUTE_FORCE_BEADS}"
        )
    if r < 2:
        raise DomainError(f"r must be >= 2, got {r}")
    totals = Counter(beads)
    kinds = sorted(totals)
    uneven = [k for k in kinds if totals[k] % r]
    if uneven:
        raise DomainError(f"bead counts of {uneven} are not divisible by r = {r}")
    quota = [totals[k] // r for k in kinds]
    bound = (r - 1) * len(kinds)

    def counts(lo: int, hi: int) -> list[int]:
        seg = Counter(beads[lo:hi])
        return [seg.get(k, 0) for k in kinds]

    def assign(segments: list[list[int]]) -> list[int] | None:
        held = [[0] * len(kinds) for _ in range(r)]
        labels: list[int] = []

        def place(s: int, opened: int) -> bool:
            if s == len(segments):
                return held == [quota] * r
            for thief in range(min(opened + 1, r)):
                if all(h + c <= q for h, c, q in zip(held[thief], segments[s], quota)):
                    held[thief] = [h + c for h, c in zip(held[thief], segments[s])]
                    labels.append(thief)
                    if place(s + 1, max(opened, thief + 1)):
                        return True
                    labels.pop()
                    held[thief] = [h - c for h, c in zip(held[thief], segments[s])]
            return False

        return labels if place(0, 0) else None

    size = len(beads)
    for c in range(bound + 1):
        for cuts in itertools.combinations(range(1, size), c):
            bounds = [0, *cuts, size]
            labels = assign([counts(lo, hi) for lo, hi in zip(bounds, bounds[1:])])
            if labels is not None:
                logger.debug("verify: %d beads split fairly with %d cuts", size, c)
                return DiscreteDivision(cuts=list(cuts), labels=labels, r=r)
    return None


def round_to_beads(config: SplitConfiguration, beads: Sequence[str]) -> DiscreteDivision | None:
    """Map continuous cuts to bead boundaries and keep the labeling.

    Each cut goes to the nearest boundary (ties to the left). If that is not
    fair, the other floor/ceil choices are tried; None when none is fair.
    """
    beads = list(beads)
    size = len(beads)
    scaled = [t * size for t in config.cuts]
    nearest = [math.ceil(x - 0.5) for x in scaled]
    options = [
        [p, *(q for q in (math.floor(x), math.ceil(x)) if q != p)]
        for p, x in zip(nearest, scaled)
    ]
    for combo in itertools.product(*options):
        positions = [min(max(p, 0), size) for p in combo]
        if any(b < a for a, b in zip(positions, positions[1:])):
            continue
        division = DiscreteDivision(cuts=positions, labels=list(config.labels), r=config.r)
        if is_fair_division(division, beads):
            return division
    return None


# ---------------------------------------------------------------------------
# Window density
# ---------------------------------------------------------------------------


def window_grid(count: int) -> list[tuple[float, float]]:
    """``count`` disjoint windows of equal width covering [0, 1]."""
    return [(i / count, (i + 1) / count) for i in range(count)]


def _check_disjoint(windows: Sequence[tuple[float, float]]) -> None:
    ordered = sorted(windows)
    for (_, y), (x, _) in zip(ordered, ordered[1:]):
        if x < y:
            raise ContractError(f"windows overlap near {x!r}")


def _probe(
    curve: Curve,
    window: tuple[float, float],
    finder: Finder,
    tolerance: float,
    options: SolverOptions | None,
) -> InscribedQuadrilateral | SplitterError:
    find = find_rectangle if finder == "rectangle" else find_parallelogram
    try:
        return find(curve, window, tolerance, options)
    except SplitterError as exc:
        logger.warning("verify: %s finder failed in window %s: %s", finder, window, exc)
        return exc


def _record(
    report: VerificationReport,
    window: tuple[float, float],
    outcome: InscribedQuadrilateral | SplitterError,
    finder: Finder,
    tolerance: float,
) -> None:
    name = f"window({window[0]:g},{window[1]:g})"
    if isinstance(outcome, SplitterError):
        report.add(name, math.inf, tolerance, passed=False)
        return
    ok = outcome.window_hit is not None and outcome.residual <= tolerance
    if finder == "rectangle":
        ok = ok and outcome.rectangle
    report.add(name, outcome.residual, tolerance, passed=ok)


def density_probe(
    curve: Curve,
    windows: Sequence[tuple[float, float]],
    finder: Finder = "parallelogram",
    tolerance: float = 1e-6,
    options: SolverOptions | None = None,
) -> VerificationReport:
    """Run the finder once per window and check that a vertex lands inside."""
    _check_disjoint(windows)
    report = VerificationReport()
    for window in windows:
        _record(report, window, _probe(curve, window, finder, tolerance, options), finder, tolerance)
    return report


async def density_probe_async(
    curve: Curve,
    windows: Sequence[tuple[float, float]],
    finder: Finder = "parallelogram",
    tolerance: float = 1e-6,
    options: SolverOptions | None = None,
) -> VerificationReport:
    """density_probe with the windows solved concurrently in worker threads."""
    _check_disjoint(windows)
    outcomes = await asyncio.gather(
        *(
            asyncio.to_thread(_probe, curve, window, finder, tolerance, options)
            for window in windows
        )
    )
    report = VerificationReport()
    for window, outcome in zip(windows, outcomes):
        _record(report, window, outcome, finder, tolerance)
    return report
