"""Fair splitting of m features among r parts.

Given continuous f_1..f_m on [0,1] and r >= 2, find cuts
0 = t_0 <= t_1 <= ... <= t_n <= t_{n+1} = 1 and a labeling of the n+1
intervals into parts T_1..T_r so that every part collects the same
increment sum_{j in T_i} f_k(t_j) - f_k(t_{j-1}) of every feature.

Search: canonical labelings (one per relabeling orbit), and for each a
bounded least-squares solve of the deviation from the per-feature mean.
Cuts are parametrized by stick breaking, t_j = 1 - prod_{i<=j}(1 - z_i)
with z in [0,1]^n, which covers exactly the ordered cuts (the simplex of
interval lengths). The first success under a fixed (start, labeling) order
wins, so results depend only on the inputs and the seed.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import least_squares

from .errors import ContractError, NonConvergenceError
from .features import RestrictedFeature
from .models import ColorConstraint, ResidualReport, SolverOptions, SplitConfiguration
from .partitions import enumerate_partitions, search_order, validate_constraint
from .protocol import Feature

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
TABULATED_TOLERANCE = 1e-6


class SplitProblem(BaseModel):
    """Features to equalize, number of parts, cut count and optional colors."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    features: list[Any] = Field(..., min_length=1)
    r: int = Field(..., ge=2)
    n: int | None = Field(default=None, description="Cut count; defaults to (r-1)m")
    colors: ColorConstraint | None = None
    tolerance: float | None = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _check(self) -> SplitProblem:
        for f in self.features:
            if not isinstance(f, Feature):
                raise ValueError(f"{f!r} does not implement the Feature protocol")
        bound = (self.r - 1) * len(self.features)
        if self.n is None:
            self.n = bound
        elif self.n < bound:
            raise ValueError(f"n = {self.n} is below the bound (r-1)m = {bound}")
        return self

    @property
    def m(self) -> int:
        return len(self.features)

    @property
    def cut_count(self) -> int:
        return int(self.n)  # type: ignore[arg-type]

    @property
    def resolved_tolerance(self) -> float:
        if self.tolerance is not None:
            return self.tolerance
        if any(getattr(f, "tabulated", False) for f in self.features):
            return TABULATED_TOLERANCE
        return DEFAULT_TOLERANCE


def is_prime(r: int) -> bool:
    return r >= 2 and all(r % p for p in range(2, math.isqrt(r) + 1))


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------


def feature_matrix(features: Sequence[Feature], ts: np.ndarray) -> np.ndarray:
    """Values f_k(t_i) as an array of shape (len(ts), m)."""
    return np.column_stack([f.evaluate_many(ts) for f in features])


def residual(problem: SplitProblem, config: SplitConfiguration) -> ResidualReport:
    """Part sums S, deviations D = S - mean over parts, and max |D|."""
    if config.n != problem.cut_count or config.r != problem.r:
        raise ContractError(
            f"configuration has n={config.n}, r={config.r}; "
            f"problem needs n={problem.cut_count}, r={problem.r}"
        )
    values = feature_matrix(problem.features, np.asarray(config.points, dtype=float))
    increments = np.diff(values, axis=0)
    sums = np.zeros((problem.r, problem.m))
    np.add.at(sums, np.asarray(config.labels), increments)
    deviations = sums - sums.mean(axis=0)
    return ResidualReport(
        part_sums=sums.tolist(),
        deviations=deviations.tolist(),
        max_deviation=float(np.max(np.abs(deviations))),
    )


# ---------------------------------------------------------------------------
# Stick-breaking parametrization
# ---------------------------------------------------------------------------


def stick_to_cuts(z: np.ndarray) -> np.ndarray:
    """Map z in [0,1]^n to ordered cuts t_1 <= ... <= t_n in [0,1]."""
    return 1.0 - np.cumprod(1.0 - np.clip(z, 0.0, 1.0))


def cuts_to_stick(cuts: Sequence[float]) -> np.ndarray:
    """Inverse of stick_to_cuts; z_j = 0 once the cuts have reached 1."""
    t = np.asarray(cuts, dtype=float)
    prev = np.concatenate([[0.0], t[:-1]])
    remaining = 1.0 - prev
    z = np.zeros_like(t)
    open_ = remaining > 0.0
    z[open_] = (t[open_] - prev[open_]) / remaining[open_]
    return np.clip(z, 0.0, 1.0)


def _starting_point(n: int, seed: int, start: int) -> np.ndarray:
    """Start 0 spaces the cuts evenly; later starts draw sorted uniform cuts."""
    if start == 0:
        return 1.0 / (n + 2 - np.arange(1, n + 1))
    rng = np.random.default_rng([seed, start])
    return cuts_to_stick(np.sort(rng.uniform(size=n)))


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


@dataclass
class _Attempt:
    order: int
    start: int
    labels: tuple[int, ...]
    config: SplitConfiguration
    report: ResidualReport


class _Search:
    """Multi-start least squares over a fixed list of labelings."""

    def __init__(
        self,
        problem: SplitProblem,
        labelings: list[tuple[int, ...]],
        options: SolverOptions,
        tolerance: float,
    ) -> None:
        self.problem = problem
        self.labelings = labelings
        self.options = options
        self.tolerance = tolerance
        self.n = problem.cut_count
        self.best: _Attempt | None = None

    def _indicator(self, labels: tuple[int, ...]) -> np.ndarray:
        m = np.zeros((self.problem.r, self.n + 1))
        m[list(labels), np.arange(self.n + 1)] = 1.0
        return m

    def attempt(self, order: int) -> _Attempt:
        start, position = divmod(order, len(self.labelings))
        labels = self.labelings[position]
        indicator = self._indicator(labels)
        features = self.problem.features

        def fun(z: np.ndarray) -> np.ndarray:
            ts = np.concatenate([[0.0], stick_to_cuts(z), [1.0]])
            sums = indicator @ np.diff(feature_matrix(features, ts), axis=0)
            return (sums - sums.mean(axis=0)).ravel()

        z0 = _starting_point(self.n, self.options.seed, start)
        result = least_squares(
            fun,
            z0,
            bounds=(0.0, 1.0),
            method="trf",
            ftol=1e-15,
            xtol=1e-15,
            gtol=1e-15,
            max_nfev=self.options.max_iterations,
        )
        config = SplitConfiguration(
            cuts=stick_to_cuts(result.x).tolist(), labels=list(labels), r=self.problem.r
        )
        report = residual(self.problem, config)
        logger.debug(
            "splitter: start %d labeling %s -> deviation %.3e (%d evaluations)",
            start,
            labels,
            report.max_deviation,
            result.nfev,
        )
        return _Attempt(order=order, start=start, labels=labels, config=config, report=report)

    def _keep_best(self, attempt: _Attempt) -> None:
        if self.best is None or attempt.report.max_deviation < self.best.report.max_deviation:
            self.best = attempt

    def run(self) -> _Attempt:
        total = self.options.starts * len(self.labelings)
        workers = self.options.workers
        if workers <= 1:
            for order in range(total):
                attempt = self.attempt(order)
                self._keep_best(attempt)
                if attempt.report.max_deviation <= self.tolerance:
                    return attempt
        else:
            # batches in order; the lowest order index among successes wins
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for lo in range(0, total, workers):
                    batch = list(pool.map(self.attempt, range(lo, min(lo + workers, total))))
                    for attempt in batch:
                        self._keep_best(attempt)
                    hits = [a for a in batch if a.report.max_deviation <= self.tolerance]
                    if hits:
                        return min(hits, key=lambda a: a.order)
        best = self.best
        raise NonConvergenceError(
            f"no configuration reached tolerance {self.tolerance:.1e} after {total} attempts "
            f"(best deviation {best.report.max_deviation:.3e})"
            if best is not None
            else "no labelings to search",
            best=best.config if best is not None else None,
            report=best.report if best is not None else None,
        )


def _solve(
    problem: SplitProblem,
    labelings: list[tuple[int, ...]],
    options: SolverOptions | None,
    tolerance: float | None = None,
) -> tuple[SplitConfiguration, ResidualReport]:
    options = options or SolverOptions()
    tol = tolerance if tolerance is not None else problem.resolved_tolerance
    logger.info(
        "splitter: m=%d r=%d n=%d, %d labelings, %d starts, tolerance %.1e",
        problem.m,
        problem.r,
        problem.cut_count,
        len(labelings),
        options.starts,
        tol,
    )
    found = _Search(problem, labelings, options, tol).run()
    logger.info(
        "splitter: solved with labeling %s at start %d, deviation %.3e",
        found.labels,
        found.start,
        found.report.max_deviation,
    )
    return found.config, found.report


def solve_split(
    problem: SplitProblem, options: SolverOptions | None = None
) -> tuple[SplitConfiguration, ResidualReport]:
    """Find cuts and a labeling whose part sums agree within the tolerance.

    Raises NonConvergenceError (carrying the best attempt) when the budget
    runs out. Color constraints on the problem restrict the labelings.
    """
    if problem.colors is not None:
        validate_constraint(problem.colors, problem.cut_count, problem.r)
    labelings = search_order(
        list(enumerate_partitions(problem.cut_count, problem.r, problem.colors))
    )
    return _solve(problem, labelings, options)


def solve_colored(
    problem: SplitProblem, options: SolverOptions | None = None
) -> tuple[SplitConfiguration, ResidualReport]:
    """solve_split restricted to rainbow labelings (|C_i & T_j| <= 1).

    Existence is only known for prime r; other r run but the report says so.
    """
    if problem.colors is None:
        raise ContractError("solve_colored needs a color constraint")
    guaranteed = is_prime(problem.r)
    if not guaranteed:
        logger.warning(
            "splitter: colored split with non-prime r=%d; existence is not guaranteed",
            problem.r,
        )
    try:
        config, report = solve_split(problem, options)
    except NonConvergenceError as exc:
        if exc.report is not None:
            exc.report = exc.report.model_copy(update={"existence_guaranteed": guaranteed})
        raise
    return config, report.model_copy(update={"existence_guaranteed": guaranteed})


def solve_hobby_rice(
    features: Sequence[Feature],
    tolerance: float | None = None,
    options: SolverOptions | None = None,
) -> tuple[SplitConfiguration, ResidualReport]:
    """m cuts with alternating signs: sum_j (-1)^j (f_k(t_j) - f_k(t_{j-1})) = 0.

    The two-part split with n = m and the labeling fixed to 1,3,5,... / 2,4,...
    """
    problem = SplitProblem(features=list(features), r=2, n=len(features), tolerance=tolerance)
    alternating = tuple(i % 2 for i in range(problem.cut_count + 1))
    return _solve(problem, [alternating], options)


def canonicalize_alternating(
    cuts: Sequence[float], labels: Sequence[int]
) -> tuple[list[float], list[int]]:
    """Reduce a four-cut two-part split to the labeling {1,3,5}/{2,4}.

    While two neighbouring intervals share a part, take the last such pair
    (j, j+1), move every later interval to the other part, drop t_j, and
    append t = 1. Merging the pair and adding the empty interval [1,1]
    leave every part sum unchanged. At most four steps.
    """
    cuts = [float(t) for t in cuts]
    labels = [int(label) for label in labels]
    if len(cuts) != 4 or len(labels) != 5 or not set(labels) <= {0, 1}:
        raise ContractError("canonicalize_alternating needs 4 cuts and 5 labels in {0, 1}")
    for _ in range(4):
        pairs = [j for j in range(4) if labels[j] == labels[j + 1]]
        if not pairs:
            break
        j = pairs[-1]
        labels = labels[: j + 1] + [1 - label for label in labels[j + 1 :]]
        cuts = cuts[:j] + cuts[j + 1 :] + [1.0]
    if labels[0] == 1:
        labels = [1 - label for label in labels]
    return cuts, labels


def solve_alternating_4(
    features: Sequence[Feature],
    tolerance: float | None = None,
    options: SolverOptions | None = None,
) -> tuple[SplitConfiguration, ResidualReport]:
    """Four cuts with 2f(t1)+2f(t3)+f(1) = 2f(t2)+2f(t4)+f(0) for every feature."""
    if len(features) != 4:
        raise ContractError(f"solve_alternating_4 needs exactly 4 features, got {len(features)}")
    problem = SplitProblem(features=list(features), r=2, n=4, tolerance=tolerance)
    config, _ = solve_split(problem, options)
    cuts, labels = canonicalize_alternating(config.cuts, config.labels)
    canonical = SplitConfiguration(cuts=cuts, labels=labels, r=2)
    return canonical, residual(problem, canonical)


# ---------------------------------------------------------------------------
# Composite r = p*q
# ---------------------------------------------------------------------------


def _first_labeling(n: int, r: int) -> tuple[int, ...]:
    return next(enumerate_partitions(n, r))


def compose_splittings(
    features: Sequence[Feature],
    p: int,
    q: int,
    tolerance: float | None = None,
    options: SolverOptions | None = None,
) -> tuple[SplitConfiguration, ResidualReport]:
    """Split for r = p*q by splitting for p, then each part for q.

    Each part's intervals are glued into one continuous function per feature
    (see RestrictedFeature) and split into q. The q-split cuts land inside
    the original intervals; every original cut stays. The result has
    (p-1)m + p(q-1)m = (pq-1)m cuts.
    """
    if p < 2 or q < 2:
        raise ContractError(f"compose_splittings needs p, q >= 2, got p={p}, q={q}")
    features = list(features)
    full = SplitProblem(features=features, r=p * q, tolerance=tolerance)
    tol = full.resolved_tolerance
    m = len(features)

    outer, _ = solve_split(SplitProblem(features=features, r=p, tolerance=tol / 2), options)
    points = outer.points
    inner_n = (q - 1) * m

    # per part: list of (interval index J, new cut x) in increasing order, and sub-labels
    placed: dict[int, list[float]] = {j: [] for j in range(1, outer.n + 2)}
    sub_labels: list[list[int]] = []
    for part, indices in enumerate(outer.parts):
        intervals = [(points[j - 1], points[j]) for j in indices]
        if sum(b - a for a, b in intervals) <= 0.0:
            # every interval of this part is empty; put all its cuts at one point
            for _ in range(inner_n):
                placed[indices[0]].append(points[indices[0] - 1])
            sub_labels.append(list(_first_labeling(inner_n, q)))
            continue
        restricted = [RestrictedFeature(f, intervals) for f in features]
        inner, _ = solve_split(
            SplitProblem(features=restricted, r=q, tolerance=tol / 2), options
        )
        pieces, xs = restricted[0].locate(np.asarray(inner.cuts, dtype=float))
        for piece, x in zip(pieces, xs):
            placed[indices[int(piece)]].append(float(x))
        sub_labels.append(list(inner.labels))
        logger.debug("splitter: part %d split into %d with cuts %s", part, q, inner.cuts)

    counters = [0] * p
    cuts: list[float] = []
    labels: list[int] = []
    for j in range(1, outer.n + 2):
        part = outer.labels[j - 1]
        for x in placed[j]:
            labels.append(part * q + sub_labels[part][counters[part]])
            counters[part] += 1
            cuts.append(x)
        labels.append(part * q + sub_labels[part][counters[part]])
        if j <= outer.n:
            cuts.append(points[j])

    relabel: dict[int, int] = {}
    for label in labels:
        relabel.setdefault(label, len(relabel))
    config = SplitConfiguration(
        cuts=cuts, labels=[relabel[label] for label in labels], r=p * q
    )
    report = residual(full, config)
    if report.max_deviation > tol:
        raise NonConvergenceError(
            f"composed split misses tolerance {tol:.1e} (deviation {report.max_deviation:.3e})",
            best=config,
            report=report,
        )
    return config, report
