"""Data models shared across the toolkit.

- SplitError: structured error payload (input / convergence / resource)
- SolverOptions: search budget and determinism knobs
- ColorConstraint, SplitConfiguration, ResidualReport: the splitter's types
- InscribedQuadrilateral, LoopSplit: geometric results
- CheckResult, VerificationReport, DiscreteDivision: oracle outputs

Indices exposed to users (parts, groups, color blocks, window hits) are
1-based, matching the interval numbering 1..n+1. Labels inside a
SplitConfiguration are 0-based part numbers.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class SplitError(BaseModel):
    """Consistent error structure for every toolkit failure."""

    error_type: Literal["input", "convergence", "resource"] = Field(
        ...,
        description="Error category: bad input, numerical non-convergence, or size limit",
    )
    error_code: str = Field(
        ..., description="Machine-readable code (e.g. 'invalid_curve', 'non_convergence')"
    )
    message: str = Field(..., description="Human-readable error description")
    retriable: bool = Field(
        default=False, description="Whether a larger budget or another seed may help"
    )

    def to_dict(self) -> dict:
        """Convert to a plain dict for JSON output."""
        return {
            "error_type": self.error_type,
            "error_code": self.error_code,
            "message": self.message,
            "retriable": self.retriable,
        }


class SolverOptions(BaseModel):
    """Budget and determinism settings for the multi-start search."""

    starts: int = Field(default=32, ge=1, description="Starting points per labeling")
    max_iterations: int = Field(
        default=10_000, ge=1, description="Function evaluations allowed per start"
    )
    seed: int = Field(default=0, ge=0, description="Seed for the starting points")
    workers: int = Field(
        default=1, ge=1, description="Threads used to fan out labelings and starts"
    )


class ColorConstraint(BaseModel):
    """A partition C_1..C_l of the interval indices 1..n+1."""

    blocks: list[list[int]] = Field(..., description="Color blocks of 1-based indices")

    def block_of(self) -> dict[int, int]:
        """Map each 1-based interval index to its block number."""
        return {index: b for b, block in enumerate(self.blocks) for index in block}


class SplitConfiguration(BaseModel):
    """Cut points plus a labeling of the n+1 intervals into r parts."""

    cuts: list[float] = Field(..., description="t_1 <= ... <= t_n in [0, 1]")
    labels: list[int] = Field(..., description="0-based part of each interval 1..n+1")
    r: int = Field(..., ge=2, description="Number of parts")

    @model_validator(mode="after")
    def _check_shape(self) -> SplitConfiguration:
        if len(self.labels) != len(self.cuts) + 1:
            raise ValueError(
                f"expected {len(self.cuts) + 1} labels for {len(self.cuts)} cuts, "
                f"got {len(self.labels)}"
            )
        if any(not 0 <= label < self.r for label in self.labels):
            raise ValueError(f"labels must lie in [0, {self.r})")
        if any(not 0.0 <= t <= 1.0 for t in self.cuts):
            raise ValueError("cuts must lie in [0, 1]")
        if any(b < a for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError("cuts must be nondecreasing")
        return self

    @property
    def n(self) -> int:
        return len(self.cuts)

    @property
    def points(self) -> list[float]:
        """All breakpoints t_0 = 0, t_1..t_n, t_{n+1} = 1."""
        return [0.0, *self.cuts, 1.0]

    @property
    def parts(self) -> list[list[int]]:
        """The partition T_1..T_r as lists of 1-based interval indices."""
        parts: list[list[int]] = [[] for _ in range(self.r)]
        for index, label in enumerate(self.labels, start=1):
            parts[label].append(index)
        return parts

    @classmethod
    def from_parts(cls, cuts: list[float], parts: list[list[int]]) -> SplitConfiguration:
        """Build a configuration from 1-based part lists."""
        labels = [0] * (len(cuts) + 1)
        seen: set[int] = set()
        for label, part in enumerate(parts):
            for index in part:
                if not 1 <= index <= len(cuts) + 1 or index in seen:
                    raise ValueError(f"parts must partition 1..{len(cuts) + 1}")
                seen.add(index)
                labels[index - 1] = label
        if len(seen) != len(cuts) + 1:
            raise ValueError(f"parts must partition 1..{len(cuts) + 1}")
        return cls(cuts=list(cuts), labels=labels, r=len(parts))


class ResidualReport(BaseModel):
    """Part sums S[j][k], deviations from the per-feature mean, and their max."""

    part_sums: list[list[float]]
    deviations: list[list[float]]
    max_deviation: float = Field(..., ge=0.0)
    existence_guaranteed: bool = Field(
        default=True,
        description="False when a colored split runs with non-prime r",
    )


class InscribedQuadrilateral(BaseModel):
    """Four parameters on a closed curve whose images form a parallelogram."""

    t: list[float] = Field(..., min_length=4, max_length=4)
    vertices: list[list[float]]
    residual: float = Field(..., ge=0.0, description="|g(t1)+g(t3)-g(t2)-g(t4)|")
    rectangle: bool
    collinear: bool
    degenerate: bool = Field(
        default=False, description="Two vertices closer than 1e-6 of the diameter"
    )
    rectangle_residual: float = Field(
        default=0.0, ge=0.0, description="Spread of the centered squared norms"
    )
    window: tuple[float, float] | None = None
    window_hit: int | None = Field(
        default=None, description="1-based index of a parameter inside the window"
    )
    arc_lengths: list[float] | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "t": self.t,
            "vertices": self.vertices,
            "residual": self.residual,
            "rectangle": self.rectangle,
            "collinear": self.collinear,
            "degenerate": self.degenerate,
            "rectangle_residual": self.rectangle_residual,
        }
        if self.window is not None:
            data["window"] = list(self.window)
            data["window_hit"] = self.window_hit
        if self.arc_lengths is not None:
            data["arc_lengths"] = self.arc_lengths
        return data


class LoopSplit(BaseModel):
    """Cuts of a loop and the groups of pieces that close up into r loops."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    cuts: list[float]
    groups: list[list[int]] = Field(..., description="1-based interval indices per group")
    displacements: list[list[float]]
    lengths: list[float]
    loops: list[Any] = Field(default_factory=list, exclude=True)
    colors: list[list[int]] | None = None
    existence_guaranteed: bool = True

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "cuts": self.cuts,
            "groups": self.groups,
            "displacements": self.displacements,
            "lengths": self.lengths,
        }
        if self.colors is not None:
            data["colors"] = self.colors
            data["existence_guaranteed"] = self.existence_guaranteed
        return data


class CheckResult(BaseModel):
    """One named check of a verification run."""

    model_config = ConfigDict(populate_by_name=True)

    check: str
    passed: bool = Field(..., alias="pass")
    residual: float
    tol: float


class VerificationReport(BaseModel):
    """Per-check results; the verdict is their conjunction."""

    checks: list[CheckResult] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: str, residual: float, tol: float, passed: bool | None = None) -> None:
        """Record a check; passes when residual <= tol unless told otherwise."""
        ok = residual <= tol if passed is None else passed
        self.checks.append(
            CheckResult(check=check, passed=ok, residual=float(residual), tol=float(tol))
        )

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_list(self) -> list[dict[str, Any]]:
        return [c.model_dump(by_alias=True) for c in self.checks]


class DiscreteDivision(BaseModel):
    """A fair division of a discrete bead string among r thieves."""

    cuts: list[int] = Field(..., description="Cut positions as bead counts before the cut")
    labels: list[int] = Field(..., description="0-based thief of each segment")
    r: int

    @property
    def cut_count(self) -> int:
        return len(self.cuts)

    def shares(self, beads: list[str]) -> list[dict[str, int]]:
        """Bead counts per type received by each thief."""
        bounds = [0, *self.cuts, len(beads)]
        shares: list[dict[str, int]] = [{} for _ in range(self.r)]
        for label, lo, hi in zip(self.labels, bounds, bounds[1:]):
            for bead in beads[lo:hi]:
                shares[label][bead] = shares[label].get(bead, 0) + 1
        return shares
