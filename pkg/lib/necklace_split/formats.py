"""File formats: curve files, problem files, result files, and JSON output.

Curve file: {"dimension", "closed", "points"} or {"builtin": {"name", "params", "samples"}}.
Problem file: {"features": [{"kind", "params"}], "r", "n"?, "colors"?, "tolerance"?, "curve"?}.
Results are written with sorted keys and reals at 17 significant digits so
identical runs produce identical bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError, model_validator

from .curves import Curve, build_curve, builtin_curve, warn_if_self_intersecting
from .errors import InputFileError, InvalidCurveError
from .models import ColorConstraint, LoopSplit, SplitConfiguration
from .registry import make_feature
from .splitter import SplitProblem


class BuiltinSpec(BaseModel):
    """A named builtin curve with its parameters."""

    name: str
    params: dict[str, Any] = Field(default_factory=dict)
    samples: int = Field(default=1024, ge=1)


class CurveFile(BaseModel):
    """Sampled points or a builtin reference."""

    dimension: int | None = Field(default=None, ge=1)
    closed: bool = True
    points: list[list[float]] | None = None
    builtin: BuiltinSpec | None = None

    @model_validator(mode="after")
    def _one_source(self) -> CurveFile:
        if (self.points is None) == (self.builtin is None):
            raise ValueError("curve file needs exactly one of 'points' or 'builtin'")
        return self

    def build(self) -> Curve:
        if self.builtin is not None:
            return builtin_curve(self.builtin.name, self.builtin.params, self.builtin.samples)
        points = self.points or []
        if self.dimension is not None and any(len(p) != self.dimension for p in points):
            raise InvalidCurveError(f"every point must have dimension {self.dimension}")
        curve = build_curve(points, closed=self.closed)
        warn_if_self_intersecting(curve)
        return curve


class FeatureSpec(BaseModel):
    kind: str
    params: dict[str, Any] = Field(default_factory=dict)


class ProblemFile(BaseModel):
    """Features, part count and options of a splitting problem."""

    features: list[FeatureSpec] = Field(..., min_length=1)
    r: int = Field(..., ge=2)
    n: int | None = None
    colors: list[list[int]] | None = None
    tolerance: float | None = Field(default=None, gt=0.0)
    curve: CurveFile | None = None

    def build(self, tolerance: float | None = None) -> SplitProblem:
        """The SplitProblem; ``tolerance`` overrides the file's value."""
        curve = self.curve.build() if self.curve is not None else None
        features = [make_feature(f.kind, f.params, curve) for f in self.features]
        return SplitProblem(
            features=features,
            r=self.r,
            n=self.n,
            colors=ColorConstraint(blocks=self.colors) if self.colors is not None else None,
            tolerance=tolerance if tolerance is not None else self.tolerance,
        )


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


def read_json(path: str | Path) -> Any:
    """Parse a UTF-8 JSON file. Raises InputFileError on I/O or syntax errors."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFileError(f"{path}: malformed JSON: {exc}") from exc


def _parse(model: type[BaseModel], data: Any, path: str | Path) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InputFileError(f"{path}: {exc.error_count()} invalid field(s): {exc}") from exc


def load_curve_file(path: str | Path) -> Curve:
    return _parse(CurveFile, read_json(path), path).build()


def load_problem_file(path: str | Path, tolerance: float | None = None) -> SplitProblem:
    problem_file: ProblemFile = _parse(ProblemFile, read_json(path), path)
    try:
        return problem_file.build(tolerance)
    except ValidationError as exc:
        raise InputFileError(f"{path}: {exc}") from exc


def load_colors_file(path: str | Path) -> ColorConstraint:
    """Color blocks as a bare list of lists or {"colors": [[...]]}."""
    data = read_json(path)
    if isinstance(data, dict):
        data = data.get("colors")
    return _parse(ColorConstraint, {"blocks": data}, path)


def load_split_result(path: str | Path) -> SplitConfiguration:
    """A necklace result file back into a configuration."""
    data = read_json(path)
    if not isinstance(data, dict) or "cuts" not in data or "parts" not in data:
        raise InputFileError(f"{path}: not a necklace result (needs 'cuts' and 'parts')")
    try:
        return SplitConfiguration.from_parts(list(data["cuts"]), list(data["parts"]))
    except (ValueError, TypeError) as exc:
        raise InputFileError(f"{path}: {exc}") from exc


def load_loop_result(path: str | Path) -> LoopSplit:
    """A loop-split result file; reassembled loops are not stored."""
    data = read_json(path)
    if not isinstance(data, dict) or "groups" not in data:
        raise InputFileError(f"{path}: not a loop-split result (needs 'groups')")
    return _parse(LoopSplit, data, path)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _real(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, float):
        return _real(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}"
            for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in value) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(value, "tolist"):
        return _encode(value.tolist(), indent, level)
    if hasattr(value, "item"):
        return _encode(value.item(), indent, level)
    raise TypeError(f"cannot encode {type(value).__name__} as JSON")


def dumps_json(value: Any, indent: int = 2) -> str:
    """Deterministic JSON text: sorted keys, 17 significant digits, trailing newline."""
    return _encode(value, indent, 0) + "\n"


def dump_json(value: Any, path: str | Path | None) -> str:
    """Write deterministic JSON to ``path`` (or just return it when path is None)."""
    text = dumps_json(value)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
