"""Tests for input files and deterministic JSON output."""

from __future__ import annotations

import json
import logging
import math

import numpy as np
import pytest

from necklace_split.errors import InputFileError, InvalidCurveError
from necklace_split.formats import (
    dump_json,
    dumps_json,
    load_colors_file,
    load_curve_file,
    load_loop_result,
    load_problem_file,
    load_split_result,
)


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return path

    return _write


# ---------------------------------------------------------------------------
# TestCurveFiles
# ---------------------------------------------------------------------------


class TestCurveFiles:
    """Points or builtin references."""

    def test_points(self, write):
        path = write("c.json", {"dimension": 2, "closed": True, "points": [[0, 0], [1, 0], [1, 1], [0, 1]]})
        curve = load_curve_file(path)
        assert curve.length == 4.0

    def test_builtin(self, write):
        path = write("c.json", {"builtin": {"name": "circle", "params": {"radius": 2.0}, "samples": 128}})
        assert load_curve_file(path).length == pytest.approx(4 * math.pi, rel=1e-3)

    def test_needs_one_source(self, write):
        with pytest.raises(InputFileError, match="invalid field"):
            load_curve_file(write("c.json", {"closed": True}))

    def test_dimension_mismatch(self, write):
        path = write("c.json", {"dimension": 3, "points": [[0, 0], [1, 0], [1, 1]]})
        with pytest.raises(InvalidCurveError):
            load_curve_file(path)

    def test_self_intersection_warns(self, write, caplog):
        path = write("c.json", {"points": [[0, 0], [1, 1], [1, 0], [0, 1]]})
        with caplog.at_level(logging.WARNING, logger="necklace_split.curves"):
            load_curve_file(path)
        assert "self-intersecting" in caplog.text

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFileError, match="cannot read"):
            load_curve_file(tmp_path / "absent.json")

    def test_malformed_json(self, write):
        with pytest.raises(InputFileError, match="malformed JSON"):
            load_curve_file(write("c.json", "{not json"))


# ---------------------------------------------------------------------------
# TestProblemFiles
# ---------------------------------------------------------------------------


class TestProblemFiles:
    """Feature lists resolved through the registry."""

    def test_polynomials(self, write):
        path = write(
            "p.json",
            {
                "features": [
                    {"kind": "identity"},
                    {"kind": "polynomial", "params": {"coefficients": [0, 0, 1]}},
                ],
                "r": 2,
            },
        )
        problem = load_problem_file(path)
        assert problem.cut_count == 2
        assert problem.resolved_tolerance == 1e-9

    def test_tolerance_override(self, write):
        path = write("p.json", {"features": [{"kind": "identity"}], "r": 2, "tolerance": 1e-4})
        assert load_problem_file(path).resolved_tolerance == 1e-4
        assert load_problem_file(path, tolerance=1e-7).resolved_tolerance == 1e-7

    def test_curve_features(self, write):
        path = write(
            "p.json",
            {
                "features": [{"kind": "coordinate", "params": {"index": 1}}],
                "r": 2,
                "curve": {"builtin": {"name": "square", "samples": 4}},
            },
        )
        problem = load_problem_file(path)
        assert problem.features[0].evaluate(0.5) == 1.0

    def test_colors(self, write):
        path = write("p.json", {"features": [{"kind": "identity"}], "r": 3, "colors": [[1, 2], [3]]})
        assert load_problem_file(path).colors.blocks == [[1, 2], [3]]

    def test_cut_count_too_small(self, write):
        path = write("p.json", {"features": [{"kind": "identity"}], "r": 3, "n": 1})
        with pytest.raises(InputFileError, match="below the bound"):
            load_problem_file(path)

    def test_r_below_two(self, write):
        with pytest.raises(InputFileError):
            load_problem_file(write("p.json", {"features": [{"kind": "identity"}], "r": 1}))


# ---------------------------------------------------------------------------
# TestResultFiles
# ---------------------------------------------------------------------------


class TestResultFiles:
    """Reading back results for verification."""

    def test_colors_bare_or_wrapped(self, write):
        assert load_colors_file(write("a.json", [[1], [2, 3]])).blocks == [[1], [2, 3]]
        assert load_colors_file(write("b.json", {"colors": [[1, 2]]})).blocks == [[1, 2]]

    def test_split_result(self, write):
        path = write("s.json", {"cuts": [0.25, 0.75], "parts": [[1, 3], [2]], "converged": True})
        config = load_split_result(path)
        assert config.labels == [0, 1, 0]

    def test_split_result_bad_parts(self, write):
        with pytest.raises(InputFileError, match="partition"):
            load_split_result(write("s.json", {"cuts": [0.5], "parts": [[1], [1]]}))

    def test_not_a_split_result(self, write):
        with pytest.raises(InputFileError, match="necklace result"):
            load_split_result(write("s.json", {"groups": [[1]]}))

    def test_loop_result(self, write):
        data = {
            "cuts": [0.25, 0.5, 0.75],
            "groups": [[1, 3], [2, 4]],
            "displacements": [[0.0, 0.0], [0.0, 0.0]],
            "lengths": [2.0, 2.0],
        }
        split = load_loop_result(write("l.json", data))
        assert split.groups == [[1, 3], [2, 4]]
        assert split.loops == []

    def test_not_a_loop_result(self, write):
        with pytest.raises(InputFileError, match="loop-split result"):
            load_loop_result(write("l.json", {"cuts": [0.5], "parts": [[1], [2]]}))


# ---------------------------------------------------------------------------
# TestJsonOutput
# ---------------------------------------------------------------------------


class TestJsonOutput:
    """Sorted keys and full-precision reals."""

    def test_sorted_keys_and_reals(self):
        text = dumps_json({"b": 1, "a": [0.1, 2.0, 3]})
        assert text == '{\n  "a": [0.10000000000000001, 2.0, 3],\n  "b": 1\n}\n'

    def test_round_trips_exactly(self):
        value = {"cuts": [1 / 3, math.sqrt(0.5)]}
        assert json.loads(dumps_json(value)) == value

    def test_numpy_values(self):
        assert dumps_json({"x": np.array([1.5, 2.5]), "y": np.float64(0.5)}) == (
            '{\n  "x": [1.5, 2.5],\n  "y": 0.5\n}\n'
        )

    def test_non_finite_is_null(self):
        assert dumps_json([math.inf]) == "[null]\n"

    def test_nested_rows(self):
        assert dumps_json([{"pass": True}]) == '[\n  {\n    "pass": true\n  }\n]\n'

    def test_dump_to_file(self, tmp_path):
        path = tmp_path / "out.json"
        text = dump_json({"ok": True}, path)
        assert path.read_text(encoding="utf-8") == text
        assert dump_json({"ok": True}, None) == text
