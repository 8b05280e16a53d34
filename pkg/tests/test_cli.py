"""End-to-end tests of the necklace-split command line."""

from __future__ import annotations

import json
import math

import pytest
from necklace_cli import build_parser, main
from necklace_cli.commands import (
    COMMANDS,
    EXIT_INPUT,
    EXIT_NON_CONVERGENCE,
    EXIT_OK,
    EXIT_VERIFY_FAILED,
    parse_window,
)
from necklace_split.errors import DomainError

SQUARE = {"dimension": 2, "closed": True, "points": [[0, 0], [1, 0], [1, 1], [0, 1]]}
CIRCLE = {"builtin": {"name": "circle", "samples": 256}}
TREFOIL = {"builtin": {"name": "trefoil3d", "samples": 512}}
SQUARE_FEATURE = {"features": [{"kind": "polynomial", "params": {"coefficients": [0, 0, 1]}}], "r": 2}


@pytest.fixture
def files(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return str(path)

    _write.dir = tmp_path
    return _write


def run_json(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


# ---------------------------------------------------------------------------
# TestParser
# ---------------------------------------------------------------------------


class TestParser:
    """Subcommands and shared flags."""

    def test_commands_registered(self):
        assert [c.name for c in COMMANDS] == ["split-necklace", "split-loop", "inscribe", "verify"]

    def test_common_flags(self):
        args = build_parser().parse_args(["split-loop", "--curve", "c.json", "--r", "2", "--seed", "3"])
        assert (args.seed, args.starts, args.max_iter, args.workers, args.tol) == (3, 32, 10_000, 1, None)

    def test_unknown_flag_is_input_error(self, capsys):
        assert main(["split-loop", "--bogus"]) == EXIT_INPUT

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == EXIT_OK

    def test_parse_window(self):
        assert parse_window("0.4,0.5") == (0.4, 0.5)
        with pytest.raises(DomainError):
            parse_window("0.4")


# ---------------------------------------------------------------------------
# TestSplitNecklace
# ---------------------------------------------------------------------------


class TestSplitNecklace:
    """split-necklace exit codes and output."""

    def test_square_feature(self, files, capsys):
        code, result = run_json(["split-necklace", "--problem", files("p.json", SQUARE_FEATURE)], capsys)
        assert code == EXIT_OK
        assert result["converged"] is True
        assert result["cuts"][0] == pytest.approx(math.sqrt(0.5), abs=1e-9)
        assert "existence_guaranteed" not in result

    def test_block_of_size_r(self, files, capsys):
        problem = {"features": [{"kind": "identity"}], "r": 2, "colors": [[1, 2]]}
        code = main(["split-necklace", "--problem", files("p.json", problem)])
        assert code == EXIT_INPUT
        assert "at most r-1" in capsys.readouterr().err

    def test_budget_of_one(self, files, capsys):
        argv = ["split-necklace", "--problem", files("p.json", SQUARE_FEATURE), "--max-iter", "1", "--starts", "1"]
        code, result = run_json(argv, capsys)
        assert code == EXIT_NON_CONVERGENCE
        assert result["converged"] is False
        assert result["max_deviation"] > 1e-9

    def test_malformed_json(self, files, capsys):
        code = main(["split-necklace", "--problem", files("p.json", "{oops")])
        assert code == EXIT_INPUT
        assert capsys.readouterr().err.startswith("necklace-split: ")

    def test_invalid_options(self, files, capsys):
        assert main(["split-necklace", "--problem", files("p.json", SQUARE_FEATURE), "--starts", "0"]) == EXIT_INPUT

    def test_colored_reports_guarantee(self, files, capsys):
        problem = {"features": [{"kind": "identity"}], "r": 3, "colors": [[1, 2], [3]]}
        code, result = run_json(["split-necklace", "--problem", files("p.json", problem)], capsys)
        assert code == EXIT_OK
        assert result["existence_guaranteed"] is True

    def test_out_file_is_deterministic(self, files, capsys):
        problem = files("p.json", {"features": [{"kind": "identity"}, {"kind": "polynomial", "params": {"coefficients": [0, 0, 0, 1]}}], "r": 2})
        first, second = files.dir / "a.json", files.dir / "b.json"
        assert main(["split-necklace", "--problem", problem, "--seed", "5", "--out", str(first)]) == EXIT_OK
        assert main(["split-necklace", "--problem", problem, "--seed", "5", "--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        assert capsys.readouterr().out == ""


# ---------------------------------------------------------------------------
# TestSplitLoop
# ---------------------------------------------------------------------------


class TestSplitLoop:
    """split-loop output and figures."""

    def test_square(self, files, capsys):
        code, result = run_json(["split-loop", "--curve", files("c.json", SQUARE), "--r", "2"], capsys)
        assert code == EXIT_OK
        assert result["groups"] == [[1, 3], [2, 4]]
        assert result["lengths"] == pytest.approx([2.0, 2.0], abs=1e-8)

    def test_svg(self, files, capsys):
        svg = files.dir / "loop.svg"
        assert main(["split-loop", "--curve", files("c.json", SQUARE), "--r", "2", "--svg", str(svg)]) == EXIT_OK
        assert svg.read_text(encoding="utf-8").lstrip().startswith("<?xml")

    def test_spatial_curve_is_projected(self, files, capsys):
        svg = files.dir / "trefoil.svg"
        argv = ["split-loop", "--curve", files("c.json", TREFOIL), "--r", "2", "--tol", "1e-6", "--svg", str(svg)]
        assert main(argv) == EXIT_OK
        assert svg.exists()

    def test_colors_file(self, files, capsys):
        colors = files("k.json", [[1], [2], [3], [4]])
        code, result = run_json(["split-loop", "--curve", files("c.json", SQUARE), "--r", "2", "--colors", colors], capsys)
        assert code == EXIT_OK
        assert result["colors"] == [[1], [2], [3], [4]]

    def test_r_zero(self, files, capsys):
        assert main(["split-loop", "--curve", files("c.json", SQUARE), "--r", "0"]) == EXIT_INPUT

    def test_open_curve(self, files, capsys):
        curve = {**SQUARE, "closed": False}
        assert main(["split-loop", "--curve", files("c.json", curve), "--r", "2"]) == EXIT_INPUT


# ---------------------------------------------------------------------------
# TestInscribe
# ---------------------------------------------------------------------------


class TestInscribe:
    """inscribe shapes and validation."""

    def test_balanced_rectangle(self, files, capsys):
        argv = ["inscribe", "--curve", files("c.json", CIRCLE), "--shape", "balanced-rectangle", "--tol", "1e-6"]
        code, result = run_json(argv, capsys)
        assert code == EXIT_OK
        ts = sorted(t % 1.0 for t in result["t"])
        gaps = [b - a for a, b in zip(ts, ts[1:])] + [1.0 - ts[-1] + ts[0]]
        assert gaps == pytest.approx([0.25] * 4, abs=1e-4)

    def test_trefoil_window_hit(self, files, capsys):
        argv = ["inscribe", "--curve", files("c.json", TREFOIL), "--window", "0.4,0.5", "--tol", "1e-6"]
        code, result = run_json(argv, capsys)
        assert code == EXIT_OK
        assert result["window"] == [0.4, 0.5]
        assert 0.4 < result["t"][result["window_hit"] - 1] < 0.5

    def test_reversed_window(self, files, capsys):
        assert main(["inscribe", "--curve", files("c.json", CIRCLE), "--window", "0.9,0.1"]) == EXIT_INPUT

    def test_rectangle_needs_plane(self, files, capsys):
        argv = ["inscribe", "--curve", files("c.json", TREFOIL), "--shape", "rectangle", "--window", "0.1,0.2"]
        assert main(argv) == EXIT_INPUT

    def test_anchored_with_svg(self, files, capsys):
        svg = files.dir / "quad.svg"
        argv = ["inscribe", "--curve", files("c.json", CIRCLE), "--shape", "anchored-parallelogram", "--anchor", "0.3", "--tol", "1e-6", "--svg", str(svg)]
        code, result = run_json(argv, capsys)
        assert code == EXIT_OK
        assert result["shape"] == "anchored-parallelogram"
        assert svg.exists()


# ---------------------------------------------------------------------------
# TestVerify
# ---------------------------------------------------------------------------


class TestVerify:
    """Round trips and corrupted results."""

    def test_necklace_round_trip(self, files, capsys):
        problem = files("p.json", SQUARE_FEATURE)
        out = files.dir / "r.json"
        assert main(["split-necklace", "--problem", problem, "--out", str(out)]) == EXIT_OK
        code, rows = run_json(["verify", "--problem", problem, "--result", str(out)], capsys)
        assert code == EXIT_OK
        assert all(row["pass"] for row in rows)

    def test_loop_round_trip(self, files, capsys):
        curve = files("c.json", SQUARE)
        out = files.dir / "r.json"
        assert main(["split-loop", "--curve", curve, "--r", "2", "--out", str(out)]) == EXIT_OK
        code, rows = run_json(["verify", "--curve", curve, "--result", str(out)], capsys)
        assert code == EXIT_OK
        assert {"closure[1]", "closure[2]"} <= {row["check"] for row in rows}

    def test_corrupted_cut(self, files, capsys):
        problem = files("p.json", SQUARE_FEATURE)
        result = files("r.json", {"cuts": [0.7], "parts": [[1], [2]]})
        code, rows = run_json(["verify", "--problem", problem, "--result", result], capsys)
        assert code == EXIT_VERIFY_FAILED
        assert [row["check"] for row in rows if not row["pass"]] == ["balance[1]"]

    def test_shape_mismatch(self, files, capsys):
        problem = files("p.json", SQUARE_FEATURE)
        result = files("r.json", {"cuts": [0.2, 0.7], "parts": [[1, 3], [2]]})
        assert main(["verify", "--problem", problem, "--result", result]) == EXIT_INPUT

    def test_missing_file(self, files, capsys):
        problem = files("p.json", SQUARE_FEATURE)
        missing = str(files.dir / "absent.json")
        assert main(["verify", "--problem", problem, "--result", missing]) == EXIT_INPUT
        assert "cannot read" in capsys.readouterr().err

    def test_needs_a_source(self, files, capsys):
        assert main(["verify", "--result", files("r.json", {})]) == EXIT_INPUT
