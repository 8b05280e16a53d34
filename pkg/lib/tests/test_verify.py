"""Tests for the independent checker and the discrete oracle."""

from __future__ import annotations

import asyncio
import itertools
from collections import Counter

import pytest

from necklace_split.curves import builtin_curve
from necklace_split.errors import ContractError, DomainError, ResourceError
from necklace_split.features import IdentityFeature, PolynomialFeature, discrete_necklace_features
from necklace_split.formats import dump_json, load_loop_result
from necklace_split.geometry import reassemble, split_loop
from necklace_split.models import DiscreteDivision, LoopSplit, SplitConfiguration
from necklace_split.splitter import SplitProblem, solve_split
from necklace_split.verify import (
    brute_force_discrete_split,
    check_loop_split,
    check_split,
    density_probe,
    density_probe_async,
    is_fair_division,
    round_to_beads,
    window_grid,
)

T = IdentityFeature()
T2 = PolynomialFeature([0.0, 0.0, 1.0])
SQUARE = builtin_curve("square", samples=4)


def by_name(report):
    return {c.check: c for c in report.checks}


def even_strings(max_length):
    """Bead strings over {a, b} whose type counts are all even."""
    for size in range(2, max_length + 1):
        for beads in itertools.product("ab", repeat=size):
            if all(v % 2 == 0 for v in Counter(beads).values()):
                yield "".join(beads)


def oracle_agrees(beads):
    types, features = discrete_necklace_features(list(beads))
    config, _ = solve_split(SplitProblem(features=features, r=2))
    division = round_to_beads(config, beads)
    assert division is not None, beads
    assert is_fair_division(division, beads)
    best = brute_force_discrete_split(beads, 2)
    assert best is not None
    assert best.cut_count <= division.cut_count == len(types)


# ---------------------------------------------------------------------------
# TestCheckSplit
# ---------------------------------------------------------------------------


class TestCheckSplit:
    """Direct recomputation of part sums."""

    def test_exact_split_passes(self):
        config = SplitConfiguration(cuts=[0.25, 0.75], labels=[0, 1, 0], r=2)
        report = check_split([T, T2], config, 1e-9)
        assert report.verdict
        assert [c.check for c in report.checks] == [
            "monotone",
            "range",
            "balance[1]",
            "telescoping[1]",
            "balance[2]",
            "telescoping[2]",
        ]

    def test_perturbed_cut_fails_balance(self):
        config = SplitConfiguration(cuts=[0.251, 0.75], labels=[0, 1, 0], r=2)
        report = check_split([T, T2], config, 1e-9)
        assert not report.verdict
        checks = by_name(report)
        assert checks["balance[1]"].residual == pytest.approx(1e-3, rel=1e-6)
        assert checks["balance[2]"].residual == pytest.approx(5.01e-4, rel=1e-6)
        assert checks["telescoping[1]"].passed

    def test_to_list_uses_pass_key(self):
        config = SplitConfiguration(cuts=[0.5], labels=[0, 1], r=2)
        rows = check_split([T], config, 1e-9).to_list()
        assert rows[-2] == {"check": "balance[1]", "pass": True, "residual": 0.0, "tol": 1e-9}

    def test_solver_output_checks_out(self):
        problem = SplitProblem(features=[T, T2, PolynomialFeature([0, 0, 0, 1])], r=2)
        config, _ = solve_split(problem)
        assert check_split(problem.features, config, 1e-9).verdict


# ---------------------------------------------------------------------------
# TestCheckLoopSplit
# ---------------------------------------------------------------------------


def _square_split(cuts, groups):
    points = [0.0, *cuts, 1.0]
    displacements = []
    for group in groups:
        total = sum(SQUARE.evaluate(points[j]) - SQUARE.evaluate(points[j - 1]) for j in group)
        displacements.append([float(x) for x in total])
    loops = [reassemble(SQUARE, cuts, g) for g in groups]
    return LoopSplit(
        cuts=cuts,
        groups=groups,
        displacements=displacements,
        lengths=[loop.length for loop in loops],
        loops=loops,
    )


class TestCheckLoopSplit:
    """Displacement, length and closure of every group."""

    def test_solver_output_passes(self):
        split = split_loop(SQUARE, 2)
        report = check_loop_split(SQUARE, split, 1e-9)
        assert report.verdict
        assert {"partition", "displacement[1]", "length[2]", "closure[2]"} <= set(by_name(report))

    def test_closed_but_unequal_groups(self):
        split = _square_split([0.125, 0.25, 0.5, 0.625, 0.75], [[1, 4], [2, 3, 5, 6]])
        assert split.lengths == pytest.approx([1.0, 3.0])
        checks = by_name(check_loop_split(SQUARE, split, 1e-9))
        assert checks["displacement[1]"].passed and checks["displacement[2]"].passed
        assert not checks["length[1]"].passed
        assert not checks["length[2]"].passed
        assert checks["length[1]"].residual == pytest.approx(1.0)

    def test_moved_cut_opens_the_loop(self):
        split = split_loop(SQUARE, 2)
        moved = split.model_copy(update={"cuts": [0.26, 0.5, 0.75]})
        checks = by_name(check_loop_split(SQUARE, moved, 1e-9))
        assert not checks["displacement[1]"].passed
        assert checks["displacement[1]"].residual == pytest.approx(0.04, rel=1e-9)

    def test_closure_rebuilt_from_the_curve(self):
        split = split_loop(SQUARE, 2).model_copy(update={"loops": []})
        checks = by_name(check_loop_split(SQUARE, split, 1e-9))
        assert checks["closure[1]"].passed and checks["closure[2]"].passed

    def test_closure_survives_a_result_file(self, tmp_path):
        path = tmp_path / "loop.json"
        dump_json(split_loop(SQUARE, 2).to_dict(), path)
        loaded = load_loop_result(path)
        assert loaded.loops == []
        report = check_loop_split(SQUARE, loaded, 1e-9)
        assert {"closure[1]", "closure[2]"} <= set(by_name(report))
        assert report.verdict

    def test_moved_cut_breaks_closure(self):
        split = split_loop(SQUARE, 2)
        moved = split.model_copy(update={"cuts": [0.26, 0.5, 0.75]})
        checks = by_name(check_loop_split(SQUARE, moved, 1e-9))
        assert not checks["closure[1]"].passed
        assert checks["closure[1]"].residual == pytest.approx(0.04, rel=1e-9)

    def test_missing_interval(self):
        split = split_loop(SQUARE, 2)
        broken = split.model_copy(update={"groups": [[1, 3], [2]]})
        report = check_loop_split(SQUARE, broken, 1e-9)
        assert not report.verdict
        assert [c.check for c in report.failures()] == ["partition"]

    def test_out_of_range_cut(self):
        split = split_loop(SQUARE, 2)
        bad = split.model_copy(update={"cuts": [0.25, 0.5, 1.2]})
        report = check_loop_split(SQUARE, bad, 1e-9)
        assert [c.check for c in report.failures()] == ["range"]

    def test_rainbow_clash(self):
        split = split_loop(SQUARE, 2).model_copy(update={"colors": [[1, 3], [2], [4]]})
        checks = by_name(check_loop_split(SQUARE, split, 1e-9))
        assert checks["rainbow"].residual == 1.0
        assert not checks["rainbow"].passed


# ---------------------------------------------------------------------------
# TestDiscreteOracle
# ---------------------------------------------------------------------------


class TestDiscreteOracle:
    """Exhaustive search and rounding of continuous cuts."""

    def test_two_blocks(self):
        division = brute_force_discrete_split("aabb", 2)
        assert division == DiscreteDivision(cuts=[1, 3], labels=[0, 1, 0], r=2)

    def test_interleaved_needs_one_cut(self):
        division = brute_force_discrete_split("abab", 2)
        assert division.cuts == [2]

    def test_three_thieves(self):
        division = brute_force_discrete_split("aaa", 3)
        assert division.cut_count == 2
        assert is_fair_division(division, "aaa")

    def test_empty_string(self):
        assert brute_force_discrete_split("", 2).cut_count == 0

    def test_uneven_counts(self):
        with pytest.raises(DomainError, match="not divisible"):
            brute_force_discrete_split("aab", 2)

    def test_too_many_beads(self):
        with pytest.raises(ResourceError):
            brute_force_discrete_split("ab" * 13, 2)

    def test_round_nearest(self):
        config = SplitConfiguration(cuts=[0.625], labels=[0, 1], r=2)
        assert round_to_beads(config, "abab").cuts == [2]

    def test_round_falls_back(self):
        config = SplitConfiguration(cuts=[0.375], labels=[0, 1], r=2)
        assert round_to_beads(config, "abab").cuts == [2]

    def test_round_without_fair_choice(self):
        config = SplitConfiguration(cuts=[0.5], labels=[0, 1], r=2)
        assert round_to_beads(config, "aabb") is None

    def test_sweep_small_strings(self):
        strings = list(even_strings(8))
        assert len(strings) == 170
        for beads in strings:
            oracle_agrees(beads)

    @pytest.mark.slow
    def test_sweep_up_to_twelve(self):
        for beads in even_strings(12):
            oracle_agrees(beads)


# ---------------------------------------------------------------------------
# TestDensityProbe
# ---------------------------------------------------------------------------


class TestDensityProbe:
    """One finder run per disjoint window."""

    def test_grid(self):
        assert window_grid(4) == [(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)]

    def test_circle_windows(self):
        circle = builtin_curve("circle", samples=256)
        report = density_probe(circle, window_grid(4))
        assert report.verdict
        assert [c.check for c in report.checks][0] == "window(0,0.25)"

    def test_async_matches_serial(self):
        circle = builtin_curve("circle", samples=256)
        windows = window_grid(3)
        serial = density_probe(circle, windows, finder="rectangle")
        concurrent = asyncio.run(density_probe_async(circle, windows, finder="rectangle"))
        assert concurrent.to_list() == serial.to_list()

    def test_overlapping_windows(self):
        with pytest.raises(ContractError, match="overlap"):
            density_probe(SQUARE, [(0.0, 0.5), (0.4, 0.6)])

    def test_no_windows(self):
        assert density_probe(SQUARE, []).verdict is True
