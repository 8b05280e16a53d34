"""split-necklace, split-loop, inscribe and verify commands.

Each command declares its flags and turns parsed arguments into a
CommandResult: the exit code plus the JSON document to write. Library
errors become structured error payloads; the exit code follows the error
type (input 1, convergence 2) and a failed verification exits 3.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass
from typing import Any

from pydantic import ValidationError

from necklace_split.errors import ContractError, DomainError, NonConvergenceError, SplitterError
from necklace_split.formats import (
    load_colors_file,
    load_curve_file,
    load_loop_result,
    load_problem_file,
    load_split_result,
)
from necklace_split.geometry import (
    find_anchored_parallelogram,
    find_balanced_rectangle,
    find_parallelogram,
    find_rectangle,
    split_loop,
    split_loop_colored,
)
from necklace_split.models import LoopSplit, ResidualReport, SolverOptions, SplitConfiguration
from necklace_split.plotting import plot_loop_split, plot_quadrilateral
from necklace_split.splitter import DEFAULT_TOLERANCE, solve_colored, solve_split
from necklace_split.verify import check_loop_split, check_split

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NON_CONVERGENCE = 2
EXIT_VERIFY_FAILED = 3

SHAPES = ("parallelogram", "rectangle", "balanced-rectangle", "anchored-parallelogram")


@dataclass
class CommandResult:
    """Outcome of one command: exit code, JSON output, structured error."""

    exit_code: int
    output: Any = None
    error: dict[str, Any] | None = None


def exit_code_for(exc: SplitterError) -> int:
    return EXIT_NON_CONVERGENCE if exc.error_type == "convergence" else EXIT_INPUT


def parse_window(text: str) -> tuple[float, float]:
    """'X,Y' -> (x, y)."""
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"window must be 'X,Y', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise DomainError(f"window must be two reals, got {text!r}") from exc


def solver_options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions(
        starts=args.starts, max_iterations=args.max_iter, seed=args.seed, workers=args.workers
    )


def _split_output(
    config: SplitConfiguration, report: ResidualReport, converged: bool, colored: bool = False
) -> dict[str, Any]:
    data: dict[str, Any] = {
        "converged": converged,
        "cuts": config.cuts,
        "parts": config.parts,
        "max_deviation": report.max_deviation,
        "part_sums": report.part_sums,
    }
    if colored:
        data["existence_guaranteed"] = report.existence_guaranteed
    return data


def _not_converged(exc: NonConvergenceError, colored: bool = False) -> CommandResult:
    output = None
    if exc.best is not None and exc.report is not None:
        output = _split_output(exc.best, exc.report, converged=False, colored=colored)
    return CommandResult(EXIT_NON_CONVERGENCE, output=output, error=exc.to_error().to_dict())


class SplitNecklaceCommand:
    """Fair split of the features in a problem file."""

    name = "split-necklace"
    description = "Split the features of a problem file into r parts with equal increments."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--problem", required=True, help="problem file (JSON)")

    def execute(self, args: argparse.Namespace) -> CommandResult:
        problem = load_problem_file(args.problem, tolerance=args.tol)
        colored = problem.colors is not None
        solve = solve_colored if colored else solve_split
        try:
            config, report = solve(problem, solver_options(args))
        except NonConvergenceError as exc:
            return _not_converged(exc, colored)
        return CommandResult(EXIT_OK, output=_split_output(config, report, True, colored))


class SplitLoopCommand:
    """Equal-length loops from the pieces of a closed curve."""

    name = "split-loop"
    description = "Cut a closed curve into r groups of pieces that translate into loops of length L/r."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--curve", required=True, help="curve file (JSON)")
        parser.add_argument("--r", type=int, required=True, help="number of loops")
        parser.add_argument("--colors", help="color blocks file (JSON)")

    def execute(self, args: argparse.Namespace) -> CommandResult:
        curve = load_curve_file(args.curve)
        tol = args.tol if args.tol is not None else DEFAULT_TOLERANCE
        options = solver_options(args)
        try:
            if args.colors:
                colors = load_colors_file(args.colors)
                split: LoopSplit = split_loop_colored(curve, args.r, colors, tol, options)
            else:
                split = split_loop(curve, args.r, tol, options)
        except NonConvergenceError as exc:
            return _not_converged(exc, colored=bool(args.colors))
        if args.svg:
            plot_loop_split(curve, split, args.svg)
        return CommandResult(EXIT_OK, output={"converged": True, **split.to_dict()})


class InscribeCommand:
    """Inscribed parallelograms and rectangles."""

    name = "inscribe"
    description = "Find a parallelogram or rectangle inscribed in a closed curve."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--curve", required=True, help="curve file (JSON)")
        parser.add_argument("--shape", choices=SHAPES, default="parallelogram")
        parser.add_argument("--window", default="0,1", help="parameter window X,Y with X < Y")
        parser.add_argument("--anchor", type=float, default=0.0, help="vertex parameter (anchored shape)")

    def execute(self, args: argparse.Namespace) -> CommandResult:
        curve = load_curve_file(args.curve)
        tol = args.tol if args.tol is not None else DEFAULT_TOLERANCE
        options = solver_options(args)
        try:
            if args.shape == "parallelogram":
                quad = find_parallelogram(curve, parse_window(args.window), tol, options)
            elif args.shape == "rectangle":
                quad = find_rectangle(curve, parse_window(args.window), tol, options)
            elif args.shape == "balanced-rectangle":
                quad = find_balanced_rectangle(curve, tol, options)
            else:
                quad = find_anchored_parallelogram(curve, args.anchor, tol, options)
        except NonConvergenceError as exc:
            return CommandResult(EXIT_NON_CONVERGENCE, error=exc.to_error().to_dict())
        if args.svg:
            plot_quadrilateral(curve, quad, args.svg)
        return CommandResult(EXIT_OK, output={"converged": True, "shape": args.shape, **quad.to_dict()})


class VerifyCommand:
    """Re-check a result file against its problem or curve."""

    name = "verify"
    description = "Verify a necklace result against its problem, or a loop split against its curve."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--result", required=True, help="result file written by a split command")
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--problem", help="problem file of a necklace result")
        source.add_argument("--curve", help="curve file of a loop-split result")

    def execute(self, args: argparse.Namespace) -> CommandResult:
        if args.problem:
            problem = load_problem_file(args.problem, tolerance=args.tol)
            config = load_split_result(args.result)
            if config.n != problem.cut_count or config.r != problem.r:
                raise ContractError(
                    f"result has n={config.n}, r={config.r}; "
                    f"problem has n={problem.cut_count}, r={problem.r}"
                )
            report = check_split(problem.features, config, problem.resolved_tolerance)
        else:
            curve = load_curve_file(args.curve)
            split = load_loop_result(args.result)
            tol = args.tol if args.tol is not None else DEFAULT_TOLERANCE
            report = check_loop_split(curve, split, tol)
        for failure in report.failures():
            logger.warning("verify: %s failed (residual %.3e > %.1e)", failure.check, failure.residual, failure.tol)
        code = EXIT_OK if report.verdict else EXIT_VERIFY_FAILED
        return CommandResult(code, output=report.to_list())


COMMANDS = [SplitNecklaceCommand(), SplitLoopCommand(), InscribeCommand(), VerifyCommand()]


def run(command: Any, args: argparse.Namespace) -> CommandResult:
    """Execute a command, mapping library and validation errors to exit codes."""
    try:
        return command.execute(args)
    except SplitterError as exc:
        return CommandResult(exit_code_for(exc), error=exc.to_error().to_dict())
    except ValidationError as exc:
        return CommandResult(
            EXIT_INPUT,
            error={"error_type": "input", "error_code": "invalid_input", "message": str(exc), "retriable": False},
        )
