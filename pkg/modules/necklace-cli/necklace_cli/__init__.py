"""necklace-split command line.

Provides 4 commands:
- split-necklace: fair split of a problem file's features
- split-loop: equal-length loops from a closed curve (optionally colored)
- inscribe: inscribed parallelogram, rectangle, balanced or anchored shapes
- verify: independent re-check of a result file

Exit codes: 0 ok, 1 bad input, 2 no convergence (best result still
written), 3 verification failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from necklace_split.formats import dump_json

from .commands import COMMANDS, EXIT_INPUT, CommandResult, run

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="necklace-split",
        description="Fair necklace splitting, loop splitting and inscribed quadrilaterals.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--svg", help="write an SVG figure here (curve commands)")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--seed", type=int, default=0, help="seed for the starting points")
    common.add_argument("--starts", type=int, default=32, help="starting points per labeling")
    common.add_argument("--max-iter", type=int, default=10_000, help="evaluations per local solve")
    common.add_argument("--workers", type=int, default=1, help="threads for the multi-start search")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command.name, parents=[common], help=command.description)
        command.add_arguments(p)
        p.set_defaults(handler=command)
    return parser


def _emit(result: CommandResult, out: str | None) -> None:
    if result.output is not None:
        try:
            text = dump_json(result.output, out)
        except OSError as exc:
            print(f"necklace-split: cannot write {out}: {exc}", file=sys.stderr)
            result.exit_code = EXIT_INPUT
            return
        if out is None:
            sys.stdout.write(text)
    if result.error is not None:
        print(f"necklace-split: {result.error['message']}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``necklace-split`` console script."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; bad flags are input errors here
        return EXIT_INPUT if exc.code else 0

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logger.debug("necklace-split: running %s", args.command)
    result = run(args.handler, args)
    _emit(result, args.out)
    return result.exit_code
