"""Exception hierarchy for the necklace splitting toolkit.

Every exception converts to a structured ``SplitError`` model via ``to_error()``
so front ends can report failures uniformly:
- input: the caller handed us something invalid (bad curve, bad params)
- convergence: the numerical search ran out of budget (never nonexistence)
- resource: an exhaustive search was asked to do too much
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Literal

from .models import SplitError

if TYPE_CHECKING:
    from .models import ResidualReport, SplitConfiguration


class SplitterError(Exception):
    """Base class for all toolkit errors."""

    error_type: Literal["input", "convergence", "resource"] = "input"
    error_code: str = "splitter_error"
    retriable: bool = False

    def to_error(self) -> SplitError:
        """Convert to the structured error model."""
        return SplitError(
            error_type=self.error_type,
            error_code=self.error_code,
            message=str(self),
            retriable=self.retriable,
        )


class InvalidCurveError(SplitterError, ValueError):
    """Too few points, mixed dimensions, or zero total length."""

    error_code = "invalid_curve"


class DomainError(SplitterError, ValueError):
    """A parameter lies outside the domain of an operation."""

    error_code = "domain_error"


class ContractError(SplitterError, ValueError):
    """A precondition on shapes or geometry was violated."""

    error_code = "contract_error"


class ConstraintError(SplitterError, ValueError):
    """A color constraint is malformed or cannot be satisfied."""

    error_code = "constraint_error"


class InputFileError(SplitterError, ValueError):
    """An input file is missing, unreadable, or not valid JSON of the right shape."""

    error_code = "bad_input_file"


class ResourceError(SplitterError):
    """An exhaustive search exceeds its size limit."""

    error_type = "resource"
    error_code = "instance_too_large"


class NonConvergenceError(SplitterError, RuntimeError):
    """The solver exhausted its budget without reaching the tolerance.

    Carries the best configuration seen and its residual report. This is a
    numerical failure: a fair splitting exists, the search did not find it.
    """

    error_type = "convergence"
    error_code = "non_convergence"
    retriable = True

    def __init__(
        self,
        message: str,
        best: SplitConfiguration | None = None,
        report: ResidualReport | None = None,
    ) -> None:
        super().__init__(message)
        self.best = best
        self.report = report
