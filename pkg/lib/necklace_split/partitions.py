"""Canonical labelings of the intervals 1..n+1 into r nonempty parts.

Relabeling the parts permutes the part sums and leaves the deviation
unchanged, so one representative per orbit is enough: the part holding the
smallest not-yet-placed index takes the smallest unused label (a restricted
growth string). Color constraints prune labelings during generation.
"""

from __future__ import annotations

from collections.abc import Iterator

from .errors import ConstraintError, DomainError
from .models import ColorConstraint


def validate_constraint(constraint: ColorConstraint, n: int, r: int) -> None:
    """Check that the blocks partition 1..n+1 and each has at most r-1 members."""
    seen: set[int] = set()
    for number, block in enumerate(constraint.blocks, start=1):
        if not block:
            raise ConstraintError(f"color block C_{number} is empty")
        if len(block) > r - 1:
            raise ConstraintError(
                f"color block C_{number} has {len(block)} members; at most r-1 = {r - 1} allowed"
            )
        for index in block:
            if not 1 <= index <= n + 1:
                raise ConstraintError(f"color index {index} outside 1..{n + 1}")
            if index in seen:
                raise ConstraintError(f"color index {index} appears in two blocks")
            seen.add(index)
    if len(seen) != n + 1:
        missing = sorted(set(range(1, n + 2)) - seen)
        raise ConstraintError(f"color blocks must cover 1..{n + 1}; missing {missing}")


def enumerate_partitions(
    n: int, r: int, constraint: ColorConstraint | None = None
) -> Iterator[tuple[int, ...]]:
    """Yield one 0-based labeling per relabeling orbit, in lexicographic order.

    Only labelings that use all r labels are produced. With a constraint,
    labelings where some color block meets a part twice are skipped.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if r < 2:
        raise DomainError(f"r must be >= 2, got {r}")
    size = n + 1
    block_of: list[int] | None = None
    if constraint is not None:
        validate_constraint(constraint, n, r)
        mapping = constraint.block_of()
        block_of = [mapping[i] for i in range(1, size + 1)]

    labels = [0] * size
    # used[(block, label)] while building, for the rainbow rule
    used: set[tuple[int, int]] = set()

    def extend(position: int, highest: int) -> Iterator[tuple[int, ...]]:
        if position == size:
            if highest == r - 1:
                yield tuple(labels)
            return
        # remaining positions must still be able to open the missing labels
        if (r - 1 - highest) > size - position:
            return
        for label in range(min(highest + 1, r - 1) + 1):
            key = None
            if block_of is not None:
                key = (block_of[position], label)
                if key in used:
                    continue
                used.add(key)
            labels[position] = label
            yield from extend(position + 1, max(highest, label))
            if key is not None:
                used.discard(key)

    if size < r:
        return
    labels[0] = 0
    if block_of is not None:
        used.add((block_of[0], 0))
    yield from extend(1, 0)


def adjacent_repeats(labels: tuple[int, ...] | list[int]) -> int:
    """Number of neighbouring intervals sharing a part (mergeable cuts)."""
    return sum(1 for a, b in zip(labels, labels[1:]) if a == b)


def search_order(labelings: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Labelings with fewer mergeable neighbours first, lexicographic otherwise."""
    return sorted(labelings, key=lambda lab: (adjacent_repeats(lab), lab))


def is_rainbow(labels: list[int] | tuple[int, ...], constraint: ColorConstraint) -> bool:
    """True when every color block meets every part at most once."""
    for block in constraint.blocks:
        parts = [labels[i - 1] for i in block]
        if len(parts) != len(set(parts)):
            return False
    return True
