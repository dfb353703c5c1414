"""Subsets of [m] = {1, ..., m} stored as Python ints.

Element i lives in bit i - 1. Python ints are unbounded, so the same code
serves every universe size.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"element {e} is not a positive integer")
        mask |= 1 << (e - 1)
    return mask


def elements(mask: int) -> tuple[int, ...]:
    """Ascending 1-based elements of ``mask``."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def bit(e: int) -> int:
    return 1 << (e - 1)


def full(m: int) -> int:
    return (1 << m) - 1


def lowest(mask: int) -> int:
    """Smallest element of a nonempty mask."""
    return (mask & -mask).bit_length()


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def between(lower: int, upper: int, max_size: int | None = None) -> Iterator[int]:
    """Masks X with lower <= X <= upper (as sets), ordered by size then lexicographically."""
    if lower & ~upper:
        return
    free = elements(upper & ~lower)
    base = popcount(lower)
    top = len(free) if max_size is None else min(len(free), max_size - base)
    for k in range(top + 1):
        for extra in combinations(free, k):
            yield lower | to_mask(extra)


def canonical_subsets(n: int) -> list[int]:
    """All subsets of [n] sorted by size, then lexicographically by elements."""
    out = []
    for k in range(n + 1):
        for combo in combinations(range(1, n + 1), k):
            out.append(to_mask(combo))
    return out


def format_set(mask: int) -> str:
    return ",".join(str(e) for e in elements(mask))


def parse_set(text: str) -> int:
    text = text.strip()
    if not text:
        return 0
    return to_mask(int(t) for t in text.split(","))
