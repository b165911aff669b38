"""Exact counting and enumeration: binomials, integer partitions, and
treasure allocations over doors (set or multiset occupancy).

All quantities are arbitrary-precision integers or `fractions.Fraction`;
nothing in this package ever rounds.
"""

from __future__ import annotations

from math import comb, factorial
from typing import Iterator

SINGLE = "single"
MULTI = "multi"
OCCUPANCIES = (SINGLE, MULTI)

# A partition is a nonincreasing tuple of positive ints; an allocation is a
# tuple of per-door treasure counts.
Partition = tuple[int, ...]
Allocation = tuple[int, ...]


def binomial(n: int, r: int) -> int:
    """C(n, r); zero when r exceeds n."""
    if n < 0 or r < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return comb(n, r)


def count_allocations(n: int, d: int, occupancy: str = MULTI) -> int:
    """Number of ways to place d treasures behind n doors.

    Single occupancy allows at most one treasure per door, C(n, d).
    Multi occupancy allows repeats, the multiset count C(n + d - 1, d).
    """
    if n < 1:
        raise ValueError("need at least one door")
    if d < 0:
        raise ValueError("treasure count must be nonnegative")
    if occupancy == SINGLE:
        return comb(n, d)
    if occupancy == MULTI:
        return comb(n + d - 1, d)
    raise ValueError(f"unknown occupancy {occupancy!r}")


def iter_allocations(n: int, d: int, occupancy: str = MULTI) -> Iterator[Allocation]:
    """Yield all allocations in lexicographic order on count vectors."""
    if n < 1:
        raise ValueError("need at least one door")
    if occupancy not in OCCUPANCIES:
        raise ValueError(f"unknown occupancy {occupancy!r}")
    cap = 1 if occupancy == SINGLE else d

    def rec(prefix: list[int], left: int, doors_left: int) -> Iterator[Allocation]:
        if doors_left == 0:
            if left == 0:
                yield tuple(prefix)
            return
        if left > cap * doors_left:
            return
        for c in range(min(cap, left) + 1):
            prefix.append(c)
            yield from rec(prefix, left - c, doors_left - 1)
            prefix.pop()

    yield from rec([], d, n)


def enumerate_allocations(n: int, d: int, occupancy: str = MULTI) -> list[Allocation]:
    """All allocations exactly once, lexicographically ordered.

    The lexicographic order is the canonical order used everywhere for
    reproducible certificates and CSV output.
    """
    return list(iter_allocations(n, d, occupancy))


def enumerate_partitions(d: int, max_parts: int) -> list[Partition]:
    """All partitions of d into at most max_parts parts, largest part first."""
    if d < 1 or max_parts < 1:
        raise ValueError("d and max_parts must be positive")
    out: list[Partition] = []

    def rec(prefix: list[int], left: int, cap: int, slots: int) -> None:
        if left == 0:
            out.append(tuple(prefix))
            return
        if slots == 0:
            return
        for part in range(min(cap, left), 0, -1):
            prefix.append(part)
            rec(prefix, left - part, part, slots - 1)
            prefix.pop()

    rec([], d, d, max_parts)
    return out


def is_partition(seq) -> bool:
    """True when seq is a nonincreasing sequence of positive integers."""
    parts = tuple(seq)
    return all(isinstance(p, int) and p >= 1 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


def allocation_shape(allocation: Allocation) -> Partition:
    """The sorted positive counts of an allocation, its shape."""
    return tuple(sorted((c for c in allocation if c > 0), reverse=True))


def partition_weight(pi: Partition, n: int) -> int:
    """Number of allocations over n doors whose shape equals pi.

    Equals n! / (prod_c m_c! * (n - j)!) with j parts and m_c the
    multiplicity of part value c.
    """
    parts = tuple(pi)
    if not is_partition(parts):
        raise ValueError(f"{parts} is not a partition")
    j = len(parts)
    if j > n:
        raise ValueError(f"partition has {j} parts but only {n} doors exist")
    weight = factorial(n) // factorial(n - j)
    mult: dict[int, int] = {}
    for p in parts:
        mult[p] = mult.get(p, 0) + 1
    for m in mult.values():
        weight //= factorial(m)
    return weight
