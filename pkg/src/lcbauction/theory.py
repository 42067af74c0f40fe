"""Exact counting of separate-or-pair allocations.

When every bundle holds at most two items, the number of ways to
partition N items into bundles grows exponentially; this module computes
the exact count and its closed-form lower bound (2N/3)^floor(N/3) in
arbitrary-precision arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass
class AllocationCount:
    num_items: int
    exact: int
    lower_bound: int


def count_allocations_leq2(N: int) -> int:
    """1 + sum over i of N! / ((N - 2i)! * i! * 2^i) for i = 1..floor(N/2).

    The i-th term counts partitions with exactly i two-item bundles; the
    leading 1 is the all-singletons allocation.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    total = 1
    for i in range(1, N // 2 + 1):
        total += math.factorial(N) // (math.factorial(N - 2 * i) * math.factorial(i) * 2**i)
    return total


def allocation_lower_bound(N: int) -> int:
    """floor((2N/3)^floor(N/3)), computed exactly via rationals."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    exponent = N // 3
    return math.floor(Fraction(2 * N, 3) ** exponent)


def allocation_table(max_items: int) -> list[AllocationCount]:
    return [
        AllocationCount(n, count_allocations_leq2(n), allocation_lower_bound(n))
        for n in range(1, max_items + 1)
    ]
