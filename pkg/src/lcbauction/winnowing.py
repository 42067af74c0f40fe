"""Per-item winnowing of potential winners.

For each item, the bidder whose interval has the largest upper bound leads;
only bidders whose upper bound strictly exceeds the leader's lower bound
stay in the running.  Everyone else is neglected and never queried.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import IntervalMatrix


@dataclass
class WinnowResult:
    kept_mask: np.ndarray  # bool (m, N); True = bidder still in the running
    leaders: np.ndarray  # int (N,); index of the largest-upper-bound bidder
    neglected_count: int

    @property
    def kept_sets(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.kept_mask[:, j]) for j in range(self.kept_mask.shape[1])]


def find_leader(lowers, uppers) -> int:
    """Index of the bidder with the maximal upper bound (ties: lowest index)."""
    uppers = np.asarray(uppers, dtype=float)
    if uppers.size == 0:
        raise ValueError("need at least one interval")
    return int(np.argmax(uppers))


def is_linked(a: tuple[float, float], b: tuple[float, float]) -> bool:
    """Whether [aL, aU) and (bL, bU] intersect."""
    a_lo, a_up = a
    b_lo, b_up = b
    lo = max(a_lo, b_lo)
    up = min(a_up, b_up)
    if lo < up:
        return True
    # A single-point intersection only counts where both ends are closed:
    # at aL (closed) meeting bU (closed).
    return lo == up and b_lo < lo and a_up > up


def winnow(intervals: IntervalMatrix) -> WinnowResult:
    """Keep, per item, the bidders linked to the leader.

    Executable form of the linked relation: bidder i stays iff
    upper[i, j] > lower[leader, j].  The leader always stays.
    """
    m, N = intervals.num_bidders, intervals.num_items
    kept = np.zeros((m, N), dtype=bool)
    leaders = np.empty(N, dtype=int)
    for j in range(N):
        leader = find_leader(intervals.lower[:, j], intervals.upper[:, j])
        leaders[j] = leader
        kept[:, j] = intervals.upper[:, j] > intervals.lower[leader, j]
        kept[leader, j] = True
    return WinnowResult(kept, leaders, int(m * N - kept.sum()))


def zero_neglected(intervals: IntervalMatrix, result: WinnowResult) -> IntervalMatrix:
    """Copy of ``intervals`` with neglected pairs zeroed out."""
    lower = np.where(result.kept_mask, intervals.lower, 0.0)
    upper = np.where(result.kept_mask, intervals.upper, 0.0)
    return IntervalMatrix(lower, upper, alpha=intervals.alpha, sampling_count=intervals.sampling_count)
