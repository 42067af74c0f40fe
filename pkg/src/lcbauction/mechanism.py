"""Interval classification, threshold tuning, and VCG allocation.

Pairs whose interval is short enough (length <= d) take the interval's
lower bound as their estimated type without a query; longer intervals are
resolved by querying the bidder's true value; pairs removed by winnowing
are zeroed.  Items are sold separately under second-price rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable

import numpy as np

from .data import IntervalMatrix


class Provenance(IntEnum):
    NEGLECTED = 0  # removed by winnowing; value zeroed, never queried
    TYPE_I = 1  # queried true value
    TYPE_II = 2  # interval lower bound used in place of a query


@dataclass
class EstimatedTypes:
    values: np.ndarray  # (m, N) estimated types
    provenance: np.ndarray  # (m, N) Provenance codes
    threshold: float

    @property
    def queries_made(self) -> int:
        return int((self.provenance == Provenance.TYPE_I).sum())

    @property
    def type2_count(self) -> int:
        return int((self.provenance == Provenance.TYPE_II).sum())

    @property
    def neglected_count(self) -> int:
        return int((self.provenance == Provenance.NEGLECTED).sum())


@dataclass
class AuctionOutcome:
    winners: np.ndarray  # (N,) winning bidder per item
    payments: np.ndarray  # (N,) second-highest estimated bid per item
    revenue: float
    regret: float = math.nan
    theoretical_regret: float = math.nan
    refined_regret: float = math.nan
    queries_made: int = 0
    at_risk_items: frozenset = field(default_factory=frozenset)

    @property
    def at_risk_count(self) -> int:
        return len(self.at_risk_items)


def compute_n_star(alpha: float, eta: float, cap: int) -> int:
    """Largest count of lower-bound estimates keeping confidence >= eta.

    floor(log(eta) / log(1 - alpha/2)), capped by ``cap`` and at least 0.
    Flooring keeps (1 - alpha/2)^n >= eta strict.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    if eta == 1.0:
        bound = 0
    else:
        bound = math.floor(math.log(eta) / math.log(1.0 - alpha / 2.0))
    return max(0, min(bound, int(cap)))


def at_risk_items(intervals: IntervalMatrix, d: float) -> frozenset[int]:
    """Items with at least one positive-length interval of length <= d.

    Only these items can lose revenue to lower-bound estimates; queried
    pairs are exact and zero-length pairs cannot undershoot by more than 0.
    """
    lengths = intervals.lengths
    mask = (lengths > 0.0) & (lengths <= d)
    return frozenset(int(j) for j in np.flatnonzero(mask.any(axis=0)))


def tune_d(
    intervals: IntervalMatrix,
    n_star: int,
    m_star: int,
    q: float,
) -> tuple[float, frozenset[int], int]:
    """Pick the interval-length threshold d by the oscillation rule.

    Walk an index M over the ascending length list (starting at
    n_star + m_star, so the n_star shortest surviving intervals are
    admitted first).  At each step set d to the M-th smallest length; if
    the worst-case revenue loss k*d exceeds the accepted loss q, step
    down, else step up.  k*d is nondecreasing along the list, so the walk
    settles into a two-point oscillation; the returned d is the last value
    with k*d <= q.  M is clamped to [0, m*N]; M = 0 means d = 0.
    """
    if q < 0:
        raise ValueError("accepted loss q must be nonnegative")
    lengths_sorted = np.sort(intervals.lengths, axis=None)
    total = lengths_sorted.size

    def d_at(idx: int) -> float:
        return 0.0 if idx == 0 else float(lengths_sorted[idx - 1])

    M = min(max(int(n_star) + int(m_star), 0), total)
    seen: set[int] = set()
    d_minus = 0.0
    while True:
        d = d_at(M)
        k = len(at_risk_items(intervals, d))
        ascend = k * d <= q
        if ascend:
            d_minus = d
        if M in seen:
            # Revisiting an index means the walk is oscillating around the
            # boundary; settle on the last admissible d.
            break
        seen.add(M)
        nxt = M + 1 if ascend else M - 1
        if nxt < 0 or nxt > total:
            # Clamp boundary: keep the boundary d.
            d_minus = d if ascend else d_minus
            break
        M = nxt
    risk = at_risk_items(intervals, d_minus)
    return d_minus, risk, len(risk)


def classify_and_estimate(
    intervals: IntervalMatrix,
    neglected_mask: np.ndarray,
    d: float,
    true_type_oracle: Callable[[int, int], float],
) -> EstimatedTypes:
    """Build the estimated type matrix at threshold ``d``.

    Neglected pairs get 0 without a query; surviving pairs with interval
    length <= d take the lower bound (type II, includes zero-length
    survivors); the rest are queried for their true value (type I).
    """
    if d < 0:
        raise ValueError("threshold d must be nonnegative")
    m, N = intervals.num_bidders, intervals.num_items
    neglected_mask = np.asarray(neglected_mask, dtype=bool)
    if neglected_mask.shape != (m, N):
        raise ValueError("neglected mask shape must match the interval matrix")
    values = np.zeros((m, N))
    provenance = np.full((m, N), Provenance.NEGLECTED, dtype=np.int8)
    lengths = intervals.lengths
    type2 = ~neglected_mask & (lengths <= d)
    type1 = ~neglected_mask & (lengths > d)
    values[type2] = intervals.lower[type2]
    provenance[type2] = Provenance.TYPE_II
    provenance[type1] = Provenance.TYPE_I
    for i, j in zip(*np.nonzero(type1)):
        try:
            values[i, j] = float(true_type_oracle(int(i), int(j)))
        except Exception as exc:
            raise RuntimeError(f"query failed for pair (bidder={i}, item={j}): {exc}") from exc
    return EstimatedTypes(values, provenance, float(d))


def allocate_vcg(values: np.ndarray) -> AuctionOutcome:
    """Second-price sale of each item separately.

    Winner per item is the highest estimated bid (lowest index on ties);
    the payment is the highest bid among the other bidders.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] < 2:
        raise ValueError("need a 2-d bid matrix with at least two bidders")
    winners = np.argmax(values, axis=0)
    N = values.shape[1]
    payments = np.empty(N)
    for j in range(N):
        others = np.delete(values[:, j], winners[j])
        payments[j] = others.max()
    return AuctionOutcome(winners=winners, payments=payments, revenue=float(payments.sum()))


def refined_regret_bound(intervals: IntervalMatrix, d: float, risk: frozenset[int]) -> float:
    """Sum over at-risk items of the longest admitted interval length."""
    lengths = intervals.lengths
    total = 0.0
    for j in risk:
        col = lengths[:, j]
        admitted = col[(col > 0.0) & (col <= d)]
        if admitted.size:
            total += float(admitted.max())
    return total


def compute_regret(
    true_types: np.ndarray,
    estimates: EstimatedTypes,
    intervals: IntervalMatrix,
) -> tuple[float, float, float]:
    """(regret, k*d bound, per-item refined bound).

    Regret is full-information second-price revenue on the true types
    minus revenue on the estimated types.
    """
    d = estimates.threshold
    risk = at_risk_items(intervals, d)
    true_revenue = allocate_vcg(np.asarray(true_types, dtype=float)).revenue
    est_revenue = allocate_vcg(estimates.values).revenue
    return true_revenue - est_revenue, len(risk) * d, refined_regret_bound(intervals, d, risk)


def run_mechanism(
    intervals_zeroed: IntervalMatrix,
    neglected_mask: np.ndarray,
    m_star: int,
    true_type_oracle: Callable[[int, int], float],
    alpha: float,
    eta: float,
    q: float,
    true_types: np.ndarray | None = None,
) -> AuctionOutcome:
    """Tune d, classify, allocate, and account for queries in one pass."""
    m, N = intervals_zeroed.num_bidders, intervals_zeroed.num_items
    n_star = compute_n_star(alpha, eta, m * N - int(m_star))
    d, risk, k = tune_d(intervals_zeroed, n_star, m_star, q)
    estimates = classify_and_estimate(intervals_zeroed, neglected_mask, d, true_type_oracle)
    outcome = allocate_vcg(estimates.values)
    outcome.queries_made = estimates.queries_made
    outcome.at_risk_items = risk
    outcome.theoretical_regret = k * d
    outcome.refined_regret = refined_regret_bound(intervals_zeroed, d, risk)
    if true_types is not None:
        outcome.regret = allocate_vcg(np.asarray(true_types, dtype=float)).revenue - outcome.revenue
    return outcome
