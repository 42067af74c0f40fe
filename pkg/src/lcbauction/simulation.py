"""Synthetic auction worlds and the three-method comparison harness.

A world holds, per bidder-item pair, a Gaussian value distribution
truncated to the item's value window, one realized true type, and a
simulated bid history.  The harness runs the full pipeline (Method 1),
the pipeline without winnowing (Method 2), or sample-range intervals in
place of density estimation (Method 3), and records revenue, regret, and
query metrics across a sweep of the length threshold d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .data import HistoricalDataset, IntervalMatrix
from .errors import SamplingError
from .estimation import estimate_all_intervals
from .mechanism import (
    Provenance,
    at_risk_items,
    allocate_vcg,
    classify_and_estimate,
    compute_n_star,
    refined_regret_bound,
)
from .seeding import TAG_DISTRIBUTION_PARAMS, TAG_HISTORY, TAG_TRUE_TYPES, stream
from .winnowing import WinnowResult, winnow, zero_neglected

METHOD1 = "Method1"  # density estimation + winnowing + threshold mechanism
METHOD2 = "Method2"  # density estimation, no winnowing
METHOD3 = "Method3"  # sample min/max intervals + winnowing
METHODS = (METHOD1, METHOD2, METHOD3)

# Proposal cap for a single truncated-Gaussian sample batch.
_TRUNC_CAP = 1_000_000


@dataclass
class ScenarioConfig:
    num_bidders: int
    num_items: int
    history_size: int = 50
    alpha: float = 0.01
    eta: float = 0.9
    sampling_count: int = 1000
    master_seed: int = 0
    d_sweep: list[float] | str = "auto"
    method: str = "all"
    accepted_loss: float = 0.0

    def __post_init__(self):
        if self.num_bidders < 2:
            raise ValueError("num_bidders must be at least 2")
        if self.num_items < 1:
            raise ValueError("num_items must be at least 1")
        if self.history_size < 1:
            raise ValueError("history_size must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")
        if self.sampling_count < 1:
            raise ValueError("sampling_count must be positive")
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")
        if self.accepted_loss < 0:
            raise ValueError("accepted_loss must be nonnegative")
        if self.method not in METHODS + ("all",):
            raise ValueError(f"method must be one of {METHODS + ('all',)}")
        if isinstance(self.d_sweep, str):
            if self.d_sweep != "auto":
                raise ValueError('d_sweep must be "auto" or a list of nonnegative reals')
        else:
            self.d_sweep = [float(d) for d in self.d_sweep]
            if any(d < 0 for d in self.d_sweep):
                raise ValueError("d_sweep values must be nonnegative")


@dataclass
class TrueWorld:
    config: ScenarioConfig
    means: np.ndarray  # (m, N) Gaussian location per pair
    sds: np.ndarray  # (m, N) Gaussian scale per pair
    true_types: np.ndarray  # (m, N) one realized valuation per pair
    history: HistoricalDataset

    @property
    def item_lower(self) -> np.ndarray:
        return self.history.lower_bounds

    @property
    def item_upper(self) -> np.ndarray:
        return self.history.upper_bounds


def sample_truncated_gaussian(
    mean: float,
    sd: float,
    bounds: tuple[float, float],
    size: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Rejection sampling of N(mean, sd) restricted to [a, b]."""
    a, b = bounds
    out = np.empty(size)
    filled = 0
    proposed = 0
    while filled < size:
        if proposed >= _TRUNC_CAP:
            raise SamplingError(
                f"truncated Gaussian sampling exceeded {_TRUNC_CAP} proposals "
                f"(mean={mean}, sd={sd}, bounds={bounds})"
            )
        chunk = min(max((size - filled) * 4, 64), _TRUNC_CAP - proposed)
        x = rng.normal(mean, sd, chunk)
        keep = x[(x >= a) & (x <= b)]
        take = min(keep.size, size - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
        proposed += chunk
    return out


def generate_world(config: ScenarioConfig, master_seed: int | None = None) -> TrueWorld:
    """Draw distributions, true types, and bid histories for one world.

    Item j's value window is [10(j-1), 10j]; the pair distribution is a
    Gaussian with mean uniform on the window and variance 10^x,
    x ~ Unif[-1, 1], truncated to the window.  Every random draw has its
    own (seed, tag, i, j) stream, so the world is reproducible and the
    same regardless of generation order.
    """
    seed = config.master_seed if master_seed is None else master_seed
    m, N = config.num_bidders, config.num_items
    a = 10.0 * np.arange(N)
    b = 10.0 * (np.arange(N) + 1)
    means = np.empty((m, N))
    sds = np.empty((m, N))
    true_types = np.empty((m, N))
    samples: list[list[np.ndarray]] = []
    for i in range(m):
        row = []
        for j in range(N):
            bounds = (float(a[j]), float(b[j]))
            prng = stream(seed, TAG_DISTRIBUTION_PARAMS, i, j)
            means[i, j] = prng.uniform(*bounds)
            sds[i, j] = math.sqrt(10.0 ** prng.uniform(-1.0, 1.0))
            trng = stream(seed, TAG_TRUE_TYPES, i, j)
            true_types[i, j] = sample_truncated_gaussian(means[i, j], sds[i, j], bounds, 1, trng)[0]
            hrng = stream(seed, TAG_HISTORY, i, j)
            row.append(
                sample_truncated_gaussian(means[i, j], sds[i, j], bounds, config.history_size, hrng)
            )
        samples.append(row)
    history = HistoricalDataset(m, N, samples, a, b)
    return TrueWorld(config, means, sds, true_types, history)


def sample_range_intervals(history: HistoricalDataset, alpha: float) -> IntervalMatrix:
    """Method 3 intervals: [min of the bid history, max of the bid history]."""
    m, N = history.num_bidders, history.num_items
    lower = np.empty((m, N))
    upper = np.empty((m, N))
    for i in range(m):
        for j in range(N):
            lower[i, j] = history.samples[i][j].min()
            upper[i, j] = history.samples[i][j].max()
    return IntervalMatrix(lower, upper, alpha=alpha)


@dataclass
class MethodState:
    """One method's frozen view of a world, reusable across a d-sweep."""

    world: TrueWorld
    method: str
    intervals: IntervalMatrix  # pre-winnow intervals
    winnow_result: WinnowResult
    intervals_zeroed: IntervalMatrix
    true_revenue: float
    seed: int

    @property
    def m_star(self) -> int:
        return self.winnow_result.neglected_count

    @property
    def neglected_mask(self) -> np.ndarray:
        return ~self.winnow_result.kept_mask

    @property
    def n_star(self) -> int:
        cfg = self.world.config
        cap = cfg.num_bidders * cfg.num_items - self.m_star
        return compute_n_star(cfg.alpha, cfg.eta, cap)


@dataclass
class SweepRecord:
    seed: int
    method: str
    d: float
    revenue: float
    regret: float
    kd: float
    refined_regret: float
    n: int  # count of lower-bound (type II) estimates among survivors
    m_star: int
    k: int
    prop_no_query: float
    conf_rate_paper: float
    conf_rate_theorem: float
    queries_made: int = 0


def prepare_method(
    world: TrueWorld,
    method: str,
    intervals: IntervalMatrix | None = None,
    master_seed: int | None = None,
) -> MethodState:
    """Estimate (or construct) intervals and winnow once for a method.

    ``intervals`` lets Methods 1 and 2 share one estimation pass; Method 3
    ignores it and always uses sample ranges.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    cfg = world.config
    seed = cfg.master_seed if master_seed is None else master_seed
    if method == METHOD3:
        intervals = sample_range_intervals(world.history, cfg.alpha)
    elif intervals is None:
        intervals = estimate_all_intervals(
            world.history, cfg.alpha, cfg.sampling_count, master_seed=seed
        )
    if method == METHOD2:
        m, N = cfg.num_bidders, cfg.num_items
        kept = np.ones((m, N), dtype=bool)
        leaders = np.array(
            [int(np.argmax(intervals.upper[:, j])) for j in range(N)], dtype=int
        )
        result = WinnowResult(kept, leaders, 0)
    else:
        result = winnow(intervals)
    zeroed = zero_neglected(intervals, result)
    true_revenue = allocate_vcg(world.true_types).revenue
    return MethodState(world, method, intervals, result, zeroed, true_revenue, seed)


def run_at_d(state: MethodState, d: float) -> SweepRecord:
    """Classify at threshold d, allocate, and collect all sweep metrics."""
    cfg = state.world.config
    m, N = cfg.num_bidders, cfg.num_items
    oracle = lambda i, j: state.world.true_types[i, j]
    estimates = classify_and_estimate(state.intervals_zeroed, state.neglected_mask, d, oracle)
    outcome = allocate_vcg(estimates.values)
    risk = at_risk_items(state.intervals_zeroed, d)
    n = estimates.type2_count
    alpha = cfg.alpha
    return SweepRecord(
        seed=state.seed,
        method=state.method,
        d=float(d),
        revenue=outcome.revenue,
        regret=state.true_revenue - outcome.revenue,
        kd=len(risk) * float(d),
        refined_regret=refined_regret_bound(state.intervals_zeroed, d, risk),
        n=n,
        m_star=state.m_star,
        k=len(risk),
        prop_no_query=(state.m_star + n) / (m * N),
        conf_rate_paper=(1.0 - alpha) ** n,
        conf_rate_theorem=(1.0 - alpha / 2.0) ** n,
        queries_made=estimates.queries_made,
    )


def run_method(
    world: TrueWorld,
    d: float,
    method: str = METHOD1,
    intervals: IntervalMatrix | None = None,
) -> SweepRecord:
    return run_at_d(prepare_method(world, method, intervals=intervals), d)


def auto_d_grid(state: MethodState) -> list[float]:
    """0 plus the distinct positive interval lengths of the surviving pairs.

    All sweep metrics are step functions of d with breakpoints exactly at
    the realized lengths, so this grid captures every distinct outcome.
    """
    lengths = np.unique(state.intervals_zeroed.lengths)
    return [0.0] + [float(v) for v in lengths if v > 0.0]


def sweep(state: MethodState, d_values: list[float] | str = "auto") -> list[SweepRecord]:
    """One record per threshold, in nondecreasing d order."""
    if isinstance(d_values, str):
        if d_values != "auto":
            raise ValueError('d_values must be "auto" or a list')
        grid = auto_d_grid(state)
    else:
        grid = sorted(float(d) for d in d_values)
        if not grid:
            raise ValueError("d_values must be nonempty")
    return [run_at_d(state, d) for d in grid]
