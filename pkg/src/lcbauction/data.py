"""Shared containers for bid histories and interval matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class HistoricalDataset:
    """Per bidder-item bid samples with per-item value bounds.

    ``samples[i][j]`` holds the past bids of bidder ``i`` on item ``j``.
    ``lower_bounds[j] < upper_bounds[j]`` delimit the admissible value
    range for item ``j``; every sample must fall inside it.
    """

    num_bidders: int
    num_items: int
    samples: list  # samples[i][j] -> 1-d ndarray of bids
    lower_bounds: np.ndarray  # shape (num_items,)
    upper_bounds: np.ndarray  # shape (num_items,)

    def __post_init__(self):
        self.lower_bounds = np.asarray(self.lower_bounds, dtype=float)
        self.upper_bounds = np.asarray(self.upper_bounds, dtype=float)
        if self.num_bidders < 2:
            raise ValueError("need at least two bidders for a second price")
        if self.num_items < 1:
            raise ValueError("need at least one item")
        if self.lower_bounds.shape != (self.num_items,) or self.upper_bounds.shape != (self.num_items,):
            raise ValueError("bounds must have one entry per item")
        if not np.all(self.lower_bounds < self.upper_bounds):
            raise ValueError("each item needs lower bound < upper bound")
        if len(self.samples) != self.num_bidders:
            raise ValueError("samples must have one row per bidder")
        for i, row in enumerate(self.samples):
            if len(row) != self.num_items:
                raise ValueError(f"bidder {i}: expected {self.num_items} sample lists")
            for j in range(self.num_items):
                x = np.asarray(row[j], dtype=float)
                if x.ndim != 1 or x.size < 1:
                    raise ValueError(f"pair ({i}, {j}): need at least one sample")
                if np.any(x < self.lower_bounds[j]) or np.any(x > self.upper_bounds[j]):
                    raise ValueError(f"pair ({i}, {j}): sample outside item bounds")
                row[j] = x


@dataclass
class IntervalMatrix:
    """Per-pair confidence intervals ``[lower[i, j], upper[i, j]]``."""

    lower: np.ndarray
    upper: np.ndarray
    alpha: float
    sampling_count: int = 0

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.shape != self.upper.shape or self.lower.ndim != 2:
            raise ValueError("lower/upper must be matching 2-d matrices")
        if np.any(self.lower > self.upper):
            raise ValueError("interval lower bounds must not exceed upper bounds")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")

    @property
    def num_bidders(self) -> int:
        return self.lower.shape[0]

    @property
    def num_items(self) -> int:
        return self.lower.shape[1]

    @property
    def lengths(self) -> np.ndarray:
        return self.upper - self.lower
