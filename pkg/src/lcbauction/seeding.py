"""Deterministic per-component random streams.

Every stochastic step draws from its own generator derived from the master
seed plus an integer path (purpose tag, bidder index, item index).  Streams
are therefore independent of evaluation order, which keeps results
bit-reproducible even if pairs are processed in parallel.
"""

from __future__ import annotations

import numpy as np

# Purpose tags for derived streams.
TAG_DISTRIBUTION_PARAMS = 0
TAG_TRUE_TYPES = 1
TAG_HISTORY = 2
TAG_ESTIMATION = 3


def stream(master_seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream identified by ``(master_seed, *path)``."""
    if master_seed < 0:
        raise ValueError("master seed must be nonnegative")
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, path)]))
