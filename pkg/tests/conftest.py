import numpy as np
import pytest

from lcbauction.data import HistoricalDataset


def make_dataset(samples_per_pair, lower, upper):
    """samples_per_pair[i][j] -> array-like of bids."""
    m = len(samples_per_pair)
    N = len(samples_per_pair[0])
    rows = [[np.asarray(samples_per_pair[i][j], dtype=float) for j in range(N)] for i in range(m)]
    return HistoricalDataset(m, N, rows, np.asarray(lower, float), np.asarray(upper, float))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
