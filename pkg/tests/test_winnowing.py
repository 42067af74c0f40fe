import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcbauction.data import IntervalMatrix
from lcbauction.winnowing import find_leader, is_linked, winnow, zero_neglected


def interval_matrix(lower, upper, alpha=0.05):
    return IntervalMatrix(np.asarray(lower, float), np.asarray(upper, float), alpha=alpha)


class TestFindLeader:
    def test_unique_max(self):
        assert find_leader([1.0, 2.0, 0.5], [3.0, 4.0, 1.5]) == 1

    def test_tie_takes_lowest_index(self):
        assert find_leader([0.0, 0.0], [4.0, 4.0]) == 0

    def test_single_bidder(self):
        assert find_leader([1.0], [2.0]) == 0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            find_leader([], [])


class TestIsLinked:
    def test_overlapping(self):
        assert is_linked((1.0, 3.0), (2.0, 4.0)) is True

    def test_disjoint(self):
        assert is_linked((0.0, 1.5), (2.0, 4.0)) is False

    def test_degenerate_points(self):
        assert is_linked((2.0, 2.0), (2.0, 2.0)) is False

    def test_touching_at_closed_ends(self):
        # [2, 5) meets (1, 2] exactly at 2, where both sides are closed.
        assert is_linked((2.0, 5.0), (1.0, 2.0)) is True
        # [1, 2) meets (2, 5] nowhere: 2 is excluded from both.
        assert is_linked((1.0, 2.0), (2.0, 5.0)) is False


class TestWinnow:
    def test_spec_example(self):
        m = interval_matrix([[1.0], [2.0], [0.0]], [[3.0], [4.0], [1.5]])
        res = winnow(m)
        assert res.leaders[0] == 1
        assert list(np.flatnonzero(res.kept_mask[:, 0])) == [0, 1]
        assert res.neglected_count == 1

    def test_identical_intervals_keep_everyone(self):
        m = interval_matrix([[1.0]] * 4, [[2.0]] * 4)
        res = winnow(m)
        assert res.kept_mask.all()
        assert res.neglected_count == 0

    def test_disjoint_stair_keeps_leader_only(self):
        m = interval_matrix([[0.0], [5.0]], [[1.0], [6.0]])
        res = winnow(m)
        assert list(np.flatnonzero(res.kept_mask[:, 0])) == [1]
        assert res.leaders[0] == 1

    def test_zero_neglected_zeroes_only_dropped_pairs(self):
        m = interval_matrix([[0.0], [5.0]], [[1.0], [6.0]])
        res = winnow(m)
        z = zero_neglected(m, res)
        assert z.lower[0, 0] == z.upper[0, 0] == 0.0
        assert z.lower[1, 0] == 5.0 and z.upper[1, 0] == 6.0


@st.composite
def random_interval_matrix(draw, integer_valued=False):
    m = draw(st.integers(min_value=1, max_value=6))
    N = draw(st.integers(min_value=1, max_value=4))
    value = st.integers(min_value=-50, max_value=50) if integer_valued else st.floats(
        min_value=-50, max_value=50
    )
    width = st.integers(min_value=0, max_value=20) if integer_valued else st.floats(
        min_value=0, max_value=20
    )
    lo = draw(st.lists(st.lists(value, min_size=N, max_size=N), min_size=m, max_size=m))
    widths = draw(st.lists(st.lists(width, min_size=N, max_size=N), min_size=m, max_size=m))
    lower = np.asarray(lo, dtype=float)
    upper = lower + np.asarray(widths, dtype=float)
    return IntervalMatrix(lower, upper, alpha=0.05)


class TestWinnowProperties:
    @given(random_interval_matrix())
    @settings(max_examples=200, deadline=None)
    def test_leader_membership_and_accounting(self, m):
        res = winnow(m)
        total_kept = 0
        for j in range(m.num_items):
            kept = np.flatnonzero(res.kept_mask[:, j])
            assert res.leaders[j] in kept
            assert 1 <= kept.size <= m.num_bidders
            total_kept += kept.size
        assert res.neglected_count == m.num_bidders * m.num_items - total_kept

    # Integer-valued endpoints keep comparisons clear of float rounding so
    # the mathematical invariance is what gets tested.
    @given(
        random_interval_matrix(integer_valued=True),
        st.floats(min_value=0.01, max_value=50.0),
        st.floats(min_value=-100.0, max_value=100.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_affine_invariance(self, m, p, q):
        res = winnow(m)
        mapped = IntervalMatrix(p * m.lower + q, p * m.upper + q, alpha=m.alpha)
        res2 = winnow(mapped)
        assert np.array_equal(res.kept_mask, res2.kept_mask)
        assert np.array_equal(res.leaders, res2.leaders)
