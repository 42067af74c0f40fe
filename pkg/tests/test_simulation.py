import numpy as np
import pytest

from lcbauction.mechanism import Provenance, classify_and_estimate
from lcbauction.simulation import (
    METHOD1,
    METHOD2,
    METHOD3,
    ScenarioConfig,
    auto_d_grid,
    generate_world,
    prepare_method,
    run_at_d,
    sample_truncated_gaussian,
    sweep,
)
from lcbauction.seeding import stream


def small_config(**overrides):
    defaults = dict(
        num_bidders=5, num_items=3, history_size=30, sampling_count=300, master_seed=42
    )
    defaults.update(overrides)
    return ScenarioConfig(**defaults)


class TestScenarioConfig:
    def test_paper_defaults(self):
        cfg = ScenarioConfig(num_bidders=30, num_items=10)
        assert cfg.history_size == 50
        assert cfg.alpha == 0.01
        assert cfg.eta == 0.9
        assert cfg.sampling_count == 1000

    def test_validation(self):
        with pytest.raises(ValueError):
            ScenarioConfig(num_bidders=1, num_items=2)
        with pytest.raises(ValueError):
            ScenarioConfig(num_bidders=3, num_items=2, alpha=1.5)
        with pytest.raises(ValueError):
            ScenarioConfig(num_bidders=3, num_items=2, method="Method9")
        with pytest.raises(ValueError):
            ScenarioConfig(num_bidders=3, num_items=2, d_sweep=[-1.0])


class TestTruncatedGaussian:
    def test_respects_bounds(self):
        x = sample_truncated_gaussian(5.0, 3.0, (0.0, 10.0), 2000, stream(1, 9))
        assert np.all((x >= 0.0) & (x <= 10.0))

    def test_low_variance_concentrates(self):
        # sd = sqrt(10**-1) ~ 0.316: nearly all mass within mean +- 1.
        x = sample_truncated_gaussian(5.0, 10.0**-0.5, (0.0, 10.0), 5000, stream(2, 9))
        assert np.mean(np.abs(x - 5.0) <= 1.0) >= 0.98


class TestGenerateWorld:
    def test_shapes_and_bounds(self):
        cfg = small_config()
        world = generate_world(cfg)
        m, N = cfg.num_bidders, cfg.num_items
        assert world.true_types.shape == (m, N)
        assert world.means.shape == (m, N)
        for j in range(N):
            a, b = 10.0 * j, 10.0 * (j + 1)
            assert np.all((world.true_types[:, j] >= a) & (world.true_types[:, j] <= b))
            assert np.all((world.means[:, j] >= a) & (world.means[:, j] <= b))
            for i in range(m):
                hist = world.history.samples[i][j]
                assert hist.size == cfg.history_size
                assert np.all((hist >= a) & (hist <= b))
        assert np.all((world.sds >= 10.0**-0.5 - 1e-12) & (world.sds <= 10.0**0.5 + 1e-12))

    def test_deterministic(self):
        cfg = small_config()
        w1 = generate_world(cfg)
        w2 = generate_world(cfg)
        assert np.array_equal(w1.true_types, w2.true_types)
        assert np.array_equal(w1.means, w2.means)
        for i in range(cfg.num_bidders):
            for j in range(cfg.num_items):
                assert np.array_equal(w1.history.samples[i][j], w2.history.samples[i][j])

    def test_different_seeds_differ(self):
        cfg = small_config()
        w1 = generate_world(cfg, master_seed=1)
        w2 = generate_world(cfg, master_seed=2)
        assert not np.array_equal(w1.true_types, w2.true_types)


@pytest.fixture(scope="module")
def world():
    return generate_world(small_config())


@pytest.fixture(scope="module")
def method1_state(world):
    return prepare_method(world, METHOD1)


class TestMethods:
    def test_method2_keeps_everyone(self, world):
        state = prepare_method(world, METHOD2)
        assert state.m_star == 0
        rec = run_at_d(state, 0.0)
        assert rec.m_star == 0
        # No zero-length KDE intervals in practice, so no type II at d = 0.
        assert rec.prop_no_query == 0.0

    def test_method3_uses_sample_ranges(self, world):
        state = prepare_method(world, METHOD3)
        for i in range(world.config.num_bidders):
            for j in range(world.config.num_items):
                hist = world.history.samples[i][j]
                assert state.intervals.lower[i, j] == hist.min()
                assert state.intervals.upper[i, j] == hist.max()

    def test_method1_no_type2_at_zero_threshold(self, world):
        state = prepare_method(world, METHOD1)
        rec = run_at_d(state, 0.0)
        assert rec.n == 0
        assert rec.prop_no_query == pytest.approx(state.m_star / (5 * 3))

    def test_method1_determinism(self, world):
        a = prepare_method(world, METHOD1)
        b = prepare_method(world, METHOD1)
        assert np.array_equal(a.intervals.lower, b.intervals.lower)
        assert np.array_equal(a.winnow_result.kept_mask, b.winnow_result.kept_mask)

    def test_method2_queries_superset_of_method1(self, world):
        s1 = prepare_method(world, METHOD1)
        s2 = prepare_method(world, METHOD2, intervals=s1.intervals)
        for d in (0.0, 1.0, 3.0):
            oracle = lambda i, j: world.true_types[i, j]
            e1 = classify_and_estimate(s1.intervals_zeroed, s1.neglected_mask, d, oracle)
            e2 = classify_and_estimate(s2.intervals_zeroed, s2.neglected_mask, d, oracle)
            q1 = e1.provenance == Provenance.TYPE_I
            q2 = e2.provenance == Provenance.TYPE_I
            assert np.all(q2[q1])  # every Method-1 query also queried by Method 2

    def test_method2_full_query_regret_is_zero(self, world):
        state = prepare_method(world, METHOD2)
        rec = run_at_d(state, 0.0)
        assert rec.regret == 0.0
        assert rec.revenue == state.true_revenue


class TestSweep:
    @pytest.fixture
    def state(self, method1_state):
        return method1_state

    def test_auto_grid_breakpoints(self, state):
        grid = auto_d_grid(state)
        assert grid[0] == 0.0
        lengths = state.intervals_zeroed.lengths
        positive = np.unique(lengths[lengths > 0])
        assert len(grid) == 1 + positive.size

    def test_monotone_metrics(self, state):
        records = sweep(state)
        ds = [r.d for r in records]
        assert ds == sorted(ds)
        for prev, cur in zip(records, records[1:]):
            assert cur.n >= prev.n
            assert cur.prop_no_query >= prev.prop_no_query
            assert cur.conf_rate_paper <= prev.conf_rate_paper
            assert cur.conf_rate_theorem <= prev.conf_rate_theorem
            assert cur.refined_regret <= cur.kd + 1e-12

    def test_explicit_grid(self, state):
        records = sweep(state, [2.0, 0.0, 1.0])
        assert [r.d for r in records] == [0.0, 1.0, 2.0]

    def test_empty_grid_rejected(self, state):
        with pytest.raises(ValueError):
            sweep(state, [])

    def test_query_accounting(self, state):
        cfg = state.world.config
        total = cfg.num_bidders * cfg.num_items
        for rec in sweep(state):
            assert rec.queries_made + rec.n + rec.m_star == total
