"""Estimation tests: interval arithmetic, censor accounting, envelope fits,
and the adversarial placement probe."""

from __future__ import annotations

import numpy as np
import pytest
from scipy import stats as scipy_stats

from antsearch.engine import Scenario, UniformAtDistance, run_trial_fast
from antsearch.geometry import GridPoint
from antsearch.stats import (
    CompetitivenessPoint,
    Estimate,
    adversarial_place,
    benchmark_time,
    competitive_ratio,
    estimate_hitting_time,
    fit_growth,
)
from antsearch.strategies import Harmonic, KnownK, ParameterError, go_to
from doubles import Scripted


def _scenario(strategy, k, treasure, cap, seed=7):
    return Scenario(strategy=strategy, k=k, treasure=treasure, time_cap=cap, master_seed=seed)


class TestEstimate:
    def test_treasure_at_source_gives_zero_interval(self):
        est = estimate_hitting_time(_scenario(KnownK(1.0), 2, GridPoint(0, 0), 10), 20)
        assert est.mean == 0.0
        assert (est.ci_low, est.ci_high) == (0.0, 0.0)
        assert est.n_censored == 0 and not est.is_lower_bound

    def test_deterministic_hit_gives_degenerate_interval(self):
        s = _scenario(Scripted((go_to(GridPoint(2, 0)),)), 1, GridPoint(2, 0), 100)
        est = estimate_hitting_time(s, 15)
        assert est.mean == 2.0
        assert (est.ci_low, est.ci_high) == (2.0, 2.0)

    def test_all_censored_counts_cap(self):
        s = _scenario(Scripted((go_to(GridPoint(2, 0)),)), 1, GridPoint(0, 9), 64)
        est = estimate_hitting_time(s, 10)
        assert est.n_censored == 10
        assert est.mean == 64.0
        assert est.is_lower_bound

    def test_interval_matches_direct_computation(self):
        s = _scenario(KnownK(2.0), 2, UniformAtDistance(4), 50_000, seed=44)
        n = 40
        est = estimate_hitting_time(s, n)
        values = []
        for i in range(n):
            out = run_trial_fast(s, i)
            values.append(s.time_cap if out.censored else out.hit_time)
        arr = np.array(values, dtype=float)
        lo, hi = scipy_stats.t.interval(0.95, n - 1, loc=arr.mean(),
                                        scale=arr.std(ddof=1) / np.sqrt(n))
        assert est.mean == pytest.approx(arr.mean())
        assert est.ci_low == pytest.approx(lo)
        assert est.ci_high == pytest.approx(hi)
        assert est.ci_low <= est.mean <= est.ci_high

    def test_partial_censoring_counted(self):
        # cap tight enough that some trials miss, loose enough that some hit
        s = _scenario(Harmonic(0.5), 1, UniformAtDistance(3), 30, seed=3)
        est = estimate_hitting_time(s, 60)
        assert 0 < est.n_censored < 60
        assert est.mean <= 30.0

    def test_rejects_single_trial(self):
        with pytest.raises(ParameterError):
            estimate_hitting_time(_scenario(KnownK(1.0), 1, GridPoint(1, 0), 10), 1)


class TestBenchmarkAndRatio:
    def test_benchmark_example(self):
        assert benchmark_time(10, 4) == 35.0
        assert benchmark_time(1, 1) == 2.0

    def test_benchmark_validation(self):
        with pytest.raises(ParameterError):
            benchmark_time(0, 4)
        with pytest.raises(ParameterError):
            benchmark_time(10, 0)

    def test_ratio_exact(self):
        est = Estimate(70.0, 60.0, 80.0, 50, 0)
        point = competitive_ratio(10, 4, est)
        assert point.ratio == 2.0
        assert (point.distance, point.k) == (10, 4)

    def test_ratio_of_benchmark_is_one(self):
        for d, k in ((3, 1), (8, 4), (100, 7)):
            est = Estimate(benchmark_time(d, k), 0.0, 0.0, 10, 0)
            assert competitive_ratio(d, k, est).ratio == pytest.approx(1.0)

    def test_mean_decreases_with_team_size(self):
        d = 8
        slow = estimate_hitting_time(
            _scenario(KnownK(1.0), 1, UniformAtDistance(d), 200_000, seed=10), 60)
        quick = estimate_hitting_time(
            _scenario(KnownK(16.0), 16, UniformAtDistance(d), 200_000, seed=10), 60)
        assert slow.n_censored == 0 and quick.n_censored == 0
        assert quick.mean < slow.mean


class TestFitGrowth:
    @staticmethod
    def _point(ratio, k):
        return CompetitivenessPoint(8, k, Estimate(1.0, 1.0, 1.0, 10, 0), ratio)

    def test_perfect_fit_has_zero_residual(self):
        g = lambda x: (x + 1) ** 2
        pts = [self._point(3.0 * g(kk.bit_length() - 1), kk) for kk in (2, 8, 32)]
        fit = fit_growth(pts, g)
        assert fit.c_fit == pytest.approx(3.0)
        assert fit.max_residual == pytest.approx(0.0)
        assert fit.spread == pytest.approx(1.0)

    def test_single_point(self):
        g = lambda x: (x + 1) ** 2
        fit = fit_growth([self._point(6.0, 16)], g)
        assert fit.c_fit == pytest.approx(6.0 / 25.0)
        assert fit.max_residual == 0.0

    def test_envelope_is_max_not_mean(self):
        g = lambda x: 1.0
        pts = [self._point(1.0, 2), self._point(4.0, 4), self._point(2.0, 8)]
        fit = fit_growth(pts, g)
        assert fit.c_fit == 4.0
        assert fit.max_residual == 3.0
        assert fit.spread == 4.0

    def test_refuses_censored_points(self):
        p = CompetitivenessPoint(8, 4, Estimate(5.0, 4.0, 6.0, 10, 2), 1.0)
        with pytest.raises(ParameterError):
            fit_growth([p], lambda x: 1.0)

    def test_refuses_empty_and_bad_growth(self):
        with pytest.raises(ParameterError):
            fit_growth([], lambda x: 1.0)
        with pytest.raises(ParameterError):
            fit_growth([self._point(1.0, 4)], lambda x: 0.0)


class TestAdversarialPlace:
    def test_scripted_coverage_is_exact(self):
        # one agent walks to (1,0) and stops; ring cells in order are
        # (1,0),(0,1),(-1,0),(0,-1)
        spec = Scripted((go_to(GridPoint(1, 0)),))
        placement = adversarial_place(spec, 1, 1, budget=10, probe_trials=5, master_seed=1)
        assert placement.probabilities == (1.0, 0.0, 0.0, 0.0)
        # three-way tie at 0 breaks to lexicographically smallest cell
        assert placement.cell == GridPoint(-1, 0)
        assert placement.probability == 0.0

    def test_per_agent_programs_union(self):
        team = (
            Scripted((go_to(GridPoint(1, 0)),)),
            Scripted((go_to(GridPoint(0, 1)),)),
            Scripted((go_to(GridPoint(0, -1)),)),
        )
        placement = adversarial_place(team, 3, 1, budget=5, probe_trials=4, master_seed=1)
        assert placement.probabilities == (1.0, 1.0, 0.0, 1.0)
        assert placement.cell == GridPoint(-1, 0)

    def test_budget_below_distance_leaves_all_unreached(self):
        placement = adversarial_place(KnownK(4.0), 4, 2, budget=1, probe_trials=6, master_seed=9)
        assert placement.probabilities == (0.0,) * 8
        assert placement.cell == GridPoint(-2, 0)  # lexicographic tie-break

    def test_budget_zero_allowed(self):
        placement = adversarial_place(KnownK(1.0), 1, 1, budget=0, probe_trials=2, master_seed=9)
        assert placement.probabilities == (0.0,) * 4

    def test_deterministic(self):
        a = adversarial_place(KnownK(2.0), 2, 3, budget=60, probe_trials=30, master_seed=5)
        b = adversarial_place(KnownK(2.0), 2, 3, budget=60, probe_trials=30, master_seed=5)
        assert a == b

    def test_probability_of_cell_is_table_minimum(self):
        p = adversarial_place(Harmonic(0.5), 2, 2, budget=200, probe_trials=40, master_seed=8)
        assert len(p.probabilities) == 8
        assert p.probability == min(p.probabilities)
        assert all(0.0 <= q <= 1.0 for q in p.probabilities)

    def test_coverage_monotone_in_budget(self):
        # same seed keys the same trajectories, so a longer prefix can only
        # add visited cells
        small = adversarial_place(KnownK(2.0), 2, 2, budget=30, probe_trials=25, master_seed=4)
        large = adversarial_place(KnownK(2.0), 2, 2, budget=300, probe_trials=25, master_seed=4)
        assert all(a <= b for a, b in zip(small.probabilities, large.probabilities))

    def test_validation(self):
        with pytest.raises(ParameterError):
            adversarial_place(KnownK(1.0), 1, 0, budget=5, probe_trials=2, master_seed=1)
        with pytest.raises(ParameterError):
            adversarial_place(KnownK(1.0), 1, 1, budget=5, probe_trials=0, master_seed=1)
        with pytest.raises(ParameterError):
            adversarial_place(KnownK(1.0), 1, 1, budget=-1, probe_trials=2, master_seed=1)
