"""Embedded invariant suites, runnable in the field via the CLI.

Each suite re-verifies one load-bearing guarantee on a small, fixed-seed
workload: spiral ring coverage, exact uniformity of the ball sampler, bit
equality of the two engines, and the joint-coverage counting bound. The
suites accept their subject as an argument so a deliberately broken
implementation can be injected to prove the checks have teeth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats as _scipy_stats

from . import engine as _engine
from . import geometry as _geometry
from .engine import Scenario, UniformAtDistance
from .geometry import ORIGIN, ball_size, spiral_duration
from .strategies import Harmonic, KnownK, UniformDyadic, stock_growth

__all__ = ["SuiteResult", "run_all", "spiral_coverage_suite",
           "ball_sampler_suite", "engine_equivalence_suite", "counting_bound_suite"]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def spiral_coverage_suite(spiral_fn: Callable | None = None,
                          max_budget: int = 2000) -> SuiteResult:
    """Walk the spiral once and check bijectivity, adjacency, and ring coverage.

    For every budget t <= max_budget the realized step count must visit all
    cells within taxicab distance radius(t) of the origin.
    """
    name = "spiral_coverage"
    fn = spiral_fn or _geometry.spiral_step
    max_steps, max_radius = spiral_duration(max_budget)
    first_visit: dict[tuple, int] = {}
    prev = fn(ORIGIN, 0)
    if prev != ORIGIN:
        return SuiteResult(name, False, "step 0 is not the origin")
    first_visit[tuple(prev)] = 0
    for s in range(1, max_steps + 1):
        pos = fn(ORIGIN, s)
        if abs(pos[0] - prev[0]) + abs(pos[1] - prev[1]) != 1:
            return SuiteResult(name, False, f"steps {s - 1}->{s} are not grid neighbors")
        if tuple(pos) in first_visit:
            return SuiteResult(name, False, f"cell {tuple(pos)} revisited at step {s}")
        first_visit[tuple(pos)] = s
        prev = pos
    # Worst first-visit step over each taxicab ball, cumulative in the radius.
    worst = [0] * (max_radius + 1)
    for (x, y), s in first_visit.items():
        r = abs(x) + abs(y)
        if r <= max_radius and s > worst[r]:
            worst[r] = s
    covered = 0
    for r in range(max_radius + 1):
        covered = max(covered, worst[r])
        count = sum(1 for (x, y) in first_visit if abs(x) + abs(y) <= r)
        if count != ball_size(r):
            return SuiteResult(name, False, f"ball radius {r} not fully visited")
        worst[r] = covered
    for budget in range(max_budget + 1):
        steps, radius = spiral_duration(budget)
        if steps < budget:
            return SuiteResult(name, False, f"budget {budget} realized as {steps} steps")
        if worst[radius] > steps:
            return SuiteResult(
                name, False,
                f"budget {budget}: radius {radius} needs step {worst[radius]} > {steps}")
    return SuiteResult(name, True, f"budgets 0..{max_budget} cover their rings")


def ball_sampler_suite(sampler: Callable | None = None,
                       draws: int = 200_000, alpha: float = 0.01) -> SuiteResult:
    """Chi-square the ball sampler against exact uniformity at radii 1 and 3."""
    name = "ball_sampler_uniformity"
    fn = sampler or _geometry.sample_ball_uniform
    for radius, seed in ((1, 101), (3, 103)):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
        counts: dict[tuple, int] = {}
        for _ in range(draws):
            p = fn(rng, ORIGIN, radius)
            counts[tuple(p)] = counts.get(tuple(p), 0) + 1
        cells = ball_size(radius)
        if len(counts) != cells:
            return SuiteResult(name, False,
                               f"radius {radius}: {len(counts)} of {cells} cells drawn")
        observed = list(counts.values())
        result = _scipy_stats.chisquare(observed)
        if result.pvalue <= alpha:
            return SuiteResult(name, False,
                               f"radius {radius}: chi-square p = {result.pvalue:.2e}")
    return SuiteResult(name, True, f"{draws} draws at radii 1 and 3 look uniform")


def _random_small_scenarios(n: int, seed: int):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    scenarios = []
    for i in range(n):
        d = int(rng.integers(1, 13))
        k = int(rng.integers(1, 5))
        kind = i % 3
        if kind == 0:
            spec = KnownK(float(rng.integers(1, 9)))
        elif kind == 1:
            spec = UniformDyadic(stock_growth(1.0))
        else:
            spec = Harmonic(float(rng.uniform(0.2, 0.8)))
        scenarios.append(Scenario(
            strategy=spec, k=k, treasure=UniformAtDistance(d),
            time_cap=20_000, master_seed=int(rng.integers(0, 2**62)),
        ))
    return scenarios


def engine_equivalence_suite(n_scenarios: int = 40,
                             fast_engine: Callable | None = None) -> SuiteResult:
    """Both engines must agree bit for bit on random small scenarios."""
    name = "engine_equivalence"
    fast = fast_engine or _engine.run_trial_fast
    for s_idx, scenario in enumerate(_random_small_scenarios(n_scenarios, seed=202)):
        naive = _engine.run_trial_naive(scenario, trial_index=0)
        quick = fast(scenario, trial_index=0)
        if (naive.hit_time, naive.finder_agent) != (quick.hit_time, quick.finder_agent):
            return SuiteResult(
                name, False,
                f"scenario {s_idx}: naive {naive.hit_time}/{naive.finder_agent} "
                f"vs fast {quick.hit_time}/{quick.finder_agent}")
    return SuiteResult(name, True, f"{n_scenarios} random scenarios agree bit for bit")


def counting_bound_suite(n_scenarios: int = 25) -> SuiteResult:
    """Joint distinct-cell coverage can never exceed k * (horizon + 1)."""
    name = "counting_bound"
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(303)))
    for s_idx, scenario in enumerate(_random_small_scenarios(n_scenarios, seed=404)):
        horizon = int(rng.integers(0, 1500))
        count = _engine.count_distinct_visited(scenario, trial_index=0, horizon=horizon)
        bound = scenario.k * (horizon + 1)
        if count > bound:
            return SuiteResult(name, False,
                               f"scenario {s_idx}: {count} cells > bound {bound}")
    return SuiteResult(name, True, f"{n_scenarios} scenarios respect k*(horizon+1)")


def run_all(**overrides) -> list[SuiteResult]:
    """Run every suite; keyword overrides inject test doubles by suite name."""
    return [
        spiral_coverage_suite(overrides.get("spiral_fn")),
        ball_sampler_suite(overrides.get("ball_sampler")),
        engine_equivalence_suite(fast_engine=overrides.get("fast_engine")),
        counting_bound_suite(),
    ]
