"""Monte Carlo estimation on top of the fast engine.

Hitting-time estimates, competitiveness ratios against the D + D^2/k
benchmark, envelope fits against a growth law, and the adversarial treasure
placer. All estimates are bit-reproducible from (scenario, n_trials): trial
randomness is keyed by index, aggregation is order-independent, and nothing
here consumes wall-clock state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .engine import Scenario, SOURCE, iter_positions, resolve_plan, run_trial_fast
from .geometry import GridPoint, ring_point
from .strategies import ParameterError
from .streams import agent_stream

__all__ = [
    "Estimate",
    "CompetitivenessPoint",
    "estimate_hitting_time",
    "benchmark_time",
    "competitive_ratio",
    "adversarial_place",
    "AdversarialPlacement",
    "fit_growth",
    "GrowthFit",
]


@dataclass(frozen=True)
class Estimate:
    """Sample mean of hitting time with a Student-t 95% confidence interval.

    Censored trials enter the sample at the cap value, so with any
    censoring the mean is a lower-bound estimate; ``is_lower_bound`` flags
    that.
    """

    mean: float
    ci_low: float
    ci_high: float
    n_trials: int
    n_censored: int

    @property
    def is_lower_bound(self) -> bool:
        return self.n_censored > 0


def estimate_hitting_time(scenario: Scenario, n_trials: int) -> Estimate:
    """Run trials 0..n_trials-1 on the fast engine and summarize.

    Args:
        scenario: the scenario to sample; its master_seed keys every trial.
        n_trials: number of trials, at least 2 (the CI needs a variance).
    """
    if n_trials < 2:
        raise ParameterError(f"n_trials must be >= 2, got {n_trials}")
    values = np.empty(n_trials, dtype=np.float64)
    n_censored = 0
    for i in range(n_trials):
        outcome = run_trial_fast(scenario, i)
        if outcome.censored:
            n_censored += 1
            values[i] = scenario.time_cap
        else:
            values[i] = outcome.hit_time
    mean = float(values.mean())
    sd = float(values.std(ddof=1))
    half = 0.0
    if sd > 0.0:
        t_crit = float(_scipy_stats.t.ppf(0.975, n_trials - 1))
        half = t_crit * sd / math.sqrt(n_trials)
    return Estimate(mean, mean - half, mean + half, n_trials, n_censored)


def benchmark_time(distance: int, k: int) -> float:
    """The lower-bound yardstick D + D^2/k every ratio is measured against."""
    if distance < 1 or k < 1:
        raise ParameterError(f"need distance >= 1 and k >= 1, got D={distance}, k={k}")
    return distance + distance * distance / k


@dataclass(frozen=True)
class CompetitivenessPoint:
    """One sweep cell: measured mean against the benchmark at (D, k)."""

    distance: int
    k: int
    estimate: Estimate
    ratio: float


def competitive_ratio(distance: int, k: int, estimate: Estimate) -> CompetitivenessPoint:
    """Ratio of measured mean to D + D^2/k.

    The denominator D + D^2/k = (Dk + D^2)/k is formed in exact integer
    arithmetic; the single rounding happens at the final division.
    """
    if distance < 1 or k < 1:
        raise ParameterError(f"need distance >= 1 and k >= 1, got D={distance}, k={k}")
    denom = distance * k + distance * distance
    ratio = estimate.mean * k / denom
    return CompetitivenessPoint(distance, k, estimate, ratio)


# --- adversarial placement -----------------------------------------------------------

@dataclass(frozen=True)
class AdversarialPlacement:
    """Output of the placer: the least-covered cell and the full probe table."""

    cell: GridPoint
    probability: float
    probabilities: tuple[float, ...]  # in ring_point enumeration order


def adversarial_place(strategy, k: int, distance: int, budget: int,
                      probe_trials: int, master_seed: int) -> AdversarialPlacement:
    """Find the cell at exact distance D least likely to be visited by ``budget``.

    Monte Carlo over ``probe_trials`` independent trials: for each, walk
    all k agents for ``budget`` time units (trajectories do not depend on
    any treasure) and record which of the 4D candidate ring cells were
    stepped on. Ties on the minimum probability break toward the
    lexicographically smallest (x, y).

    A budget below D leaves every candidate unreachable, so every estimate
    is 0 and the tie-break returns the lexicographically smallest ring cell.
    """
    if distance < 1:
        raise ParameterError(f"distance must be >= 1, got {distance}")
    if probe_trials < 1:
        raise ParameterError(f"probe_trials must be >= 1, got {probe_trials}")
    if budget < 0:
        raise ParameterError(f"budget must be >= 0, got {budget}")
    candidates = [ring_point(SOURCE, distance, i) for i in range(4 * distance)]
    candidate_index = {c: i for i, c in enumerate(candidates)}
    counts = [0] * len(candidates)
    for trial in range(probe_trials):
        seen: set[int] = set()
        for agent in range(k):
            rng = agent_stream(master_seed, trial, agent)
            spec = strategy[agent] if isinstance(strategy, Sequence) else strategy
            t = 0
            for pos in iter_positions(resolve_plan(spec.plan(rng))):
                t += 1
                if t > budget:
                    break
                idx = candidate_index.get(pos)
                if idx is not None:
                    seen.add(idx)
        for idx in seen:
            counts[idx] += 1
    probabilities = tuple(c / probe_trials for c in counts)
    best = min(range(len(candidates)), key=lambda i: (probabilities[i], candidates[i]))
    return AdversarialPlacement(candidates[best], probabilities[best], probabilities)


# --- growth-law fitting ---------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    """Envelope fit of ratios against a growth law g(floor(log2 k)).

    ``c_fit`` is the smallest constant with ratio <= c_fit * g(...) at
    every point, i.e. the max of the normalized ratios. ``max_residual``
    is the largest shortfall c_fit - ratio/g among the points (0 for a
    perfect fit); ``spread`` is max/min of the normalized ratios, the
    scale-free fit-quality number.
    """

    c_fit: float
    max_residual: float

    @property
    def spread(self) -> float:
        return self.c_fit / (self.c_fit - self.max_residual)


def fit_growth(points: Sequence[CompetitivenessPoint],
               g: Callable[[int], float]) -> GrowthFit:
    """Fit the envelope constant for ratio <= c * g(floor(log2 k)).

    Requires at least one point and refuses censored input: a censored
    mean is a lower bound, and an envelope fitted to lower bounds would
    understate the constant.
    """
    if not points:
        raise ParameterError("fit_growth needs at least one point")
    normalized = []
    for p in points:
        if p.estimate.n_censored > 0:
            raise ParameterError(
                f"point (D={p.distance}, k={p.k}) has censored trials; "
                "refusing to fit an envelope to lower bounds"
            )
        gv = float(g(p.k.bit_length() - 1))
        if not gv > 0:
            raise ParameterError(f"growth law must be positive, g({p.k.bit_length() - 1}) = {gv}")
        normalized.append(p.ratio / gv)
    c_fit = max(normalized)
    return GrowthFit(c_fit, c_fit - min(normalized))
