"""antsearch: a reproducible simulation laboratory for collective grid search.

k identical, non-communicating agents start at a common source on the
integer grid and look for a treasure hidden at an unknown taxicab distance
D. The package implements three randomized search strategies, two
bit-identical trial engines (a step-exact one and a segment-skipping one),
Monte Carlo hitting-time estimation against the D + D^2/k benchmark, and a
deterministic experiment CLI.
"""

__version__ = "0.1.0"

from .geometry import (
    Ball,
    GridPoint,
    ORIGIN,
    ball_size,
    l1_distance,
    linf_distance,
    ring_point,
    sample_ball_uniform,
    sample_ring_uniform,
    spiral_duration,
    spiral_hit_index,
    spiral_step,
    travel_path,
)
from .strategies import (
    GrowthFunction,
    Harmonic,
    KnownK,
    ParameterError,
    RhoUniformKnownK,
    Segment,
    SegmentKind,
    UniformDyadic,
    plan_harmonic,
    plan_known_k,
    plan_uniform,
    sample_harmonic_target,
    sample_power_law_radius,
    stock_growth,
)
from .engine import (
    Scenario,
    TrialOutcome,
    UniformAtDistance,
    count_distinct_visited,
    run_trial_fast,
    run_trial_naive,
)
from .stats import (
    CompetitivenessPoint,
    Estimate,
    adversarial_place,
    benchmark_time,
    competitive_ratio,
    estimate_hitting_time,
    fit_growth,
)

__all__ = [
    "__version__",
    "Ball", "GridPoint", "ORIGIN", "ball_size", "l1_distance", "linf_distance",
    "ring_point", "sample_ball_uniform", "sample_ring_uniform",
    "spiral_duration", "spiral_hit_index", "spiral_step", "travel_path",
    "GrowthFunction", "Harmonic", "KnownK", "ParameterError",
    "RhoUniformKnownK", "Segment", "SegmentKind", "UniformDyadic",
    "plan_harmonic", "plan_known_k", "plan_uniform",
    "sample_harmonic_target", "sample_power_law_radius", "stock_growth",
    "Scenario", "TrialOutcome", "UniformAtDistance",
    "count_distinct_visited", "run_trial_fast", "run_trial_naive",
    "CompetitivenessPoint", "Estimate", "adversarial_place", "benchmark_time",
    "competitive_ratio", "estimate_hitting_time", "fit_growth",
]
