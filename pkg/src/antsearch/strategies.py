"""The three search strategies, expressed as segment-plan generators.

Each strategy is a deterministic-given-randomness program for a single
agent: an unbounded sequence of (go somewhere, spiral for a budget, return
to source) phases. Plans consume the agent's private rng stream and nothing
else, so a plan is reproducible from its stream key alone, and the two
simulation engines can replay the identical trajectory.

Strategies:

* ``KnownK`` -- requires an estimate of the team size; dyadic stages of
  phases that jump uniformly into a ball of radius 2^i and spiral for
  ceil(2^(2i+2) / k_est) edges.
* ``UniformDyadic`` -- needs no team-size input; a triple-dyadic sweep
  whose phase budgets are damped by a growth function f, trading f-growth
  in the time bound for obliviousness.
* ``Harmonic`` -- restarts forever: jump to a random cell with probability
  proportional to 1/distance^(2+delta), spiral for distance^(2+delta)
  edges, return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, NamedTuple

import numpy as np

from .geometry import (
    GridPoint,
    ORIGIN,
    l1_distance,
    sample_ball_uniform,
    sample_ring_uniform,
)

__all__ = [
    "ParameterError",
    "SegmentKind",
    "Segment",
    "go_to",
    "spiral",
    "RETURN_TO_SOURCE",
    "GrowthFunction",
    "stock_growth",
    "known_k_schedule",
    "uniform_schedule",
    "plan_known_k",
    "plan_uniform",
    "plan_harmonic",
    "sample_power_law_radius",
    "sample_harmonic_target",
    "KnownK",
    "RhoUniformKnownK",
    "UniformDyadic",
    "Harmonic",
    "HARMONIC_DELTA_MAX",
]


class ParameterError(ValueError):
    """A strategy or scenario parameter is outside its contract."""


# --- segments ------------------------------------------------------------------

class SegmentKind(Enum):
    GOTO = "goto"
    SPIRAL = "spiral"
    RETURN = "return"


class Segment(NamedTuple):
    """One leg of an agent's program.

    GOTO carries a target cell, SPIRAL carries a requested edge budget
    (pre-rounding; the engine realizes it as whole spiral rings), RETURN
    carries nothing. Durations are position-dependent and are resolved by
    the engine. A NamedTuple, not a dataclass: plans materialize millions
    of these in hot loops.
    """

    kind: SegmentKind
    target: GridPoint | None = None
    budget: int | None = None


def go_to(target: GridPoint) -> Segment:
    return Segment(SegmentKind.GOTO, target=target)


def spiral(budget: int) -> Segment:
    if budget < 0:
        raise ParameterError(f"spiral budget must be >= 0, got {budget}")
    return Segment(SegmentKind.SPIRAL, budget=budget)


RETURN_TO_SOURCE = Segment(SegmentKind.RETURN)


# --- growth functions ----------------------------------------------------------

@dataclass(frozen=True)
class GrowthFunction:
    """A positive integer-valued damping function for the oblivious strategy.

    Must be non-decreasing with f(x) >= 1 for all x >= 0; the time bound of
    ``UniformDyadic`` degrades by a factor of f(log k), and summability of
    1/f is what makes the strategy terminate with the right rate.
    """

    name: str
    fn: Callable[[int], int]

    def __call__(self, x: int) -> int:
        value = self.fn(x)
        if value < 1:
            raise ParameterError(f"growth function {self.name}({x}) = {value} < 1")
        return int(value)


def stock_growth(epsilon: float = 1.0) -> GrowthFunction:
    """The stock polynomial family f(x) = ceil((x+1)^(1+epsilon)).

    The +1 domain shift keeps f(0) >= 1 so the very first phase has a
    positive budget; any epsilon > 0 keeps sum 1/f finite.
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    power = 1.0 + epsilon
    return GrowthFunction(
        name=f"ceil((x+1)^{power:g})",
        fn=lambda x: math.ceil((x + 1) ** power),
    )


# --- planner schedules ----------------------------------------------------------

def known_k_schedule(k_est: float) -> Iterator[tuple[int, int]]:
    """(ball radius, spiral budget) pairs for the known-team-size strategy.

    Stage j = 1, 2, ... replays phases i = 1..j with ball radius 2^i and
    budget ceil(2^(2i+2) / k_est), so each stage revisits every earlier
    scale once before pushing one scale further out.
    """
    if not k_est >= 1:
        raise ParameterError(f"team-size estimate must be >= 1, got {k_est}")
    # Hoisted out of the loop: integral estimates divide with plain ints,
    # fractional ones against the estimate's exact binary value.
    if float(k_est).is_integer():
        d = int(k_est)
        budget_of = lambda n: -(-n // d)
    else:
        frac = Fraction(k_est)
        budget_of = lambda n: math.ceil(n / frac)
    j = 1
    while True:
        for i in range(1, j + 1):
            yield (1 << i, budget_of(1 << (2 * i + 2)))
        j += 1


def uniform_schedule(f: GrowthFunction) -> Iterator[tuple[int, int]]:
    """(ball radius, spiral budget) pairs for the size-oblivious strategy.

    Triple loop over big-stage l >= 0, stage i = 0..l, phase j = 0..i.
    Phase (i, j) jumps into a ball of radius floor(sqrt(2^(i+j) / f(j)))
    and spirals for ceil(2^(i+2) / f(j)) edges. The inner index j plays the
    role of a hypothesized log team size; it shapes the budgets and nothing
    else.
    """
    l = 0
    while True:
        for i in range(l + 1):
            for j in range(i + 1):
                fj = f(j)
                radius = math.isqrt((1 << (i + j)) // fj)
                budget = -(-(1 << (i + 2)) // fj)
                yield (radius, budget)
        l += 1


# --- plan generators -------------------------------------------------------------

# Plans are consumed segment-by-segment inside the engines' innermost loops,
# so both generators below inline the phase body (sample, jump, spiral,
# return) rather than delegating to a helper generator per phase.

def plan_known_k(rng: np.random.Generator, k_est: float) -> Iterator[Segment]:
    """Unbounded segment plan for one agent running the known-team-size strategy."""
    seg, goto, spin = Segment, SegmentKind.GOTO, SegmentKind.SPIRAL
    for radius, budget in known_k_schedule(k_est):
        yield seg(goto, sample_ball_uniform(rng, ORIGIN, radius), None)
        yield seg(spin, None, budget)
        yield RETURN_TO_SOURCE


def plan_uniform(rng: np.random.Generator, f: GrowthFunction) -> Iterator[Segment]:
    """Unbounded segment plan for one agent running the size-oblivious strategy."""
    seg, goto, spin = Segment, SegmentKind.GOTO, SegmentKind.SPIRAL
    for radius, budget in uniform_schedule(f):
        yield seg(goto, sample_ball_uniform(rng, ORIGIN, radius), None)
        yield seg(spin, None, budget)
        yield RETURN_TO_SOURCE


# --- harmonic strategy ------------------------------------------------------------

HARMONIC_DELTA_MAX = 0.8

# Redrawing radii above this bound keeps float intermediates finite. The
# truncated tail mass is below 1e-5 of a draw for any delta >= 0.3 and the
# redraw leaves the law exact below the bound up to a 1 + 4e-6 rescale.
_RADIUS_LIMIT = 1e18


def sample_power_law_radius(rng: np.random.Generator, delta: float) -> int:
    """Draw a radius d >= 1 with P(d) proportional to d^-(1+delta).

    Rejection sampling against a continuous Pareto envelope (the classic
    zeta-variate construction): exact for every d, O(1) draws per sample,
    no tables. A prefix-CDF table is unusable here because the tail is so
    heavy that table indices beyond 10^8 are reached at practical sample
    sizes.

    Valid for any delta > 0; strategy-level range limits are enforced by
    :class:`Harmonic`, not here, so the sampler itself can be tested on
    exponents outside the strategy's operating range.
    """
    if not delta > 0:
        raise ParameterError(f"radius-law delta must be > 0, got {delta}")
    b = 2.0 ** delta
    inv = -1.0 / delta
    while True:
        u = 1.0 - rng.random()
        v = rng.random()
        try:
            x = math.floor(u ** inv)
        except OverflowError:
            continue
        if x > _RADIUS_LIMIT:
            continue
        t = (1.0 + 1.0 / x) ** delta
        if v * x * (t - 1.0) / (b - 1.0) <= t / b:
            return int(x)


def sample_harmonic_target(rng: np.random.Generator, delta: float) -> GridPoint:
    """Draw a jump target u != source with P(u) proportional to 1/dist(u)^(2+delta).

    Factored through the ring structure: a ring at distance d holds 4d
    cells, so the radius law is P(d) proportional to d^-(1+delta) and the
    cell is then uniform on its ring. Two draws total (amortized).
    """
    d = sample_power_law_radius(rng, delta)
    return sample_ring_uniform(rng, ORIGIN, d)


def plan_harmonic(rng: np.random.Generator, delta: float) -> Iterator[Segment]:
    """Unbounded segment plan for the harmonic strategy.

    Each round jumps to a fresh power-law target u, spirals for
    ceil(dist(u)^(2+delta)) edges, and returns; rounds repeat forever with
    fresh randomness, so a single agent succeeds eventually with
    probability one even though no round is guaranteed to.
    """
    _check_harmonic_delta(delta)
    power = 2.0 + delta
    while True:
        target = sample_harmonic_target(rng, delta)
        yield go_to(target)
        d = l1_distance(ORIGIN, target)
        yield spiral(math.ceil(d ** power))
        yield RETURN_TO_SOURCE


def _check_harmonic_delta(delta: float) -> None:
    if not 0.0 < delta <= HARMONIC_DELTA_MAX:
        raise ParameterError(
            f"harmonic delta must lie in (0, {HARMONIC_DELTA_MAX}], got {delta}"
        )


# --- strategy specs ---------------------------------------------------------------

@dataclass(frozen=True)
class KnownK:
    """Known-team-size strategy with a fixed estimate k_est >= 1."""

    k_est: float

    def __post_init__(self) -> None:
        if not self.k_est >= 1:
            raise ParameterError(f"k_est must be >= 1, got {self.k_est}")

    label = "known_k"

    def params(self) -> str:
        return f"k_est={self.k_est:g}"

    def plan(self, rng: np.random.Generator) -> Iterator[Segment]:
        return plan_known_k(rng, self.k_est)


@dataclass(frozen=True)
class RhoUniformKnownK:
    """Known-team-size strategy under rho-approximate estimates.

    Each agent privately draws its own estimate uniformly from
    [k / rho, k * rho] (clamped to >= 1) as the first use of its stream,
    then runs the ordinary known-size program with it. Models a team that
    only knows its size up to a factor of rho.
    """

    k: int
    rho: float

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if not self.rho >= 1:
            raise ParameterError(f"rho must be >= 1, got {self.rho}")

    label = "known_k_rho"

    def params(self) -> str:
        return f"k={self.k};rho={self.rho:g}"

    def plan(self, rng: np.random.Generator) -> Iterator[Segment]:
        k_est = max(1.0, rng.uniform(self.k / self.rho, self.k * self.rho))
        return plan_known_k(rng, k_est)


@dataclass(frozen=True)
class UniformDyadic:
    """Size-oblivious strategy damped by a growth function."""

    f: GrowthFunction = field(default_factory=stock_growth)

    label = "uniform"

    def params(self) -> str:
        return f"f={self.f.name}"

    def plan(self, rng: np.random.Generator) -> Iterator[Segment]:
        return plan_uniform(rng, self.f)


@dataclass(frozen=True)
class Harmonic:
    """Harmonic restart strategy with tail exponent delta in (0, 0.8]."""

    delta: float

    def __post_init__(self) -> None:
        _check_harmonic_delta(self.delta)

    label = "harmonic"

    def params(self) -> str:
        return f"delta={self.delta:g}"

    def plan(self, rng: np.random.Generator) -> Iterator[Segment]:
        return plan_harmonic(rng, self.delta)
