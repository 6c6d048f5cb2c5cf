"""Trial execution: two engines, one observable behavior.

A trial puts k agents at the source at time 0, lets each walk its private
segment plan one edge per time unit in lockstep, and reports the first time
any agent occupies the treasure cell. Stepping on the treasure counts no
matter which leg of the program the agent is on, travel included. Ties go
to the lowest agent index. A trial that reaches ``time_cap`` without a hit
is censored, never discarded.

``run_trial_naive`` realizes every edge of every agent and is the ground
truth. ``run_trial_fast`` resolves whole segments analytically: a straight
leg is checked for treasure membership in O(1), a spiral leg via the
closed-form spiral inverse, so a segment of a million edges costs the same
as one of ten. The two must agree bit for bit; the acceptance suite and the
embedded selftest both enforce that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .geometry import (
    GridPoint,
    ORIGIN,
    iter_travel,
    l1_distance,
    linf_distance,
    ring_point,
    spiral_duration,
    spiral_hit_index,
    spiral_step,
)
from .strategies import ParameterError, Segment, SegmentKind
from .streams import agent_stream, treasure_stream

__all__ = [
    "SOURCE",
    "UniformAtDistance",
    "Scenario",
    "TrialOutcome",
    "ResolvedSegment",
    "resolve_plan",
    "iter_positions",
    "run_trial_naive",
    "run_trial_fast",
    "count_distinct_visited",
]

SOURCE = ORIGIN


@dataclass(frozen=True)
class UniformAtDistance:
    """Placement rule: draw the treasure uniformly on the ring at this distance,
    independently per trial, from the trial's reserved placement stream."""

    distance: int

    def __post_init__(self) -> None:
        if self.distance < 1:
            raise ParameterError(f"treasure distance must be >= 1, got {self.distance}")


@dataclass(frozen=True)
class Scenario:
    """Everything a trial needs: team, program, target, clock limit, seed.

    ``strategy`` is either a single spec shared by all agents or a sequence
    of exactly k per-agent specs. ``treasure`` is a fixed cell or a
    :class:`UniformAtDistance` rule resolved per trial.
    """

    strategy: object
    k: int
    treasure: GridPoint | UniformAtDistance
    time_cap: int
    master_seed: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.time_cap < 1:
            raise ParameterError(f"time_cap must be >= 1, got {self.time_cap}")
        if isinstance(self.strategy, Sequence):
            if len(self.strategy) != self.k:
                raise ParameterError(
                    f"per-agent strategy list has {len(self.strategy)} entries for k={self.k}"
                )

    def strategy_for(self, agent_index: int):
        if isinstance(self.strategy, Sequence):
            return self.strategy[agent_index]
        return self.strategy

    def treasure_for(self, trial_index: int) -> GridPoint:
        t = self.treasure
        if isinstance(t, UniformAtDistance):
            rng = treasure_stream(self.master_seed, trial_index)
            idx = int(rng.integers(0, 4 * t.distance))
            return ring_point(SOURCE, t.distance, idx)
        return GridPoint(*t)


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one trial.

    ``hit_time`` is None when censored at the cap. ``steps_simulated`` is a
    per-agent diagnostic: for the naive engine it is the lockstep clock at
    resolution for every agent; for the fast engine it is the span of each
    agent's program that was resolved or skipped. The two engines agree on
    hit_time and finder_agent, not necessarily on this diagnostic.
    """

    hit_time: int | None
    finder_agent: int | None
    steps_simulated: tuple[int, ...]
    engine: str

    @property
    def censored(self) -> bool:
        return self.hit_time is None


# --- plan resolution -------------------------------------------------------------

class ResolvedSegment(NamedTuple):
    """A segment pinned to a start position, with realized duration and end."""

    kind: SegmentKind
    start: GridPoint
    end: GridPoint
    duration: int
    spiral_radius: int = 0


def resolve_plan(segments: Iterable[Segment], source: GridPoint = SOURCE) -> Iterator[ResolvedSegment]:
    """Thread a segment plan through space: fix starts, ends, and durations.

    GOTO and RETURN realize as L-paths (duration = taxicab distance); a
    SPIRAL budget is rounded up to whole rings, so its end is the last cell
    of its outermost ring.
    """
    pos = source
    for kind, target, budget in segments:
        if kind is SegmentKind.GOTO:
            end = target
            yield ResolvedSegment(
                kind, pos, end, abs(end[0] - pos[0]) + abs(end[1] - pos[1]))
        elif kind is SegmentKind.SPIRAL:
            steps, radius = spiral_duration(budget)
            end = spiral_step(pos, steps)
            yield ResolvedSegment(kind, pos, end, steps, radius)
        else:
            end = source
            yield ResolvedSegment(
                kind, pos, end, abs(end[0] - pos[0]) + abs(end[1] - pos[1]))
        pos = end


def iter_positions(resolved: Iterable[ResolvedSegment]) -> Iterator[GridPoint]:
    """Every cell of the trajectory in order, one per time unit, start excluded."""
    for rs in resolved:
        if rs.kind is SegmentKind.SPIRAL:
            origin = rs.start
            for s in range(1, rs.duration + 1):
                yield spiral_step(origin, s)
        else:
            yield from iter_travel(rs.start, rs.end)


# --- naive engine -----------------------------------------------------------------

def _first_hit_walking(scenario: Scenario, trial_index: int, agent: int,
                       treasure: GridPoint, limit: int) -> int | None:
    """First time this agent occupies the treasure, walking edge by edge.

    Returns None if it does not happen within ``limit`` time units.
    """
    if limit < 1:
        return None
    rng = agent_stream(scenario.master_seed, trial_index, agent)
    plan = scenario.strategy_for(agent).plan(rng)
    t = 0
    for pos in iter_positions(resolve_plan(plan)):
        t += 1
        if pos == treasure:
            return t
        if t >= limit:
            return None
    return None


def run_trial_naive(scenario: Scenario, trial_index: int) -> TrialOutcome:
    """Ground-truth engine: realize every edge of every agent."""
    treasure = scenario.treasure_for(trial_index)
    return _run_trial(scenario, trial_index, treasure, _first_hit_walking, "naive")


# --- fast engine ------------------------------------------------------------------

def _straight_hit_offset(start: GridPoint, end: GridPoint, treasure: GridPoint) -> int | None:
    """Offset (1-based) at which the L-path from start to end steps on treasure."""
    dx = end[0] - start[0]
    tx = treasure[0] - start[0]
    ty = treasure[1] - start[1]
    if dx != 0 and ty == 0 and ((0 < tx <= dx) or (dx <= tx < 0)):
        return abs(tx)
    dy = end[1] - start[1]
    if dy != 0 and treasure[0] == end[0] and ((0 < ty <= dy) or (dy <= ty < 0)):
        return abs(dx) + abs(ty)
    return None


def _segment_hit_offset(rs: ResolvedSegment, treasure: GridPoint) -> int | None:
    """Offset (1-based) within the segment at which the treasure is stepped on."""
    if rs.kind is SegmentKind.SPIRAL:
        if linf_distance(rs.start, treasure) > rs.spiral_radius:
            return None
        s = spiral_hit_index(rs.start, treasure)
        if 1 <= s <= rs.duration:
            return s
        return None
    return _straight_hit_offset(rs.start, rs.end, treasure)


def _first_hit_skipping(scenario: Scenario, trial_index: int, agent: int,
                        treasure: GridPoint, limit: int) -> int | None:
    """First hit time computed segment-analytically; never walks an edge.

    This is the hot loop of every estimate, so segment resolution and the
    membership tests of _straight_hit_offset/_segment_hit_offset are fused
    inline rather than composed; the embedded equivalence suite pins its
    behavior to the naive walker. The first segment containing the treasure
    gives the global first visit: time is monotone and a spiral or L-path
    never revisits a cell within itself.
    """
    if limit < 1:
        return None
    rng = agent_stream(scenario.master_seed, trial_index, agent)
    plan = scenario.strategy_for(agent).plan(rng)
    tx, ty = treasure
    sx, sy = SOURCE
    px, py = sx, sy
    goto = SegmentKind.GOTO
    spiral_kind = SegmentKind.SPIRAL
    duration_of = spiral_duration
    t = 0
    for kind, target, budget in plan:
        if kind is spiral_kind:
            steps, radius = duration_of(budget)
            if abs(tx - px) <= radius and abs(ty - py) <= radius:
                s = spiral_hit_index((px, py), treasure)
                if 1 <= s <= steps:
                    hit = t + s
                    return hit if hit <= limit else None
            t += steps
            # whole rounded spirals always park at the outer ring's corner
            px += radius
            py -= radius
        else:
            ex, ey = target if kind is goto else (sx, sy)
            dx = ex - px
            rx = tx - px
            if dx != 0 and ty == py and ((0 < rx <= dx) or (dx <= rx < 0)):
                hit = t + abs(rx)
                return hit if hit <= limit else None
            dy = ey - py
            ry = ty - py
            if dy != 0 and tx == ex and ((0 < ry <= dy) or (dy <= ry < 0)):
                hit = t + abs(dx) + abs(ry)
                return hit if hit <= limit else None
            t += abs(dx) + abs(dy)
            px, py = ex, ey
        if t >= limit:
            return None
    return None


def run_trial_fast(scenario: Scenario, trial_index: int) -> TrialOutcome:
    """Segment-skipping engine; bit-identical to the naive engine's outcome."""
    treasure = scenario.treasure_for(trial_index)
    return _run_trial(scenario, trial_index, treasure, _first_hit_skipping, "fast")


# --- shared trial shell -----------------------------------------------------------

def _run_trial(scenario: Scenario, trial_index: int, treasure: GridPoint,
               first_hit, engine: str) -> TrialOutcome:
    k = scenario.k
    if treasure == SOURCE:
        # All agents occupy the source at time 0; index 0 wins the tie.
        return TrialOutcome(0, 0, (0,) * k, engine)
    cap = scenario.time_cap
    best_time: int | None = None
    best_agent: int | None = None
    for agent in range(k):
        # Strict-improvement limit implements the lowest-index tie rule.
        limit = cap if best_time is None else best_time - 1
        hit = first_hit(scenario, trial_index, agent, treasure, limit)
        if hit is not None:
            best_time, best_agent = hit, agent
    resolution = cap if best_time is None else best_time
    return TrialOutcome(best_time, best_agent, (resolution,) * k, engine)


# --- joint coverage accounting ------------------------------------------------------

def count_distinct_visited(scenario: Scenario, trial_index: int, horizon: int) -> int:
    """Distinct cells occupied by any agent at any time in [0, horizon].

    Walks every agent edge by edge regardless of the treasure (discovery
    does not stop the count). Bounded above by k * (horizon + 1) since each
    agent contributes at most one new cell per time unit plus its start.
    """
    if not 0 <= horizon <= scenario.time_cap:
        raise ParameterError(
            f"horizon must lie in [0, time_cap={scenario.time_cap}], got {horizon}"
        )
    visited: set[GridPoint] = {SOURCE}
    for agent in range(scenario.k):
        rng = agent_stream(scenario.master_seed, trial_index, agent)
        plan = scenario.strategy_for(agent).plan(rng)
        t = 0
        for pos in iter_positions(resolve_plan(plan)):
            t += 1
            if t > horizon:
                break
            visited.add(pos)
    return len(visited)
