"""Integer-lattice geometry: distances, balls, travel paths, and the square spiral.

Everything in this module is exact integer arithmetic. Agents live on the
grid of integer points, move one axis-parallel edge per time unit, and all
distance accounting downstream (hit times, budgets, coverage radii) rests on
the primitives defined here.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "GridPoint",
    "ORIGIN",
    "Ball",
    "SpiralShape",
    "l1_distance",
    "linf_distance",
    "ball_size",
    "ring_size",
    "ring_point",
    "sample_ball_uniform",
    "sample_ring_uniform",
    "travel_path",
    "iter_travel",
    "spiral_step",
    "spiral_hit_index",
    "spiral_duration",
]


class GridPoint(NamedTuple):
    """A lattice cell. Compares equal to a plain ``(x, y)`` tuple."""

    x: int
    y: int


ORIGIN = GridPoint(0, 0)


def l1_distance(a: GridPoint, b: GridPoint) -> int:
    """Taxicab distance between two cells."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def linf_distance(a: GridPoint, b: GridPoint) -> int:
    """Chebyshev distance; the spiral expands one L-infinity ring at a time."""
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def ball_size(radius: int) -> int:
    """Number of cells within taxicab distance ``radius`` of a center.

    Closed form 2r^2 + 2r + 1: the center plus 4d cells on each ring d <= r.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    return 2 * radius * radius + 2 * radius + 1


def ring_size(distance: int) -> int:
    """Number of cells at taxicab distance exactly ``distance`` (>= 1)."""
    if distance < 1:
        raise ValueError(f"ring distance must be >= 1, got {distance}")
    return 4 * distance


def ring_point(center: GridPoint, distance: int, index: int) -> GridPoint:
    """The ``index``-th cell of the taxicab ring, in a fixed enumeration.

    Enumeration starts at (center.x + distance, center.y) and walks the
    diamond counterclockwise. ``index`` must lie in [0, 4*distance).
    """
    d = distance
    if not 0 <= index < 4 * d:
        raise ValueError(f"ring index {index} out of range for distance {d}")
    quadrant, u = divmod(index, d)
    if quadrant == 0:
        dx, dy = d - u, u
    elif quadrant == 1:
        dx, dy = -u, d - u
    elif quadrant == 2:
        dx, dy = -d + u, -u
    else:
        dx, dy = u, -d + u
    return GridPoint(center[0] + dx, center[1] + dy)


class Ball(NamedTuple):
    """Closed taxicab ball."""

    center: GridPoint
    radius: int

    @property
    def size(self) -> int:
        return ball_size(self.radius)

    def contains(self, point: GridPoint) -> bool:
        return l1_distance(self.center, point) <= self.radius


# --- random samplers ---------------------------------------------------------

def sample_ball_uniform(rng: np.random.Generator, center: GridPoint, radius: int) -> GridPoint:
    """Draw a cell uniformly from the closed taxicab ball around ``center``.

    Unranks a uniform draw u from [0, ball_size(radius)): u = 0 is the
    center, and any other u decodes to ring distance d = (1+isqrt(2u-1))//2
    with offset u - ball_size(d-1) along that ring's fixed enumeration
    (the decode mirrors ring_point, inlined because plans sample once per
    phase). u comes from one raw 64-bit word reduced modulo the ball size,
    with words at or above the largest multiple of the ball size redrawn so
    every cell has probability exactly 1/ball_size(r). The redraw fires
    with probability below 2^-40 for any radius a plan can reach.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if radius == 0:
        return center
    n = 2 * radius * radius + 2 * radius + 1
    raw = rng.bit_generator.random_raw
    cutoff = (1 << 64) - ((1 << 64) % n)
    while True:
        w = raw()
        if w < cutoff:
            break
    u = w % n
    if u == 0:
        return center
    d = (1 + math.isqrt(2 * u - 1)) // 2
    quadrant, m = divmod(u - (2 * d * d - 2 * d + 1), d)
    if quadrant == 0:
        dx, dy = d - m, m
    elif quadrant == 1:
        dx, dy = -m, d - m
    elif quadrant == 2:
        dx, dy = m - d, -m
    else:
        dx, dy = m, m - d
    return GridPoint(center[0] + dx, center[1] + dy)


def sample_ring_uniform(rng: np.random.Generator, center: GridPoint, distance: int) -> GridPoint:
    """Draw a cell uniformly among the 4d cells at taxicab distance exactly d."""
    idx = int(rng.integers(0, 4 * distance))
    return ring_point(center, distance, idx)


# --- travel paths -------------------------------------------------------------

def iter_travel(start: GridPoint, goal: GridPoint) -> Iterator[GridPoint]:
    """Lazily yield the cells of the monotone L-path from start to goal.

    All x moves come first (toward goal.x), then all y moves. The first
    yielded cell is the one after ``start``; the last is ``goal``. Yields
    nothing when start == goal.
    """
    x0, y0 = start
    x1, y1 = goal
    step = 1 if x1 > x0 else -1
    for x in range(x0 + step, x1 + step, step) if x1 != x0 else ():
        yield GridPoint(x, y0)
    step = 1 if y1 > y0 else -1
    for y in range(y0 + step, y1 + step, step) if y1 != y0 else ():
        yield GridPoint(x1, y)


def travel_path(start: GridPoint, goal: GridPoint) -> list[GridPoint]:
    """The L-shaped path from start to goal as a list (x leg, then y leg).

    len(path) == l1_distance(start, goal); empty when the endpoints agree.
    The return leg of a search phase is travel_path(position, source), i.e.
    the same rule applied from the other end, which mirrors the L.
    """
    return list(iter_travel(start, goal))


# --- square spiral -------------------------------------------------------------

class SpiralShape(NamedTuple):
    """Concrete realization of a spiral budget: edge count and covered radius."""

    steps: int
    radius: int


def spiral_step(origin: GridPoint, step: int) -> GridPoint:
    """Position after ``step`` edges of the canonical square spiral.

    Step 0 is the origin; the first move is +x and the turn sense is
    counterclockwise. The walk is a bijection onto the grid: ring m
    (L-infinity distance m) occupies step indices (2m-1)^2 .. (2m+1)^2 - 1,
    so after (2m+1)^2 - 1 steps every cell within L-infinity distance m has
    been visited exactly once.
    """
    if step < 0:
        raise ValueError(f"spiral step must be >= 0, got {step}")
    if step == 0:
        return origin
    m = (math.isqrt(step) + 1) // 2
    offset = step - (2 * m - 1) ** 2
    if offset <= 2 * m - 1:
        dx, dy = m, -m + 1 + offset
    elif offset <= 4 * m - 1:
        dx, dy = m - (offset - (2 * m - 1)), m
    elif offset <= 6 * m - 1:
        dx, dy = -m, m - (offset - (4 * m - 1))
    else:
        dx, dy = -m + (offset - (6 * m - 1)), -m
    return GridPoint(origin[0] + dx, origin[1] + dy)


def spiral_hit_index(origin: GridPoint, target: GridPoint) -> int:
    """Inverse of :func:`spiral_step`: the unique step index visiting ``target``.

    Constant arithmetic via ring decomposition; no walking.
    """
    dx = target[0] - origin[0]
    dy = target[1] - origin[1]
    m = max(abs(dx), abs(dy))
    if m == 0:
        return 0
    if dx == m and dy > -m:
        offset = dy + m - 1
    elif dy == m:
        offset = (2 * m - 1) + (m - dx)
    elif dx == -m:
        offset = (4 * m - 1) + (m - dy)
    else:
        offset = (6 * m - 1) + (m + dx)
    return (2 * m - 1) ** 2 + offset


@lru_cache(maxsize=1 << 16)
def spiral_duration(budget: int) -> SpiralShape:
    """Concrete spiral shape for a requested edge budget.

    The budget is rounded up to a whole number of rings: radius is the
    smallest r with (2r)^2 >= budget, i.e. ceil(sqrt(budget)/2), and the
    realized step count is (2r+1)^2 - 1 >= budget. A spiral of ``steps``
    edges therefore visits every cell within taxicab distance radius >=
    sqrt(budget)/2 of its origin, at an overhead of O(sqrt(budget)) extra
    edges. Budgets repeat heavily across phases and trials, so results are
    memoized.
    """
    if budget < 0:
        raise ValueError(f"spiral budget must be >= 0, got {budget}")
    if budget == 0:
        return SpiralShape(0, 0)
    c = math.isqrt(budget)
    if c * c < budget:
        c += 1
    radius = (c + 1) // 2
    return SpiralShape((2 * radius + 1) ** 2 - 1, radius)
