"""Grid pathfinding over tile movement semantics.

The cost to enter a cell is 1 / speed_multiplier; blocked tiles are
excluded outright. Costs are integers (speeds are rationals, so a common
denominator makes every entry cost exact), which keeps optimal-cost
comparisons free of float noise.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import OutOfBounds
from .tiles import TileSet
from .world import WORLD_SIZE

_NEIGHBORS = ((0, -1), (1, 0), (0, 1), (-1, 0))


@dataclass(frozen=True)
class CostModel:
    walkable: tuple[bool, ...]
    entry_cost: tuple[int, ...]  # integer cost units to step onto each tile
    cost_scale: int  # units per 1.0 of raw cost (1 / speed)
    speed: tuple[float, ...]

    @classmethod
    def from_tileset(cls, tileset: TileSet) -> "CostModel":
        raw = [Fraction(1, 1) / Fraction(str(t.speed_multiplier)) for t in tileset]
        scale = lcm(*(c.denominator for c in raw))
        return cls(
            walkable=tuple(t.walkable for t in tileset),
            entry_cost=tuple(int(c * scale) for c in raw),
            cost_scale=scale,
            speed=tuple(t.speed_multiplier for t in tileset),
        )


def _check_bounds(cell):
    x, y = cell
    if not (0 <= x < WORLD_SIZE and 0 <= y < WORLD_SIZE):
        raise OutOfBounds(f"cell {cell} outside the world")


def find_path(world, cost_model: CostModel, start, goal):
    """Minimal-cost 4-connected path as a cell list, or None if unreachable."""
    _check_bounds(start)
    _check_bounds(goal)
    if not cost_model.walkable[world.tile_at(*start)] or not cost_model.walkable[world.tile_at(*goal)]:
        return None
    if start == goal:
        return [start]

    min_cost = min(
        c for c, w in zip(cost_model.entry_cost, cost_model.walkable) if w
    )

    def heuristic(cell):
        return (abs(cell[0] - goal[0]) + abs(cell[1] - goal[1])) * min_cost

    best = {start: 0}
    came_from = {}
    counter = 0  # monotone tie-breaker for deterministic expansion order
    frontier = [(heuristic(start), 0, start)]
    while frontier:
        _, tie, current = heapq.heappop(frontier)
        if current == goal:
            path = [current]
            while current in came_from:
                current = came_from[current]
                path.append(current)
            path.reverse()
            return path
        cx, cy = current
        for dx, dy in _NEIGHBORS:
            nxt = (cx + dx, cy + dy)
            nx, ny = nxt
            if not (0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE):
                continue
            tile = world.tile_at(nx, ny)
            if not cost_model.walkable[tile]:
                continue
            g = best[current] + cost_model.entry_cost[tile]
            if nxt not in best or g < best[nxt]:
                best[nxt] = g
                came_from[nxt] = current
                counter += 1
                heapq.heappush(frontier, (g + heuristic(nxt), counter, nxt))
    return None


def path_cost(world, cost_model: CostModel, path) -> int:
    """Total integer entry cost along a path (start cell is free)."""
    return sum(cost_model.entry_cost[world.tile_at(x, y)] for x, y in path[1:])


def find_path_to_any(world, cost_model: CostModel, start, goals):
    """Cheapest path from start to any of ``goals`` with one search.

    Returns (path, goal) or (None, None). Equivalent to running find_path
    per goal and keeping the cheapest, but explores the grid once.
    """
    _check_bounds(start)
    goal_set = set()
    for goal in goals:
        _check_bounds(goal)
        if cost_model.walkable[world.tile_at(*goal)]:
            goal_set.add(goal)
    if not goal_set or not cost_model.walkable[world.tile_at(*start)]:
        return None, None
    if start in goal_set:
        return [start], start

    min_cost = min(c for c, w in zip(cost_model.entry_cost, cost_model.walkable) if w)

    def heuristic(cell):
        return min(abs(cell[0] - gx) + abs(cell[1] - gy) for gx, gy in goal_set) * min_cost

    best = {start: 0}
    came_from = {}
    counter = 0
    frontier = [(heuristic(start), 0, start)]
    while frontier:
        _, tie, current = heapq.heappop(frontier)
        if current in goal_set:
            goal = current
            path = [current]
            while current in came_from:
                current = came_from[current]
                path.append(current)
            path.reverse()
            return path, goal
        cx, cy = current
        for dx, dy in _NEIGHBORS:
            nxt = (cx + dx, cy + dy)
            nx, ny = nxt
            if not (0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE):
                continue
            tile = world.tile_at(nx, ny)
            if not cost_model.walkable[tile]:
                continue
            g = best[current] + cost_model.entry_cost[tile]
            if nxt not in best or g < best[nxt]:
                best[nxt] = g
                came_from[nxt] = current
                counter += 1
                heapq.heappush(frontier, (g + heuristic(nxt), counter, nxt))
    return None, None


def dijkstra_cost(world, cost_model: CostModel, start, goal):
    """Uniform-cost-search oracle: optimal cost or None. Test reference."""
    _check_bounds(start)
    _check_bounds(goal)
    if not cost_model.walkable[world.tile_at(*start)] or not cost_model.walkable[world.tile_at(*goal)]:
        return None
    dist = {start: 0}
    frontier = [(0, start)]
    while frontier:
        d, current = heapq.heappop(frontier)
        if current == goal:
            return d
        if d > dist.get(current, 0):
            continue
        cx, cy = current
        for dx, dy in _NEIGHBORS:
            nxt = (cx + dx, cy + dy)
            nx, ny = nxt
            if not (0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE):
                continue
            tile = world.tile_at(nx, ny)
            if not cost_model.walkable[tile]:
                continue
            nd = d + cost_model.entry_cost[tile]
            if nxt not in dist or nd < dist[nxt]:
                dist[nxt] = nd
                heapq.heappush(frontier, (nd, nxt))
    return None


def flow_distances(world, cost_model: CostModel, goal):
    """Cost-to-goal field over all walkable cells (Dijkstra from the goal).

    Descending the field step by step walks a minimal-cost route, so one
    field serves any number of pursuers of the same target. A blocked goal
    seeds the flood from its walkable neighbors instead.
    """
    _check_bounds(goal)
    if cost_model.walkable[world.tile_at(*goal)]:
        sources = [goal]
    else:
        gx, gy = goal
        sources = [
            (nx, ny)
            for nx, ny in ((gx, gy - 1), (gx + 1, gy), (gx, gy + 1), (gx - 1, gy))
            if 0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE and cost_model.walkable[world.tile_at(nx, ny)]
        ]
    dist: dict[tuple[int, int], int] = {s: 0 for s in sources}
    frontier = [(0, s) for s in sources]
    heapq.heapify(frontier)
    while frontier:
        d, current = heapq.heappop(frontier)
        if d > dist.get(current, 0):
            continue
        cx, cy = current
        for dx, dy in _NEIGHBORS:
            nxt = (cx + dx, cy + dy)
            nx, ny = nxt
            if not (0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE):
                continue
            tile = world.tile_at(nx, ny)
            if not cost_model.walkable[tile]:
                continue
            nd = d + cost_model.entry_cost[tile]
            if nxt not in dist or nd < dist[nxt]:
                dist[nxt] = nd
                heapq.heappush(frontier, (nd, nxt))
    return dist


def nearest_walkable(world, cost_model: CostModel, origin):
    """Closest walkable cell by breadth-first ring search from origin.

    The search expands through blocked cells too, so a target enclosed by
    walls still resolves to the nearest open cell outside the enclosure.
    """
    _check_bounds(origin)
    seen = {origin}
    queue = [origin]
    while queue:
        next_ring = []
        for cell in queue:
            if cost_model.walkable[world.tile_at(*cell)]:
                return cell
            cx, cy = cell
            for dx, dy in _NEIGHBORS:
                nxt = (cx + dx, cy + dy)
                if nxt in seen:
                    continue
                nx, ny = nxt
                if 0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE:
                    seen.add(nxt)
                    next_ring.append(nxt)
        queue = next_ring
    return None
