"""Derived terrain metadata computed after every placement.

Rock cells get an integer height level equal to their count of rock
neighbors in the 8-neighborhood, so clustered rocks read as mountains.
Water cells get a 4-bit connection mask (bit 0=N, 1=E, 2=S, 3=W) naming
which orthogonal neighbors are water, the standard autotile encoding.
Both are pure functions of the world and cross sub-grid boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tiles import TileCategory, TileSet
from .world import SUBGRID_SIZE, WORLD_SIZE, subgrid_origin

BIT_N, BIT_E, BIT_S, BIT_W = 1, 2, 4, 8

_DIAG8 = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))
_ORTHO = ((0, -1, BIT_N), (1, 0, BIT_E), (0, 1, BIT_S), (-1, 0, BIT_W))


def _category_lookup(tileset: TileSet, category: TileCategory) -> tuple[bool, ...]:
    return tuple(t.category == category for t in tileset)


def _rock_height_at(world, is_rock, x, y) -> int:
    if not is_rock[world.tile_at(x, y)]:
        return 0
    count = 0
    for dx, dy in _DIAG8:
        nx, ny = x + dx, y + dy
        if 0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE and is_rock[world.tile_at(nx, ny)]:
            count += 1
    return count


def _water_mask_at(world, is_water, x, y) -> int:
    if not is_water[world.tile_at(x, y)]:
        return 0
    mask = 0
    for dx, dy, bit in _ORTHO:
        nx, ny = x + dx, y + dy
        if 0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE and is_water[world.tile_at(nx, ny)]:
            mask |= bit
    return mask


def rock_heights(world, tileset: TileSet) -> list[list[int]]:
    is_rock = _category_lookup(tileset, TileCategory.ROCK)
    return [
        [_rock_height_at(world, is_rock, x, y) for x in range(WORLD_SIZE)]
        for y in range(WORLD_SIZE)
    ]


def water_masks(world, tileset: TileSet) -> list[list[int]]:
    is_water = _category_lookup(tileset, TileCategory.WATER)
    return [
        [_water_mask_at(world, is_water, x, y) for x in range(WORLD_SIZE)]
        for y in range(WORLD_SIZE)
    ]


def water_components(world, tileset: TileSet) -> list[set[tuple[int, int]]]:
    """4-connected components of water cells over the full world."""
    is_water = _category_lookup(tileset, TileCategory.WATER)
    seen: set[tuple[int, int]] = set()
    components = []
    for y in range(WORLD_SIZE):
        for x in range(WORLD_SIZE):
            if (x, y) in seen or not is_water[world.tile_at(x, y)]:
                continue
            component = set()
            stack = [(x, y)]
            seen.add((x, y))
            while stack:
                cx, cy = stack.pop()
                component.add((cx, cy))
                for dx, dy, _ in _ORTHO:
                    nx, ny = cx + dx, cy + dy
                    if (
                        0 <= nx < WORLD_SIZE
                        and 0 <= ny < WORLD_SIZE
                        and (nx, ny) not in seen
                        and is_water[world.tile_at(nx, ny)]
                    ):
                        seen.add((nx, ny))
                        stack.append((nx, ny))
            components.append(component)
    return components


@dataclass
class TerrainMaps:
    """Incrementally maintained rock-height and water-mask layers."""

    rock_heights: list[list[int]]
    water_masks: list[list[int]]

    @classmethod
    def compute(cls, world, tileset: TileSet) -> "TerrainMaps":
        return cls(rock_heights=rock_heights(world, tileset), water_masks=water_masks(world, tileset))

    def update_subgrid(self, world, tileset: TileSet, grid_index: int) -> None:
        """Recompute the placed sub-grid plus its 1-cell border."""
        is_rock = _category_lookup(tileset, TileCategory.ROCK)
        is_water = _category_lookup(tileset, TileCategory.WATER)
        ox, oy = subgrid_origin(grid_index)
        for y in range(max(0, oy - 1), min(WORLD_SIZE, oy + SUBGRID_SIZE + 1)):
            for x in range(max(0, ox - 1), min(WORLD_SIZE, ox + SUBGRID_SIZE + 1)):
                self.rock_heights[y][x] = _rock_height_at(world, is_rock, x, y)
                self.water_masks[y][x] = _water_mask_at(world, is_water, x, y)
