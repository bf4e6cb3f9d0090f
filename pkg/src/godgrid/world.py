"""World layout: a 4x4 arrangement of 10x10 sub-grids (40x40 tiles).

Coordinates are ``(x, y)`` with x growing east and y growing south; row 0 is
the top of the map everywhere (wire format, generated grids, world state).
Sub-grids are indexed row-major: index = (y // 10) * 4 + (x // 10).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GridOccupiedByBoss, InvalidGrid, InvalidIndex, OutOfBounds
from .tiles import is_valid_tile_id

SUBGRID_SIZE = 10
GRID_COLS = 4
GRID_ROWS = 4
SUBGRID_COUNT = GRID_COLS * GRID_ROWS
WORLD_SIZE = SUBGRID_SIZE * GRID_COLS

TileGrid = list  # 10x10 nested list of tile ids, rows top to bottom


def validate_tile_grid(rows) -> list[list[int]]:
    """Check shape (10x10) and value range (0..15); returns a fresh copy."""
    if not isinstance(rows, (list, tuple)) or len(rows) != SUBGRID_SIZE:
        raise InvalidGrid(f"expected {SUBGRID_SIZE} rows")
    out: list[list[int]] = []
    for row in rows:
        if not isinstance(row, (list, tuple)) or len(row) != SUBGRID_SIZE:
            raise InvalidGrid(f"expected {SUBGRID_SIZE} columns per row")
        for value in row:
            if not is_valid_tile_id(value):
                raise InvalidGrid(f"tile value {value!r} outside 0..15")
        out.append([int(v) for v in row])
    return out


def world_to_subgrid(x: int, y: int) -> tuple[int, int, int]:
    """Map a world cell to (grid_index, local_x, local_y)."""
    if not (0 <= x < WORLD_SIZE and 0 <= y < WORLD_SIZE):
        raise OutOfBounds(f"({x}, {y}) outside the {WORLD_SIZE}x{WORLD_SIZE} world")
    return (y // SUBGRID_SIZE) * GRID_COLS + (x // SUBGRID_SIZE), x % SUBGRID_SIZE, y % SUBGRID_SIZE


def subgrid_to_world(grid_index: int, local_x: int, local_y: int) -> tuple[int, int]:
    """Inverse of :func:`world_to_subgrid`."""
    if not 0 <= grid_index < SUBGRID_COUNT:
        raise InvalidIndex(f"grid index {grid_index} outside 0..{SUBGRID_COUNT - 1}")
    if not (0 <= local_x < SUBGRID_SIZE and 0 <= local_y < SUBGRID_SIZE):
        raise OutOfBounds(f"local ({local_x}, {local_y}) outside the sub-grid")
    return (grid_index % GRID_COLS) * SUBGRID_SIZE + local_x, (grid_index // GRID_COLS) * SUBGRID_SIZE + local_y


def subgrid_origin(grid_index: int) -> tuple[int, int]:
    """World cell of the sub-grid's top-left corner."""
    return subgrid_to_world(grid_index, 0, 0)


@dataclass
class SubGrid:
    cells: list[list[int]] = field(default_factory=lambda: [[0] * SUBGRID_SIZE for _ in range(SUBGRID_SIZE)])
    boss_occupied: bool = False


class World:
    """Mutable 40x40 tile world owned by a single simulation writer."""

    def __init__(self, grids: list[SubGrid] | None = None):
        if grids is None:
            grids = [SubGrid() for _ in range(SUBGRID_COUNT)]
        if len(grids) != SUBGRID_COUNT:
            raise InvalidIndex(f"expected {SUBGRID_COUNT} sub-grids")
        self.grids = grids
        self.version = 0  # bumped on every mutation; callers may key caches on it

    @classmethod
    def all_grass(cls, grass_id: int = 0) -> "World":
        return cls([SubGrid(cells=[[grass_id] * SUBGRID_SIZE for _ in range(SUBGRID_SIZE)]) for _ in range(SUBGRID_COUNT)])

    def tile_at(self, x: int, y: int) -> int:
        gi, lx, ly = world_to_subgrid(x, y)
        return self.grids[gi].cells[ly][lx]

    def set_tile(self, x: int, y: int, tile_id: int) -> None:
        if not is_valid_tile_id(tile_id):
            raise InvalidGrid(f"tile value {tile_id!r} outside 0..15")
        gi, lx, ly = world_to_subgrid(x, y)
        self.grids[gi].cells[ly][lx] = tile_id
        self.version += 1

    def place_subgrid(self, grid_index: int, grid) -> None:
        """Replace one sub-grid's cells wholesale; rejects boss-held grids."""
        if not isinstance(grid_index, int) or not 0 <= grid_index < SUBGRID_COUNT:
            raise InvalidIndex(f"grid index {grid_index!r} outside 0..{SUBGRID_COUNT - 1}")
        cells = validate_tile_grid(grid)
        if self.grids[grid_index].boss_occupied:
            raise GridOccupiedByBoss(f"sub-grid {grid_index} is held by a boss")
        self.grids[grid_index].cells = cells
        self.version += 1

    def cells_view(self) -> list[list[int]]:
        """Full 40x40 matrix of tile ids, row-major, row 0 = top."""
        out = []
        for y in range(WORLD_SIZE):
            row = []
            for x in range(WORLD_SIZE):
                gi, lx, ly = (y // SUBGRID_SIZE) * GRID_COLS + (x // SUBGRID_SIZE), x % SUBGRID_SIZE, y % SUBGRID_SIZE
                row.append(self.grids[gi].cells[ly][lx])
            out.append(row)
        return out

    def occupied_grid_count(self) -> int:
        return sum(1 for g in self.grids if g.boss_occupied)
