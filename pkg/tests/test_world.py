import pytest

from godgrid.errors import GridOccupiedByBoss, InvalidGrid, InvalidIndex, OutOfBounds
from godgrid.world import (
    SUBGRID_COUNT,
    SUBGRID_SIZE,
    WORLD_SIZE,
    World,
    subgrid_to_world,
    validate_tile_grid,
    world_to_subgrid,
)


def full_grid(value):
    return [[value] * SUBGRID_SIZE for _ in range(SUBGRID_SIZE)]


def test_coordinate_examples():
    assert world_to_subgrid(0, 0) == (0, 0, 0)
    assert world_to_subgrid(39, 39) == (15, 9, 9)
    # frozen from the mapping formula, cross-checked below by exhaustion
    assert world_to_subgrid(13, 27) == (9, 3, 7)


def test_coordinate_bijection_exhaustive():
    seen = set()
    for y in range(WORLD_SIZE):
        for x in range(WORLD_SIZE):
            gi, lx, ly = world_to_subgrid(x, y)
            assert 0 <= gi < SUBGRID_COUNT
            assert subgrid_to_world(gi, lx, ly) == (x, y)
            seen.add((gi, lx, ly))
    assert len(seen) == WORLD_SIZE * WORLD_SIZE


@pytest.mark.parametrize("x,y", [(-1, 0), (0, -1), (40, 0), (0, 40)])
def test_out_of_bounds(x, y):
    with pytest.raises(OutOfBounds):
        world_to_subgrid(x, y)


def test_place_subgrid_replaces_exactly_one_grid():
    world = World.all_grass()
    before = world.cells_view()
    world.place_subgrid(5, full_grid(8))
    after = world.cells_view()
    changed = [
        (x, y)
        for y in range(WORLD_SIZE)
        for x in range(WORLD_SIZE)
        if before[y][x] != after[y][x]
    ]
    assert len(changed) == 100
    assert all(world_to_subgrid(x, y)[0] == 5 for x, y in changed)
    assert all(world.tile_at(x, y) == 8 for x, y in changed)


def test_place_rejects_invalid_grid_value():
    world = World.all_grass()
    bad = full_grid(0)
    bad[3][3] = 16
    with pytest.raises(InvalidGrid):
        world.place_subgrid(0, bad)


def test_place_rejects_wrong_shape():
    world = World.all_grass()
    with pytest.raises(InvalidGrid):
        world.place_subgrid(0, [[0] * 10 for _ in range(11)])
    with pytest.raises(InvalidGrid):
        world.place_subgrid(0, [[0] * 9 for _ in range(10)])


def test_place_rejects_bad_index():
    world = World.all_grass()
    with pytest.raises(InvalidIndex):
        world.place_subgrid(16, full_grid(0))
    with pytest.raises(InvalidIndex):
        world.place_subgrid(-1, full_grid(0))


def test_place_rejects_boss_grid():
    world = World.all_grass()
    world.grids[5].boss_occupied = True
    with pytest.raises(GridOccupiedByBoss):
        world.place_subgrid(5, full_grid(0))


def test_validate_tile_grid_copies():
    rows = full_grid(2)
    out = validate_tile_grid(rows)
    rows[0][0] = 9
    assert out[0][0] == 2


def test_boolean_is_not_a_tile_id():
    bad = full_grid(0)
    bad[0][0] = True
    with pytest.raises(InvalidGrid):
        validate_tile_grid(bad)
