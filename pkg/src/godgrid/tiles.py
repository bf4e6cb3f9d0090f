"""The 16-tile vocabulary and per-tile gameplay semantics.

Tiles are described by a JSON config so an alternate id ordering (e.g. one
matching a differently-trained generator) can be dropped in without code
changes. The shipped default lives at ``data/tileset.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import DuplicateId, MissingTile, SemanticsViolation

TILE_COUNT = 16
MIN_TILE_ID = 0
MAX_TILE_ID = 15


class TileCategory(str, Enum):
    GRASS = "grass"
    FLOWERS = "flowers"
    BUSHES = "bushes"
    PATH = "path"
    SAND = "sand"
    ROCK = "rock"
    FENCE = "fence"
    POST = "post"
    TREE = "tree"
    WATER = "water"
    HOUSE_DOOR = "house_door"
    HOUSE_WINDOW = "house_window"
    HOUSE_ROOF = "house_roof"
    TREASURE_BALL = "treasure_ball"
    DECORATIVE = "decorative"


HOUSE_CATEGORIES = frozenset(
    {TileCategory.HOUSE_DOOR, TileCategory.HOUSE_WINDOW, TileCategory.HOUSE_ROOF}
)

# Categories that must each be represented by at least one tile. Fence/post
# and the three house kinds count as grouped families.
_REQUIRED_ALONE = frozenset(
    {
        TileCategory.GRASS,
        TileCategory.FLOWERS,
        TileCategory.BUSHES,
        TileCategory.PATH,
        TileCategory.SAND,
        TileCategory.ROCK,
        TileCategory.TREE,
        TileCategory.WATER,
        TileCategory.TREASURE_BALL,
    }
)


def is_valid_tile_id(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and MIN_TILE_ID <= value <= MAX_TILE_ID


@dataclass(frozen=True)
class TileDef:
    id: int
    name: str
    category: TileCategory
    walkable: bool
    speed_multiplier: float
    choppable: bool = False
    heals: bool = False
    spawns_villager: bool = False
    grants_treasure: bool = False


@dataclass(frozen=True)
class TileSet:
    """Validated, id-indexed collection of exactly 16 tile definitions."""

    tiles: tuple[TileDef, ...]

    def __getitem__(self, tile_id: int) -> TileDef:
        return self.tiles[tile_id]

    def __iter__(self):
        return iter(self.tiles)

    def by_name(self, name: str) -> TileDef:
        for tile in self.tiles:
            if tile.name == name:
                return tile
        raise KeyError(name)

    def ids_in_category(self, category: TileCategory) -> tuple[int, ...]:
        return tuple(t.id for t in self.tiles if t.category == category)

    @property
    def grass_id(self) -> int:
        return self.ids_in_category(TileCategory.GRASS)[0]


def _check_semantics(tile: TileDef) -> None:
    if not 0 < tile.speed_multiplier <= 1:
        raise SemanticsViolation(f"{tile.name}: speed_multiplier must be in (0, 1]")
    if tile.category == TileCategory.ROCK and tile.walkable:
        raise SemanticsViolation(f"{tile.name}: rock tiles block movement")
    if tile.category == TileCategory.WATER:
        if not tile.walkable:
            raise SemanticsViolation(f"{tile.name}: water tiles are walkable")
        if tile.speed_multiplier >= 1:
            raise SemanticsViolation(f"{tile.name}: water must slow movement")
    if tile.choppable != (tile.category == TileCategory.TREE):
        raise SemanticsViolation(f"{tile.name}: choppable is reserved for tree tiles")
    if tile.heals != (tile.category == TileCategory.FLOWERS):
        raise SemanticsViolation(f"{tile.name}: heals is reserved for flower tiles")
    if tile.spawns_villager != (tile.category in HOUSE_CATEGORIES):
        raise SemanticsViolation(f"{tile.name}: spawns_villager is reserved for house tiles")
    if tile.grants_treasure != (tile.category == TileCategory.TREASURE_BALL):
        raise SemanticsViolation(f"{tile.name}: grants_treasure is reserved for treasure balls")


def build_tileset(tile_defs: list[TileDef]) -> TileSet:
    if len(tile_defs) != TILE_COUNT:
        raise MissingTile(f"expected {TILE_COUNT} tiles, got {len(tile_defs)}")
    seen_ids: set[int] = set()
    seen_names: set[str] = set()
    for tile in tile_defs:
        if tile.id in seen_ids:
            raise DuplicateId(f"tile id {tile.id} declared twice")
        seen_ids.add(tile.id)
        if tile.name in seen_names:
            raise SemanticsViolation(f"tile name {tile.name!r} declared twice")
        seen_names.add(tile.name)
    if seen_ids != set(range(TILE_COUNT)):
        raise SemanticsViolation(f"tile ids must cover 0..{MAX_TILE_ID} exactly")
    for tile in tile_defs:
        _check_semantics(tile)
    categories = {t.category for t in tile_defs}
    missing = _REQUIRED_ALONE - categories
    if missing:
        raise SemanticsViolation(f"missing tile categories: {sorted(c.value for c in missing)}")
    if not categories & {TileCategory.FENCE, TileCategory.POST}:
        raise SemanticsViolation("no fence or post tile present")
    if not categories & HOUSE_CATEGORIES:
        raise SemanticsViolation("no house tile present")
    ordered = tuple(sorted(tile_defs, key=lambda t: t.id))
    return TileSet(tiles=ordered)


def _tile_from_entry(entry: dict) -> TileDef:
    try:
        category = TileCategory(entry["category"])
    except (KeyError, ValueError):
        raise SemanticsViolation(f"unknown tile category in entry {entry.get('name', '?')!r}")
    try:
        tile_id = entry["id"]
        if not is_valid_tile_id(tile_id):
            raise SemanticsViolation(f"tile id {tile_id!r} outside 0..{MAX_TILE_ID}")
        return TileDef(
            id=tile_id,
            name=str(entry["name"]),
            category=category,
            walkable=bool(entry["walkable"]),
            speed_multiplier=float(entry["speed_multiplier"]),
            choppable=bool(entry.get("choppable", False)),
            heals=bool(entry.get("heals", False)),
            spawns_villager=bool(entry.get("spawns_villager", False)),
            grants_treasure=bool(entry.get("grants_treasure", False)),
        )
    except KeyError as exc:
        raise SemanticsViolation(f"tile entry missing field {exc}")


def tileset_from_config(document: dict) -> TileSet:
    """Validate a parsed config document into a TileSet."""
    entries = document.get("tiles")
    if not isinstance(entries, list):
        raise MissingTile("config document has no 'tiles' list")
    return build_tileset([_tile_from_entry(e) for e in entries])


def default_tileset_path() -> Path:
    return Path(str(resources.files("godgrid").joinpath("data/tileset.json")))


def load_tileset(path: str | Path | None = None) -> TileSet:
    """Load and validate a tileset config; ``None`` loads the shipped default."""
    target = Path(path) if path is not None else default_tileset_path()
    with open(target, "r", encoding="utf-8") as fh:
        document = json.load(fh)
    return tileset_from_config(document)
