"""godgrid: a deterministic god-game engine with word-driven terraforming.

Players (or bot policies) collect words from the world and spend them as
prompts to a pluggable text-to-tilegrid generator that reshapes the map
in real time, while villagers chop, fight, and build against a boss clock.
"""

from .bot import BaselineBot
from .config import GameConfig, config_from_dict, load_config
from .generate import (
    AffinityTable,
    GenerationPipeline,
    LocalBackend,
    Prompt,
    RemoteBackend,
    compose_prompt,
    generate_local,
)
from .pathfind import CostModel, find_path, nearest_walkable
from .postprocess import TerrainMaps, rock_heights, water_components, water_masks
from .runner import RunReport, ScriptPolicy, run_game
from .sim import (
    GameState,
    Monster,
    Outcome,
    Task,
    TaskKind,
    TerraformReceipt,
    Villager,
    VillagerKind,
    check_end,
    minion_scaling,
    new_game,
)
from .telemetry import (
    PromptLogEntry,
    append_log,
    parse_log,
    prompt_length_histogram,
    tile_frequency,
)
from .tiles import TileCategory, TileDef, TileSet, load_tileset
from .words import (
    DrawOutcome,
    WordFrequencyTable,
    WordGroup,
    WordInventory,
    WordPool,
    build_pool,
    load_word_frequencies,
)
from .world import SubGrid, World, subgrid_to_world, validate_tile_grid, world_to_subgrid

__version__ = "0.1.0"

__all__ = [
    "AffinityTable",
    "BaselineBot",
    "CostModel",
    "DrawOutcome",
    "GameConfig",
    "GameState",
    "GenerationPipeline",
    "LocalBackend",
    "Monster",
    "Outcome",
    "Prompt",
    "PromptLogEntry",
    "RemoteBackend",
    "RunReport",
    "ScriptPolicy",
    "SubGrid",
    "Task",
    "TaskKind",
    "TerrainMaps",
    "TerraformReceipt",
    "TileCategory",
    "TileDef",
    "TileSet",
    "Villager",
    "VillagerKind",
    "WordFrequencyTable",
    "WordGroup",
    "WordInventory",
    "WordPool",
    "World",
    "append_log",
    "build_pool",
    "check_end",
    "compose_prompt",
    "config_from_dict",
    "find_path",
    "generate_local",
    "load_config",
    "load_tileset",
    "load_word_frequencies",
    "minion_scaling",
    "nearest_walkable",
    "new_game",
    "parse_log",
    "prompt_length_histogram",
    "rock_heights",
    "run_game",
    "subgrid_to_world",
    "tile_frequency",
    "validate_tile_grid",
    "water_components",
    "water_masks",
    "world_to_subgrid",
]
