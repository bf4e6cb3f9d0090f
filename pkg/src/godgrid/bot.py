"""Baseline headless player.

A deterministic stand-in for human play that exercises every mechanic:
terraform a forest, chop it for words, spend house words for population,
then march every fighter and archer at the oldest living boss. Decisions
run on a fixed cadence and depend only on the observed state, so the
emitted command stream (and thus the whole run) replays bit-identically.
"""

from __future__ import annotations

from .generate import AffinityTable
from .script import Command, TaskCommand, TerraformCommand
from .sim import (
    COMBAT_KINDS,
    GameState,
    MonsterKind,
    TaskKind,
    VillagerKind,
)
from .tiles import TileSet, load_tileset
from .world import SUBGRID_COUNT, WORLD_SIZE

DECISION_PERIOD_TICKS = 5
FOREST_GRID = 1
POPULATION_TARGET = 24
SQUAD_THRESHOLD = 6
LOW_TREE_REFILL = 6
# prompt padding pattern: mostly single-word prompts, a few longer ones
PAD_PATTERN = (0, 0, 0, 1, 0, 0, 2)


class BaselineBot:
    strict = False  # engine rejections are tolerated, never logged

    UNREACHABLE_RETRY_TICKS = 600

    def __init__(self, affinity: AffinityTable | None = None, tileset: TileSet | None = None):
        self.affinity = affinity if affinity is not None else AffinityTable.load()
        self.tileset = tileset if tileset is not None else load_tileset()
        self._last_assignment: dict[int, tuple[tuple[int, int], int]] = {}
        self._skip_until: dict[tuple[int, int], int] = {}

    # -- word classification --------------------------------------------------

    def _dominant_tile(self, word: str):
        entry = self.affinity.get(word)
        return None if entry is None else self.tileset[entry.dominant_tile()]

    def _owned_words(self, state: GameState, predicate):
        return sorted(
            word for word, count in state.inventory.counts.items() if count > 0 and predicate(self._dominant_tile(word))
        )

    def _junk_words(self, state: GameState):
        return self._owned_words(state, lambda tile: tile is None)

    def _prompt_for(self, state: GameState, main_word: str) -> tuple[str, ...]:
        pads = PAD_PATTERN[len(state.receipts) % len(PAD_PATTERN)]
        junk = [w for w in self._junk_words(state) if w != main_word]
        return tuple(junk[:pads]) + (main_word,)

    # -- map scanning -----------------------------------------------------------

    def _cells_where(self, state: GameState, predicate):
        cells = []
        for y in range(WORLD_SIZE):
            for x in range(WORLD_SIZE):
                if predicate(self.tileset[state.world.tile_at(x, y)]):
                    cells.append((x, y))
        return cells

    def _choppable_frontier(self, state: GameState):
        """Tree cells with at least one walkable 4-neighbor."""
        out = []
        for x, y in self._cells_where(state, lambda t: t.choppable):
            for nx, ny in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
                if 0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE:
                    if state.cost_model.walkable[state.world.tile_at(nx, ny)]:
                        out.append((x, y))
                        break
        return out

    def _free_grid(self, state: GameState, reserved=(0, FOREST_GRID)):
        for index in range(SUBGRID_COUNT):
            if index in reserved:
                continue
            if not state.world.grids[index].boss_occupied:
                return index
        return None

    # -- decisions ---------------------------------------------------------------

    def commands_for(self, state: GameState) -> list[Command]:
        if state.clock.tick % DECISION_PERIOD_TICKS != 0:
            return []
        tick = state.clock.tick
        commands: list[Command] = []
        terraform = self._terraform_decision(state)
        if terraform is not None:
            commands.append(TerraformCommand(tick=tick, grid_index=terraform[0], words=terraform[1]))
        commands.extend(self._worker_decisions(state, tick))
        commands.extend(self._military_decisions(state, tick))
        return commands

    def _terraform_decision(self, state: GameState):
        if not state.receipts:
            if state.inventory.count("forest"):
                return FOREST_GRID, self._prompt_for(state, "forest")
            return None
        population = len(state.villagers) + len(state.pending_house_cells)
        house_words = self._owned_words(state, lambda t: t is not None and t.spawns_villager)
        if population < POPULATION_TARGET and house_words:
            target = self._free_grid(state)
            if target is not None:
                return target, self._prompt_for(state, house_words[0])
        trees = self._cells_where(state, lambda t: t.choppable)
        tree_words = self._owned_words(state, lambda t: t is not None and t.choppable)
        if len(trees) < LOW_TREE_REFILL and tree_words:
            if not state.world.grids[FOREST_GRID].boss_occupied:
                return FOREST_GRID, self._prompt_for(state, tree_words[0])
            target = self._free_grid(state)
            if target is not None:
                return target, self._prompt_for(state, tree_words[0])
        return None

    def _note_failures(self, state: GameState, tick: int) -> None:
        """Blacklist targets a worker bounced off (instant idle after assign)."""
        for villager_id, (cell, assigned_at) in list(self._last_assignment.items()):
            villager = state.villagers.get(villager_id)
            if villager is None:
                del self._last_assignment[villager_id]
                continue
            if villager.task.kind is TaskKind.IDLE and tick - assigned_at <= 2 * DECISION_PERIOD_TICKS:
                if self.tileset[state.world.tile_at(*cell)].choppable:
                    self._skip_until[cell] = tick + self.UNREACHABLE_RETRY_TICKS

    def _worker_decisions(self, state: GameState, tick: int):
        commands = []
        self._note_failures(state, tick)
        workers = sorted(
            (v for v in state.villagers.values() if v.kind is VillagerKind.WORKER and v.task.kind is TaskKind.IDLE),
            key=lambda v: v.id,
        )
        if not workers:
            return commands
        frontier = [
            c for c in self._choppable_frontier(state) if self._skip_until.get(c, 0) <= tick
        ]
        busy_cells = {
            v.task.cell
            for v in state.villagers.values()
            if v.task.kind in (TaskKind.CHOP, TaskKind.COLLECT) and v.task.cell
        }
        treasures = self._cells_where(state, lambda t: t.grants_treasure)
        for worker in workers:
            wx, wy = worker.cell
            options = [c for c in frontier if c not in busy_cells]
            if options:
                cell = min(options, key=lambda c: (abs(c[0] - wx) + abs(c[1] - wy), c))
                busy_cells.add(cell)
                commands.append(TaskCommand(tick=tick, villager_id=worker.id, verb="chop", cell=cell))
                self._last_assignment[worker.id] = (cell, tick)
                continue
            loot = [c for c in treasures if c not in busy_cells]
            if loot:
                cell = min(loot, key=lambda c: (abs(c[0] - wx) + abs(c[1] - wy), c))
                busy_cells.add(cell)
                commands.append(TaskCommand(tick=tick, villager_id=worker.id, verb="collect", cell=cell))
                self._last_assignment[worker.id] = (cell, tick)
        return commands

    def _military_decisions(self, state: GameState, tick: int):
        if len(state.villagers) < SQUAD_THRESHOLD:
            return []
        bosses = [m for m in state.monsters.values() if m.kind is MonsterKind.BOSS and m.hp > 0]
        if not bosses:
            return []
        target = min(bosses, key=lambda m: m.id)
        commands = []
        for villager in sorted(state.villagers.values(), key=lambda v: v.id):
            if villager.kind not in COMBAT_KINDS:
                continue
            task = villager.task
            if task.kind is TaskKind.ATTACK and task.monster_id == target.id:
                continue
            commands.append(TaskCommand(tick=tick, villager_id=villager.id, verb="attack", monster_id=target.id))
        return commands
