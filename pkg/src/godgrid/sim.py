"""Deterministic real-time game loop.

Tick processing order (fixed; replay determinism depends on it):

  1. villagers act in id order: follow paths, chop, swing, collect
  2. villagers standing on healing tiles regain hp
  3. monsters act in id order: acquire targets in their home grid, move, swing
  4. boss grids holding villagers advance their minion spawn timers
  5. the tick counter advances
  6. a new boss claims a free sub-grid on exact interval ticks
  7. the day rollover spawns villagers for houses placed the previous day
  8. dead entities are removed; boss deaths free their grids and grant xp
  9. end conditions are evaluated (loss wins a same-tick tie)

All timers are tick-quantized; elapsed seconds are derived, never stored.
A session's state is mutated only by its single owner.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum

from .config import GameConfig
from .errors import (
    EngineError,
    GridOccupiedByBoss,
    IllegalTask,
    InvalidIndex,
    NotChoppable,
    NothingToCollect,
    OutOfBounds,
    UnknownVillager,
)
from .generate import (
    AffinityTable,
    GenerationPipeline,
    LocalBackend,
    Prompt,
    RemoteBackend,
    compose_prompt,
)
from .pathfind import CostModel, find_path_to_any, flow_distances, nearest_walkable
from .postprocess import TerrainMaps
from .rng import RngStreams, derive_seed
from .tiles import TileSet, load_tileset
from .words import WordInventory, WordPool, build_pool, load_word_frequencies
from .world import (
    SUBGRID_COUNT,
    SUBGRID_SIZE,
    WORLD_SIZE,
    World,
    subgrid_origin,
    world_to_subgrid,
)


class GameOver(EngineError):
    code = "game_over"


class VillagerKind(str, Enum):
    FIGHTER = "fighter"
    ARCHER = "archer"
    WORKER = "worker"


VILLAGER_KINDS = (VillagerKind.FIGHTER, VillagerKind.ARCHER, VillagerKind.WORKER)


class MonsterKind(str, Enum):
    BOSS = "boss"
    MINION = "minion"


class Outcome(str, Enum):
    ONGOING = "ongoing"
    WIN = "win"
    LOSE = "lose"


class TaskKind(str, Enum):
    IDLE = "idle"
    MOVE = "move"
    CHOP = "chop"
    ATTACK = "attack"
    COLLECT = "collect"


@dataclass
class Task:
    kind: TaskKind = TaskKind.IDLE
    cell: tuple[int, int] | None = None
    monster_id: int | None = None

    @classmethod
    def idle(cls) -> "Task":
        return cls()

    def as_dict(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.cell is not None:
            out["cell"] = list(self.cell)
        if self.monster_id is not None:
            out["monster_id"] = self.monster_id
        return out


COMBAT_KINDS = (VillagerKind.FIGHTER, VillagerKind.ARCHER)


@dataclass
class Villager:
    id: int
    kind: VillagerKind
    hp: float
    max_hp: float
    x: float
    y: float
    level: int = 1
    xp: float = 0.0
    task: Task = field(default_factory=Task.idle)
    path: list[tuple[int, int]] | None = None
    path_goal: tuple[int, int] | None = None
    chop_progress: float = 0.0
    swing_cooldown: float = 0.0

    @property
    def cell(self) -> tuple[int, int]:
        return int(self.x), int(self.y)


@dataclass
class Monster:
    id: int
    kind: MonsterKind
    hp: float
    max_hp: float
    grid_index: int
    x: float
    y: float
    target_id: int | None = None
    swing_cooldown: float = 0.0
    minion_timer: float = 0.0  # bosses only

    @property
    def cell(self) -> tuple[int, int]:
        return int(self.x), int(self.y)


@dataclass
class GameClock:
    tick: int = 0
    tick_seconds: float = 0.1
    day_length_s: float = 120.0
    boss_interval_s: float = 120.0

    @property
    def elapsed_s(self) -> float:
        return self.tick * self.tick_seconds

    @property
    def ticks_per_day(self) -> int:
        return max(1, round(self.day_length_s / self.tick_seconds))

    @property
    def ticks_per_boss(self) -> int:
        return max(1, round(self.boss_interval_s / self.tick_seconds))

    @property
    def day_index(self) -> int:
        return self.tick // self.ticks_per_day


@dataclass(frozen=True)
class TerraformReceipt:
    grid_index: int
    prompt: Prompt
    grid: list[list[int]]
    backend: str
    tick: int
    words_spent: tuple[str, ...]


def minion_scaling(elapsed_s: float, config: GameConfig | None = None) -> float:
    """Spawn interval in seconds; shrinks geometrically with game time."""
    config = config or GameConfig()
    interval = config.minion_base_interval_s * config.minion_decay ** (elapsed_s / 120.0)
    return max(config.minion_min_interval_s, interval)


def _dist(ax, ay, bx, by) -> float:
    return math.hypot(ax - bx, ay - by)


class GameState:
    def __init__(
        self,
        config: GameConfig,
        seed: int,
        tileset: TileSet | None = None,
        pool: WordPool | None = None,
        pipeline: GenerationPipeline | None = None,
    ):
        self.config = config.validate()
        self.seed = seed
        self.tileset = tileset if tileset is not None else load_tileset()
        self.cost_model = CostModel.from_tileset(self.tileset)
        self.clock = GameClock(
            tick_seconds=config.tick_seconds,
            day_length_s=config.day_length_s,
            boss_interval_s=config.boss_interval_s,
        )
        self.world = World.all_grass(self.tileset.grass_id)
        self.maps = TerrainMaps.compute(self.world, self.tileset)
        self.pool = pool if pool is not None else build_pool(load_word_frequencies())
        self.inventory = WordInventory(self.pool.vocabulary)
        self.rng = RngStreams(seed)
        self.pipeline = pipeline if pipeline is not None else self._default_pipeline()
        self.outcome = Outcome.ONGOING
        self.villagers: dict[int, Villager] = {}
        self.monsters: dict[int, Monster] = {}
        self.receipts: list[TerraformReceipt] = []
        self.pending_house_cells: list[tuple[int, int]] = []
        self._next_villager_id = 1
        self._next_monster_id = 1
        self._flow_cache: dict = {}  # (world version, goal cell) -> distance field

        # run counters (invariant bookkeeping and reports)
        self.words_gained = 0
        self.words_spent = 0
        self.trees_chopped = 0
        self.treasures_collected = 0
        self.bosses_spawned = 0
        self.bosses_killed = 0
        self.villagers_spawned = 0
        self.villagers_died = 0

        self._setup_start_state()

    # -- construction --------------------------------------------------------

    def _default_pipeline(self) -> GenerationPipeline:
        remote = None
        if self.config.generator_url:
            remote = RemoteBackend(self.config.generator_url, self.config.generator_timeout_ms)
        return GenerationPipeline(
            local=LocalBackend(AffinityTable.load()),
            remote=remote,
            fallback=self.config.generator_fallback,
        )

    def _setup_start_state(self) -> None:
        for kind, (lx, ly) in zip(VILLAGER_KINDS, ((4, 4), (5, 4), (4, 5))):
            self._spawn_villager(kind, (lx, ly), counts=False)
        self._spawn_boss(self.config.initial_boss_grid)
        self.inventory.grant("forest")
        self.words_gained += 1

    def _spawn_villager(self, kind: VillagerKind, cell: tuple[int, int], counts: bool = True) -> Villager:
        villager = Villager(
            id=self._next_villager_id,
            kind=kind,
            hp=self.config.villager_hp,
            max_hp=self.config.villager_hp,
            x=cell[0] + 0.5,
            y=cell[1] + 0.5,
        )
        self._next_villager_id += 1
        self.villagers[villager.id] = villager
        if counts:
            self.villagers_spawned += 1
        return villager

    def _grid_center_cell(self, grid_index: int) -> tuple[int, int]:
        ox, oy = subgrid_origin(grid_index)
        center = (ox + 4, oy + 4)
        if self.cost_model.walkable[self.world.tile_at(*center)]:
            return center
        for radius in range(1, SUBGRID_SIZE):
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    x, y = center[0] + dx, center[1] + dy
                    if ox <= x < ox + SUBGRID_SIZE and oy <= y < oy + SUBGRID_SIZE:
                        if self.cost_model.walkable[self.world.tile_at(x, y)]:
                            return x, y
        return center

    def _spawn_boss(self, grid_index: int) -> Monster:
        cell = self._grid_center_cell(grid_index)
        boss = Monster(
            id=self._next_monster_id,
            kind=MonsterKind.BOSS,
            hp=self.config.boss_hp,
            max_hp=self.config.boss_hp,
            grid_index=grid_index,
            x=cell[0] + 0.5,
            y=cell[1] + 0.5,
            minion_timer=minion_scaling(self.clock.elapsed_s, self.config),
        )
        self._next_monster_id += 1
        self.monsters[boss.id] = boss
        self.world.grids[grid_index].boss_occupied = True
        self.bosses_spawned += 1
        return boss

    # -- public commands ------------------------------------------------------

    def assign_task(self, villager_id: int, task: Task) -> None:
        """Set a villager's task; pathing starts on the next tick."""
        villager = self.villagers.get(villager_id)
        if villager is None:
            raise UnknownVillager(f"no villager with id {villager_id}")
        if task.kind == TaskKind.CHOP and villager.kind != VillagerKind.WORKER:
            raise IllegalTask(f"{villager.kind.value} villagers cannot chop")
        if task.kind == TaskKind.ATTACK and villager.kind not in COMBAT_KINDS:
            raise IllegalTask("worker villagers cannot attack")
        if task.cell is not None:
            x, y = task.cell
            if not (0 <= x < WORLD_SIZE and 0 <= y < WORLD_SIZE):
                raise OutOfBounds(f"task cell {task.cell} outside the world")
        villager.task = task
        villager.path = None
        villager.path_goal = None
        villager.chop_progress = 0.0

    def terraform(self, grid_index: int, selection) -> TerraformReceipt:
        """All-or-nothing: compose, generate, spend, place, log."""
        if self.outcome is not Outcome.ONGOING:
            raise GameOver("the game is over")
        if not isinstance(grid_index, int) or not 0 <= grid_index < SUBGRID_COUNT:
            raise InvalidIndex(f"grid index {grid_index!r} outside 0..{SUBGRID_COUNT - 1}")
        if self.world.grids[grid_index].boss_occupied:
            raise GridOccupiedByBoss(f"sub-grid {grid_index} is held by a boss")
        prompt = compose_prompt(self.inventory, selection)
        # Seed is a pure function of (master seed, successful-terraform ordinal)
        # so failed generation attempts never shift later outcomes or replays.
        gen_seed = derive_seed(self.seed, f"generation:{len(self.receipts)}")
        grid, backend_kind = self.pipeline.generate(prompt, gen_seed)

        spent: tuple[str, ...] = ()
        if self.config.words_consumable:
            self.inventory.spend(prompt.words)
            self.words_spent += len(prompt.words)
            spent = prompt.words
        self.world.place_subgrid(grid_index, grid)
        self.maps.update_subgrid(self.world, self.tileset, grid_index)
        self._register_house_tiles(grid_index, grid)
        self._displace_trapped_entities()
        receipt = TerraformReceipt(
            grid_index=grid_index,
            prompt=prompt,
            grid=grid,
            backend=backend_kind,
            tick=self.clock.tick,
            words_spent=spent,
        )
        self.receipts.append(receipt)
        return receipt

    def chop_resolution(self, villager_id: int, cell: tuple[int, int]) -> str:
        """Fell the tree at ``cell``: the cell turns to grass and a gacha word lands in the inventory."""
        villager = self.villagers.get(villager_id)
        if villager is None:
            raise UnknownVillager(f"no villager with id {villager_id}")
        tile = self.tileset[self.world.tile_at(*cell)]
        if not tile.choppable:
            raise NotChoppable(f"{tile.name} at {cell} cannot be chopped")
        self.world.set_tile(*cell, self.tileset.grass_id)
        outcome = self.pool.draw(self.rng.gacha)
        self.inventory.grant(outcome.word)
        self.words_gained += 1
        self.trees_chopped += 1
        self._grant_xp(villager, self.config.xp_per_chop)
        return outcome.word

    def collect_treasure(self, villager_id: int, cell: tuple[int, int]) -> list[str]:
        """Open the treasure at ``cell``: five pool words, any rarity."""
        villager = self.villagers.get(villager_id)
        if villager is None:
            raise UnknownVillager(f"no villager with id {villager_id}")
        tile = self.tileset[self.world.tile_at(*cell)]
        if not tile.grants_treasure:
            raise NothingToCollect(f"{tile.name} at {cell} holds no treasure")
        words = self.pool.draw_treasure(self.rng.gacha)
        for word in words:
            self.inventory.grant(word)
        self.words_gained += len(words)
        self.treasures_collected += 1
        self.world.set_tile(*cell, self.tileset.grass_id)
        return words

    # -- stepping -------------------------------------------------------------

    def step(self, n_ticks: int = 1) -> None:
        for _ in range(n_ticks):
            if self.outcome is not Outcome.ONGOING:
                return
            self._step_once()

    def _step_once(self) -> None:
        dt = self.clock.tick_seconds
        for villager in list(self.villagers.values()):
            if villager.hp > 0:
                self._villager_act(villager, dt)
        for villager in self.villagers.values():
            if villager.hp > 0 and villager.hp < villager.max_hp:
                if self.tileset[self.world.tile_at(*villager.cell)].heals:
                    villager.hp = min(villager.max_hp, villager.hp + self.config.heal_rate_hps * dt)

        by_grid = self._villagers_by_grid()
        for monster in list(self.monsters.values()):
            if monster.hp > 0:
                self._monster_act(monster, by_grid, dt)
        for monster in list(self.monsters.values()):
            if monster.kind is MonsterKind.BOSS and monster.hp > 0 and by_grid.get(monster.grid_index):
                monster.minion_timer -= dt
                if monster.minion_timer <= 0:
                    self._spawn_minion(monster.grid_index)
                    monster.minion_timer = minion_scaling(self.clock.elapsed_s, self.config)

        self.clock.tick += 1
        if self.clock.tick % self.clock.ticks_per_boss == 0:
            free = [i for i in range(SUBGRID_COUNT) if not self.world.grids[i].boss_occupied]
            if free:
                self._spawn_boss(free[self.rng.spawn.randrange(len(free))])
        if self.clock.tick % self.clock.ticks_per_day == 0:
            self._day_rollover()
        # capture the loss condition before boss removals free grids, so a
        # same-tick loss/win tie resolves to the loss
        lose_pending = all(g.boss_occupied for g in self.world.grids)
        self._remove_dead()
        if lose_pending:
            self.outcome = Outcome.LOSE
        else:
            self.outcome = check_end(self)
        for villager in self.villagers.values():
            assert self.cost_model.walkable[self.world.tile_at(*villager.cell)], (
                f"villager {villager.id} on blocked cell {villager.cell}"
            )

    def _villagers_by_grid(self) -> dict[int, list[Villager]]:
        by_grid: dict[int, list[Villager]] = {}
        for villager in self.villagers.values():
            if villager.hp <= 0:
                continue
            grid_index, _, _ = world_to_subgrid(*villager.cell)
            by_grid.setdefault(grid_index, []).append(villager)
        return by_grid

    # -- villager behavior ----------------------------------------------------

    def _villager_dps(self, villager: Villager) -> float:
        base = {
            VillagerKind.FIGHTER: self.config.fighter_dps,
            VillagerKind.ARCHER: self.config.archer_dps,
            VillagerKind.WORKER: self.config.worker_dps,
        }[villager.kind]
        return base * (1 + self.config.level_dps_bonus * (villager.level - 1))

    def _chop_duration(self, level: int) -> float:
        duration = self.config.chop_duration_s * (1 - self.config.chop_level_discount) ** (level - 1)
        return max(self.config.chop_min_s, duration)

    def _grant_xp(self, villager: Villager, amount: float) -> None:
        villager.xp += amount
        while villager.xp >= self.config.level_xp_factor * villager.level:
            villager.xp -= self.config.level_xp_factor * villager.level
            villager.level += 1

    def _villager_act(self, villager: Villager, dt: float) -> None:
        task = villager.task
        if task.kind is TaskKind.IDLE:
            return
        if task.kind is TaskKind.MOVE:
            if villager.cell == task.cell and not villager.path:
                villager.task = Task.idle()
                return
            self._ensure_path(villager, (task.cell,))
            self._follow_path(villager, dt)
            if villager.cell == task.cell and not villager.path:
                villager.task = Task.idle()
        elif task.kind is TaskKind.CHOP:
            tile = self.tileset[self.world.tile_at(*task.cell)]
            if not tile.choppable:
                villager.task = Task.idle()
                villager.path = None
                return
            if _adjacent4(villager.cell, task.cell):
                villager.path = None
                villager.chop_progress += dt
                if villager.chop_progress >= self._chop_duration(villager.level):
                    self.chop_resolution(villager.id, task.cell)
                    villager.chop_progress = 0.0
                    villager.task = Task.idle()
            else:
                goals = self._walkable_neighbors(task.cell)
                if not goals:
                    villager.task = Task.idle()
                    return
                self._ensure_path(villager, goals)
                self._follow_path(villager, dt)
        elif task.kind is TaskKind.ATTACK:
            monster = self.monsters.get(task.monster_id)
            if monster is None or monster.hp <= 0:
                villager.task = Task.idle()
                villager.path = None
                return
            reach = self.config.melee_range if villager.kind is VillagerKind.FIGHTER else self.config.archer_range
            distance = _dist(villager.x, villager.y, monster.x, monster.y)
            villager.swing_cooldown = max(0.0, villager.swing_cooldown - dt)
            if distance <= reach:
                villager.path = None
                if villager.swing_cooldown <= 0:
                    monster.hp -= self._villager_dps(villager) * self.config.swing_period_s
                    villager.swing_cooldown += self.config.swing_period_s
            else:
                self._pursue(villager, monster.cell, dt)
        elif task.kind is TaskKind.COLLECT:
            if villager.cell == task.cell:
                villager.path = None
                tile = self.tileset[self.world.tile_at(*task.cell)]
                if tile.grants_treasure:
                    self.collect_treasure(villager.id, task.cell)
                villager.task = Task.idle()
            else:
                self._ensure_path(villager, (task.cell,))
                self._follow_path(villager, dt)

    def _walkable_neighbors(self, cell: tuple[int, int]) -> tuple[tuple[int, int], ...]:
        x, y = cell
        out = []
        for nx, ny in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
            if 0 <= nx < WORLD_SIZE and 0 <= ny < WORLD_SIZE:
                if self.cost_model.walkable[self.world.tile_at(nx, ny)]:
                    out.append((nx, ny))
        return tuple(out)

    def _ensure_path(self, villager: Villager, goals, approach: bool = False, slack: int = 0) -> None:
        """Plan (or keep) a path to the cheapest of ``goals``.

        approach=True tolerates an unreachable exact goal by walking to the
        nearest walkable neighbor of the goal instead (melee vs a target
        standing on a blocked-off cell edge). slack keeps a mildly stale
        path when the goal has only wobbled a little (chasing monsters).
        """
        if villager.path is not None and villager.path_goal is not None:
            if any(
                abs(villager.path_goal[0] - gx) + abs(villager.path_goal[1] - gy) <= slack
                for gx, gy in goals
            ):
                return
        start = villager.cell
        path, goal = find_path_to_any(self.world, self.cost_model, start, goals)
        if path is None and approach:
            fallbacks = [n for g in goals for n in self._walkable_neighbors(g)]
            if fallbacks:
                path, goal = find_path_to_any(self.world, self.cost_model, start, fallbacks)
        if path is None:
            villager.path = None
            villager.path_goal = None
            if not approach:
                villager.task = Task.idle()
            return
        villager.path = path[1:]
        villager.path_goal = goal

    def _flow_field(self, goal_cell: tuple[int, int]):
        key = (self.world.version, goal_cell)
        field = self._flow_cache.get(key)
        if field is None:
            if len(self._flow_cache) > 8:
                self._flow_cache.clear()
            field = flow_distances(self.world, self.cost_model, goal_cell)
            self._flow_cache[key] = field
        return field

    def _pursue(self, villager: Villager, goal_cell: tuple[int, int], dt: float) -> None:
        """Chase a moving target by descending a shared cost-to-goal field."""
        if not villager.path:
            field = self._flow_field(goal_cell)
            here = villager.cell
            if here not in field or field[here] == 0:
                villager.path = None  # unreachable or already on the goal cell
                return
            x, y = here
            best = None
            for nxt in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
                d = field.get(nxt)
                if d is not None and (best is None or d < best[0]):
                    best = (d, nxt)
            if best is None or best[0] >= field[here]:
                return
            villager.path = [best[1]]
            villager.path_goal = None
        self._follow_path(villager, dt)

    def _follow_path(self, villager: Villager, dt: float) -> None:
        budget = self.config.move_speed * self._speed_at(villager.cell) * dt
        while budget > 1e-9 and villager.path:
            nx, ny = villager.path[0]
            if not self.cost_model.walkable[self.world.tile_at(nx, ny)]:
                villager.path = None  # terrain changed underfoot; replan next tick
                villager.path_goal = None
                return
            tx, ty = nx + 0.5, ny + 0.5
            distance = _dist(villager.x, villager.y, tx, ty)
            if distance <= budget + 1e-9:  # snap through float dust at waypoints
                villager.x, villager.y = tx, ty
                villager.path.pop(0)
                budget -= distance
            else:
                villager.x += (tx - villager.x) / distance * budget
                villager.y += (ty - villager.y) / distance * budget
                budget = 0.0

    def _speed_at(self, cell: tuple[int, int]) -> float:
        return self.cost_model.speed[self.world.tile_at(*cell)]

    # -- monster behavior -----------------------------------------------------

    def _monster_dps(self, monster: Monster) -> float:
        return self.config.boss_dps if monster.kind is MonsterKind.BOSS else self.config.minion_dps

    def _monster_act(self, monster: Monster, by_grid, dt: float) -> None:
        targets = by_grid.get(monster.grid_index)
        monster.swing_cooldown = max(0.0, monster.swing_cooldown - dt)
        if not targets:
            monster.target_id = None
            return
        target = min(targets, key=lambda v: (_dist(monster.x, monster.y, v.x, v.y), v.id))
        monster.target_id = target.id
        distance = _dist(monster.x, monster.y, target.x, target.y)
        if distance <= self.config.melee_range:
            if monster.swing_cooldown <= 0:
                target.hp -= self._monster_dps(monster) * self.config.swing_period_s
                monster.swing_cooldown += self.config.swing_period_s
            return
        budget = self.config.move_speed * self._speed_at(monster.cell) * dt
        dx = (target.x - monster.x) / distance * budget
        dy = (target.y - monster.y) / distance * budget
        for step_x, step_y in ((dx, dy), (dx, 0.0), (0.0, dy)):
            nx = min(WORLD_SIZE - 1e-6, max(0.0, monster.x + step_x))
            ny = min(WORLD_SIZE - 1e-6, max(0.0, monster.y + step_y))
            if self.cost_model.walkable[self.world.tile_at(int(nx), int(ny))]:
                monster.x, monster.y = nx, ny
                return

    def _spawn_minion(self, grid_index: int) -> None:
        ox, oy = subgrid_origin(grid_index)
        cells = [
            (ox + lx, oy + ly)
            for ly in range(SUBGRID_SIZE)
            for lx in range(SUBGRID_SIZE)
            if self.cost_model.walkable[self.world.tile_at(ox + lx, oy + ly)]
        ]
        if not cells:
            return
        cell = cells[self.rng.combat.randrange(len(cells))]
        minion = Monster(
            id=self._next_monster_id,
            kind=MonsterKind.MINION,
            hp=self.config.minion_hp,
            max_hp=self.config.minion_hp,
            grid_index=grid_index,
            x=cell[0] + 0.5,
            y=cell[1] + 0.5,
        )
        self._next_monster_id += 1
        self.monsters[minion.id] = minion

    # -- placement bookkeeping --------------------------------------------------

    def _register_house_tiles(self, grid_index: int, grid) -> None:
        ox, oy = subgrid_origin(grid_index)
        for ly, row in enumerate(grid):
            for lx, value in enumerate(row):
                if self.tileset[value].spawns_villager:
                    self.pending_house_cells.append((ox + lx, oy + ly))

    def _displace_trapped_entities(self) -> None:
        for villager in self.villagers.values():
            if not self.cost_model.walkable[self.world.tile_at(*villager.cell)]:
                refuge = nearest_walkable(self.world, self.cost_model, villager.cell)
                if refuge is not None:
                    villager.x, villager.y = refuge[0] + 0.5, refuge[1] + 0.5
                villager.path = None
                villager.path_goal = None
        for monster in self.monsters.values():
            if not self.cost_model.walkable[self.world.tile_at(*monster.cell)]:
                refuge = nearest_walkable(self.world, self.cost_model, monster.cell)
                if refuge is not None:
                    monster.x, monster.y = refuge[0] + 0.5, refuge[1] + 0.5

    def _day_rollover(self) -> None:
        for cell in self.pending_house_cells:
            kind = VILLAGER_KINDS[self.rng.spawn.randrange(3)]
            spawn_cell = nearest_walkable(self.world, self.cost_model, cell)
            if spawn_cell is None:
                continue
            self._spawn_villager(kind, spawn_cell)
        if self.config.houses_respawn_daily:
            self.pending_house_cells = [
                (x, y)
                for y in range(WORLD_SIZE)
                for x in range(WORLD_SIZE)
                if self.tileset[self.world.tile_at(x, y)].spawns_villager
            ]
        else:
            self.pending_house_cells = []

    def _remove_dead(self) -> None:
        dead_monsters = [m for m in self.monsters.values() if m.hp <= 0]
        for monster in dead_monsters:
            if monster.kind is MonsterKind.BOSS:
                self.world.grids[monster.grid_index].boss_occupied = False
                self.bosses_killed += 1
            for villager in self.villagers.values():
                if (
                    villager.hp > 0
                    and villager.task.kind is TaskKind.ATTACK
                    and villager.task.monster_id == monster.id
                ):
                    self._grant_xp(villager, self.config.xp_per_kill)
            del self.monsters[monster.id]
        dead_villagers = [v for v in self.villagers.values() if v.hp <= 0]
        for villager in dead_villagers:
            del self.villagers[villager.id]
            self.villagers_died += 1

    # -- snapshots --------------------------------------------------------------

    def snapshot(self) -> dict:
        """Wire-form state snapshot; see the README for the field contract."""
        ticks_to_boss = self.clock.ticks_per_boss - self.clock.tick % self.clock.ticks_per_boss
        return {
            "tick": self.clock.tick,
            "outcome": self.outcome.value,
            "day_index": self.clock.day_index,
            "boss_timer_remaining_s": round(ticks_to_boss * self.clock.tick_seconds, 6),
            "world": self.world.cells_view(),
            "boss_occupied": [g.boss_occupied for g in self.world.grids],
            "rock_heights": [row[:] for row in self.maps.rock_heights],
            "water_masks": [row[:] for row in self.maps.water_masks],
            "villagers": [
                {
                    "id": v.id,
                    "kind": v.kind.value,
                    "hp": round(v.hp, 9),
                    "max_hp": v.max_hp,
                    "level": v.level,
                    "xp": round(v.xp, 9),
                    "x": round(v.x, 9),
                    "y": round(v.y, 9),
                    "task": v.task.as_dict(),
                }
                for v in sorted(self.villagers.values(), key=lambda v: v.id)
            ],
            "monsters": [
                {
                    "id": m.id,
                    "kind": m.kind.value,
                    "hp": round(m.hp, 9),
                    "max_hp": m.max_hp,
                    "grid_index": m.grid_index,
                    "x": round(m.x, 9),
                    "y": round(m.y, 9),
                }
                for m in sorted(self.monsters.values(), key=lambda m: m.id)
            ],
            "inventory": self.inventory.as_dict(),
            "pool_queue": self.pool.to_lines(),
            "counters": {
                "words_gained": self.words_gained,
                "words_spent": self.words_spent,
                "trees_chopped": self.trees_chopped,
                "treasures_collected": self.treasures_collected,
                "bosses_spawned": self.bosses_spawned,
                "bosses_killed": self.bosses_killed,
                "villagers_spawned": self.villagers_spawned,
                "villagers_died": self.villagers_died,
            },
        }

    def snapshot_digest(self) -> str:
        payload = json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _adjacent4(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def check_end(state: GameState) -> Outcome:
    """Loss: every sub-grid boss-held. Win: some boss died and none remain."""
    if state.outcome is not Outcome.ONGOING:
        return state.outcome
    if all(g.boss_occupied for g in state.world.grids):
        return Outcome.LOSE
    bosses_alive = any(m.kind is MonsterKind.BOSS and m.hp > 0 for m in state.monsters.values())
    if state.bosses_killed >= 1 and not bosses_alive:
        return Outcome.WIN
    return Outcome.ONGOING


def new_game(
    config: GameConfig | None = None,
    seed: int = 0,
    *,
    tileset: TileSet | None = None,
    pool: WordPool | None = None,
    pipeline: GenerationPipeline | None = None,
) -> GameState:
    return GameState(config or GameConfig(), seed, tileset=tileset, pool=pool, pipeline=pipeline)
