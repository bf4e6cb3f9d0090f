"""Game configuration with validated defaults.

Every gameplay numeral lives here so a tuning pass never touches engine
code. Values load from JSON override files or plain dicts; unknown keys
are rejected to catch typos early.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class GameConfig:
    # clock
    tick_seconds: float = 0.1
    day_length_s: float = 120.0
    boss_interval_s: float = 120.0

    # villagers
    villager_hp: float = 100.0
    fighter_dps: float = 10.0
    archer_dps: float = 7.0
    archer_range: float = 3.0
    worker_dps: float = 0.0
    move_speed: float = 2.0  # tiles per second before terrain multiplier
    melee_range: float = 1.2
    swing_period_s: float = 0.5
    level_dps_bonus: float = 0.1  # per level above 1

    # progression
    chop_duration_s: float = 3.0
    chop_level_discount: float = 0.1  # multiplicative per level above 1
    chop_min_s: float = 1.0
    xp_per_chop: float = 10.0
    xp_per_kill: float = 10.0
    level_xp_factor: float = 100.0  # next level at factor * level
    heal_rate_hps: float = 2.0

    # monsters
    boss_hp: float = 500.0
    boss_dps: float = 15.0
    minion_hp: float = 60.0
    minion_dps: float = 5.0
    minion_base_interval_s: float = 10.0
    minion_decay: float = 0.9
    minion_min_interval_s: float = 2.0
    initial_boss_grid: int = 15

    # economy
    words_consumable: bool = True
    houses_respawn_daily: bool = False

    # generation
    generator_url: str | None = None
    generator_timeout_ms: int = 2000
    generator_fallback: bool = True

    def validate(self) -> "GameConfig":
        if self.tick_seconds <= 0:
            raise ConfigError("tick_seconds must be positive")
        if self.day_length_s <= 0:
            raise ConfigError("day_length_s must be positive")
        if self.boss_interval_s <= 0:
            raise ConfigError("boss_interval_s must be positive")
        if self.boss_hp < 3 * self.villager_hp:
            raise ConfigError("bosses must have at least 3x villager hp")
        if not 0 <= self.initial_boss_grid <= 15:
            raise ConfigError("initial_boss_grid must be a sub-grid index")
        if self.move_speed <= 0:
            raise ConfigError("move_speed must be positive")
        if self.minion_min_interval_s <= 0 or self.minion_base_interval_s <= 0:
            raise ConfigError("minion spawn intervals must be positive")
        if not 0 < self.minion_decay <= 1:
            raise ConfigError("minion_decay must be in (0, 1]")
        return self


_FIELD_NAMES = {f.name for f in dataclasses.fields(GameConfig)}


def config_from_dict(overrides: dict | None = None) -> GameConfig:
    overrides = overrides or {}
    unknown = set(overrides) - _FIELD_NAMES
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return GameConfig(**overrides).validate()


def load_config(path: str | Path | None = None) -> GameConfig:
    if path is None:
        return GameConfig().validate()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    if not isinstance(document, dict):
        raise ConfigError("config file must hold a JSON object")
    return config_from_dict(document)
