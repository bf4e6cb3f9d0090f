"""Headless run driver: applies timed commands, steps the clock, logs.

Commands execute at the start of their tick, then the tick simulates. Every
applied command is appended to the event log in command-script form, so a
finished run replays exactly: feed the event log back through ScriptPolicy
with the same config and seed and the final snapshot digest matches.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .config import GameConfig
from .errors import EngineError
from .generate import GenerationPipeline
from .script import Command, TaskCommand, TerraformCommand, load_script
from .sim import GameState, Outcome, Task, TaskKind, TerraformReceipt, new_game
from .telemetry import PromptLogEntry, format_entry
from .tiles import TileSet
from .words import WordPool

DEFAULT_MAX_TICKS = 36_000  # one simulated hour at the default tick rate


@dataclass
class RunReport:
    outcome: str
    ticks: int
    words_gained: int
    words_spent: int
    receipts: list[TerraformReceipt]
    snapshot_digest: str
    snapshot: dict
    commands_applied: int
    commands_rejected: int

    def as_dict(self, include_snapshot: bool = False) -> dict:
        out = {
            "outcome": self.outcome,
            "ticks": self.ticks,
            "words_gained": self.words_gained,
            "words_spent": self.words_spent,
            "terraform_count": len(self.receipts),
            "commands_applied": self.commands_applied,
            "commands_rejected": self.commands_rejected,
            "snapshot_digest": self.snapshot_digest,
        }
        if include_snapshot:
            out["snapshot"] = self.snapshot
        return out


class ScriptPolicy:
    """Replays a fixed command list at the recorded ticks."""

    strict = True  # script errors are bugs in the script; surface them

    def __init__(self, commands: list[Command]):
        self.commands = sorted(commands, key=lambda c: c.tick)
        self._cursor = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptPolicy":
        return cls(load_script(path))

    def commands_for(self, state: GameState) -> list[Command]:
        due = []
        while self._cursor < len(self.commands) and self.commands[self._cursor].tick <= state.clock.tick:
            due.append(self.commands[self._cursor])
            self._cursor += 1
        return due

    def exhausted(self) -> bool:
        return self._cursor >= len(self.commands)


def apply_command(state: GameState, command: Command) -> TerraformReceipt | None:
    if isinstance(command, TerraformCommand):
        return state.terraform(command.grid_index, list(command.words))
    if isinstance(command, TaskCommand):
        task = Task(
            kind=TaskKind(command.verb),
            cell=command.cell,
            monster_id=command.monster_id,
        )
        state.assign_task(command.villager_id, task)
        return None
    raise EngineError(f"unsupported command {command!r}")


def run_game(
    config: GameConfig | None = None,
    seed: int = 0,
    policy=None,
    max_ticks: int = DEFAULT_MAX_TICKS,
    *,
    tileset: TileSet | None = None,
    pool: WordPool | None = None,
    pipeline: GenerationPipeline | None = None,
    prompt_log_path: str | Path | None = None,
    event_log_path: str | Path | None = None,
) -> RunReport:
    state = new_game(config, seed, tileset=tileset, pool=pool, pipeline=pipeline)
    prompt_log = open(prompt_log_path, "a", encoding="utf-8", newline="") if prompt_log_path else None
    event_log = open(event_log_path, "a", encoding="utf-8", newline="") if event_log_path else None
    applied = rejected = 0
    try:
        while state.outcome is Outcome.ONGOING and state.clock.tick < max_ticks:
            for command in policy.commands_for(state) if policy else ():
                try:
                    receipt = apply_command(state, command)
                except EngineError:
                    if getattr(policy, "strict", False):
                        raise
                    rejected += 1
                    continue
                applied += 1
                if event_log:
                    event_log.write(command.format() + "\n")
                if receipt is not None and prompt_log:
                    prompt_log.write(
                        format_entry(
                            PromptLogEntry(
                                tick=receipt.tick,
                                grid_index=receipt.grid_index,
                                prompt_rendered=receipt.prompt.rendered,
                                backend_kind=receipt.backend,
                            )
                        )
                    )
            state.step(1)
    finally:
        if prompt_log:
            prompt_log.close()
        if event_log:
            event_log.close()
    return RunReport(
        outcome=state.outcome.value,
        ticks=state.clock.tick,
        words_gained=state.words_gained,
        words_spent=state.words_spent,
        receipts=list(state.receipts),
        snapshot_digest=state.snapshot_digest(),
        snapshot=state.snapshot(),
        commands_applied=applied,
        commands_rejected=rejected,
    )
