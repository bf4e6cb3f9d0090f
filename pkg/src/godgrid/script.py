"""Command script format for headless replay.

One command per line: ``<tick> <command> <args...>``

    120 terraform 0 forest
    300 terraform 3 a,river,in,a,forest
    450 task 2 chop 13,27
    500 task 1 attack 4
    600 task 3 move 20,20
    700 task 3 collect 20,21

Blank lines and ``#`` comments are ignored; unknown verbs are rejected.
Commands execute at the start of their tick, before that tick simulates.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ScriptError

TASK_VERBS = ("chop", "attack", "move", "collect")


@dataclass(frozen=True)
class TerraformCommand:
    tick: int
    grid_index: int
    words: tuple[str, ...]

    def format(self) -> str:
        return f"{self.tick} terraform {self.grid_index} {','.join(self.words)}"


@dataclass(frozen=True)
class TaskCommand:
    tick: int
    villager_id: int
    verb: str  # chop | attack | move | collect
    cell: tuple[int, int] | None = None  # chop/move/collect
    monster_id: int | None = None  # attack

    def format(self) -> str:
        if self.verb == "attack":
            return f"{self.tick} task {self.villager_id} attack {self.monster_id}"
        x, y = self.cell
        return f"{self.tick} task {self.villager_id} {self.verb} {x},{y}"


Command = TerraformCommand | TaskCommand


def _parse_cell(text: str, line_number: int) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ScriptError(f"line {line_number}: expected x,y cell")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ScriptError(f"line {line_number}: cell coordinates must be integers")


def parse_script_line(line: str, line_number: int = 0) -> Command:
    fields = line.split()
    if len(fields) < 3:
        raise ScriptError(f"line {line_number}: too few fields")
    try:
        tick = int(fields[0])
    except ValueError:
        raise ScriptError(f"line {line_number}: tick must be an integer")
    if tick < 0:
        raise ScriptError(f"line {line_number}: tick must be non-negative")
    verb = fields[1]
    if verb == "terraform":
        if len(fields) != 4:
            raise ScriptError(f"line {line_number}: terraform takes <grid> <word,...>")
        try:
            grid_index = int(fields[2])
        except ValueError:
            raise ScriptError(f"line {line_number}: grid must be an integer")
        words = tuple(w for w in fields[3].split(",") if w)
        if not words:
            raise ScriptError(f"line {line_number}: terraform needs at least one word")
        return TerraformCommand(tick=tick, grid_index=grid_index, words=words)
    if verb == "task":
        if len(fields) != 5:
            raise ScriptError(f"line {line_number}: task takes <villager> <verb> <args>")
        try:
            villager_id = int(fields[2])
        except ValueError:
            raise ScriptError(f"line {line_number}: villager id must be an integer")
        task_verb = fields[3]
        if task_verb not in TASK_VERBS:
            raise ScriptError(f"line {line_number}: unknown task verb {task_verb!r}")
        if task_verb == "attack":
            try:
                monster_id = int(fields[4])
            except ValueError:
                raise ScriptError(f"line {line_number}: monster id must be an integer")
            return TaskCommand(tick=tick, villager_id=villager_id, verb="attack", monster_id=monster_id)
        return TaskCommand(
            tick=tick, villager_id=villager_id, verb=task_verb, cell=_parse_cell(fields[4], line_number)
        )
    raise ScriptError(f"line {line_number}: unknown command {verb!r}")


def parse_script(text: str) -> list[Command]:
    commands = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        commands.append(parse_script_line(line, line_number))
    ticks = [c.tick for c in commands]
    if ticks != sorted(ticks):
        raise ScriptError("command ticks must be non-decreasing")
    return commands


def load_script(path: str | Path) -> list[Command]:
    return parse_script(Path(path).read_text(encoding="utf-8"))


def format_script(commands) -> str:
    return "".join(command.format() + "\n" for command in commands)
