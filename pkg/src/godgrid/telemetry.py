"""Prompt logging and offline analysis of run data.

Log line grammar (bit-exact, UTF-8, LF endings):

    <tick:decimal> TAB <grid:0-15> TAB <backend:remote|local> TAB "prompt"

with ``"`` and ``\\`` inside the prompt escaped by a backslash. One line
is appended per terraform, so log lines and receipts stay in bijection.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyInput, EmptyLog, MalformedLine
from .tiles import TileSet

BACKEND_KINDS = ("remote", "local")
LENGTH_BUCKETS = ("1", "2", "3", "4", "5+")


@dataclass(frozen=True)
class PromptLogEntry:
    tick: int
    grid_index: int
    prompt_rendered: str
    backend_kind: str

    @property
    def word_count(self) -> int:
        return len(self.prompt_rendered.split(" "))


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _unescape(text: str, line_number: int) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            if i + 1 >= len(text) or text[i + 1] not in '\\"':
                raise MalformedLine(line_number, "bad escape sequence")
            out.append(text[i + 1])
            i += 2
        elif ch == '"':
            raise MalformedLine(line_number, "unescaped quote in prompt")
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def format_entry(entry: PromptLogEntry) -> str:
    return f'{entry.tick}\t{entry.grid_index}\t{entry.backend_kind}\t"{_escape(entry.prompt_rendered)}"\n'


def append_log(path: str | Path, entry: PromptLogEntry) -> None:
    """Append one line; a single write call keeps the append line-atomic."""
    with open(path, "a", encoding="utf-8", newline="") as fh:
        fh.write(format_entry(entry))


def parse_line(line: str, line_number: int) -> PromptLogEntry:
    parts = line.split("\t")
    if len(parts) != 4:
        raise MalformedLine(line_number, f"expected 4 fields, got {len(parts)}")
    tick_text, grid_text, backend, quoted = parts
    try:
        tick = int(tick_text)
        grid_index = int(grid_text)
    except ValueError:
        raise MalformedLine(line_number, "tick and grid must be decimal integers")
    if tick < 0 or not 0 <= grid_index <= 15:
        raise MalformedLine(line_number, "tick or grid out of range")
    if backend not in BACKEND_KINDS:
        raise MalformedLine(line_number, f"unknown backend {backend!r}")
    if len(quoted) < 2 or not quoted.startswith('"') or not quoted.endswith('"'):
        raise MalformedLine(line_number, "prompt must be double-quoted")
    prompt = _unescape(quoted[1:-1], line_number)
    return PromptLogEntry(tick=tick, grid_index=grid_index, prompt_rendered=prompt, backend_kind=backend)


def parse_log(path: str | Path, strict: bool = False):
    """Parse a log file.

    Returns (entries, problems) where problems is a list of MalformedLine
    for skipped lines. In strict mode the first bad line raises instead.
    """
    entries: list[PromptLogEntry] = []
    problems: list[MalformedLine] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line_number, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            try:
                entries.append(parse_line(line, line_number))
            except MalformedLine as exc:
                if strict:
                    raise
                problems.append(exc)
    return entries, problems


def prompt_length_histogram(entries) -> dict[str, float]:
    """Percentage of prompts per length bucket 1 / 2 / 3 / 4 / 5+."""
    entries = list(entries)
    if not entries:
        raise EmptyLog("no prompt entries to analyze")
    counts = dict.fromkeys(LENGTH_BUCKETS, 0)
    for entry in entries:
        n = entry.word_count
        counts["5+" if n >= 5 else str(n)] += 1
    total = len(entries)
    return {bucket: 100.0 * count / total for bucket, count in counts.items()}


def tile_frequency(receipts, tileset: TileSet):
    """Tile-category occurrence counts and percentages over generated grids."""
    receipts = list(receipts)
    if not receipts:
        raise EmptyInput("no receipts to analyze")
    counts: dict[str, int] = {}
    total = 0
    for receipt in receipts:
        for row in receipt.grid:
            for value in row:
                category = tileset[value].category.value
                counts[category] = counts.get(category, 0) + 1
                total += 1
    return {
        category: {"count": count, "percent": 100.0 * count / total}
        for category, count in sorted(counts.items(), key=lambda kv: -kv[1])
    }
