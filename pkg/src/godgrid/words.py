"""Word pool, gacha draws with queue rotation, and the player inventory.

The pool is the top 1000 words of a frequency table, kept as an ordered
queue. Positions 1..100 form the common group, 101..1000 the uncommon
group (a 1:9 split). A draw picks the group with a fair coin, picks
uniformly inside it, then rotates the drawn word to the back of the queue
so fresh uncommon words migrate toward the common group over time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import (
    EmptySelection,
    InsufficientVocabulary,
    InsufficientWords,
    UnknownWord,
)

POOL_SIZE = 1000
COMMON_SIZE = 100


class WordGroup(str, Enum):
    COMMON = "common"
    UNCOMMON = "uncommon"


@dataclass(frozen=True)
class DrawOutcome:
    word: str
    group: WordGroup
    pre_draw_position: int  # 1-based queue position before rotation


@dataclass(frozen=True)
class WordFrequencyTable:
    """Unique lowercase tokens with positive counts."""

    entries: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for word, count in self.entries:
            if not word or word != word.lower() or any(ch.isspace() for ch in word):
                raise ValueError(f"invalid token {word!r}")
            if word in seen:
                raise ValueError(f"duplicate word {word!r}")
            seen.add(word)
            if count < 1:
                raise ValueError(f"count for {word!r} must be >= 1")

    @classmethod
    def from_tsv(cls, path: str | Path) -> "WordFrequencyTable":
        """Parse ``word<TAB>count`` lines (UTF-8, no header)."""
        entries = []
        with open(path, "r", encoding="utf-8") as fh:
            for line_number, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"line {line_number}: expected 'word<TAB>count'")
                word, count_text = parts
                try:
                    count = int(count_text)
                except ValueError:
                    raise ValueError(f"line {line_number}: bad count {count_text!r}")
                entries.append((word, count))
        return cls(entries=tuple(entries))


def default_wordfreq_path() -> Path:
    return Path(str(resources.files("godgrid").joinpath("data/wordfreq.tsv")))


def load_word_frequencies(path: str | Path | None = None) -> WordFrequencyTable:
    return WordFrequencyTable.from_tsv(path if path is not None else default_wordfreq_path())


class WordPool:
    """Ordered queue of exactly 1000 distinct words."""

    def __init__(self, words):
        queue = list(words)
        if len(queue) != POOL_SIZE or len(set(queue)) != POOL_SIZE:
            raise InsufficientVocabulary(f"pool needs exactly {POOL_SIZE} distinct words")
        self.queue: list[str] = queue
        self.vocabulary: frozenset[str] = frozenset(queue)

    def position(self, word: str) -> int:
        """1-based current queue position."""
        return self.queue.index(word) + 1

    def sample_draw(self, rng: random.Random) -> DrawOutcome:
        """One gacha pick without the queue rotation side effect."""
        if rng.random() < 0.5:
            index = rng.randrange(COMMON_SIZE)
            group = WordGroup.COMMON
        else:
            index = COMMON_SIZE + rng.randrange(POOL_SIZE - COMMON_SIZE)
            group = WordGroup.UNCOMMON
        return DrawOutcome(word=self.queue[index], group=group, pre_draw_position=index + 1)

    def draw(self, rng: random.Random) -> DrawOutcome:
        """Gacha pick; the drawn word rotates to the back of the queue."""
        outcome = self.sample_draw(rng)
        self.queue.pop(outcome.pre_draw_position - 1)
        self.queue.append(outcome.word)
        return outcome

    def draw_treasure(self, rng: random.Random) -> list[str]:
        """Five distinct words, uniform over the whole pool; no rotation."""
        return rng.sample(self.queue, 5)

    def to_lines(self) -> list[str]:
        """Snapshot serialization: one word per line, position = line number."""
        return list(self.queue)

    @classmethod
    def from_lines(cls, lines) -> "WordPool":
        return cls([line.strip() for line in lines if line.strip()])


def build_pool(table: WordFrequencyTable) -> WordPool:
    """Top 1000 words by descending count; ties break lexicographically."""
    if len(table.entries) < POOL_SIZE:
        raise InsufficientVocabulary(
            f"frequency table has {len(table.entries)} words, need {POOL_SIZE}"
        )
    ranked = sorted(table.entries, key=lambda e: (-e[1], e[0]))
    return WordPool([word for word, _ in ranked[:POOL_SIZE]])


class WordInventory:
    """The player's collected word multiset, restricted to pool vocabulary."""

    def __init__(self, vocabulary: frozenset[str], counts: dict[str, int] | None = None):
        self.vocabulary = vocabulary
        self.counts: dict[str, int] = {}
        for word, count in (counts or {}).items():
            for _ in range(count):
                self.grant(word)

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def grant(self, word: str) -> None:
        if word not in self.vocabulary:
            raise UnknownWord(f"{word!r} is not in the word pool")
        self.counts[word] = self.counts.get(word, 0) + 1

    def covers(self, selection) -> bool:
        needed: dict[str, int] = {}
        for word in selection:
            needed[word] = needed.get(word, 0) + 1
        return all(self.count(w) >= n for w, n in needed.items())

    def spend(self, selection) -> None:
        """Remove each listed word once per occurrence; all-or-nothing."""
        words = list(selection)
        if not words:
            raise EmptySelection("nothing to spend")
        needed: dict[str, int] = {}
        for word in words:
            if word not in self.vocabulary:
                raise UnknownWord(f"{word!r} is not in the word pool")
            needed[word] = needed.get(word, 0) + 1
        for word, n in needed.items():
            if self.count(word) < n:
                raise InsufficientWords(f"need {n} x {word!r}, have {self.count(word)}")
        for word, n in needed.items():
            remaining = self.counts[word] - n
            if remaining:
                self.counts[word] = remaining
            else:
                del self.counts[word]

    def as_dict(self) -> dict[str, int]:
        return dict(sorted(self.counts.items()))
