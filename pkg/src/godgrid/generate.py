"""Prompt composition and the pluggable text-to-tilegrid backends.

Two backends exist. The remote backend speaks the HTTP wire protocol of an
external generator service (POST /generate with a JSON prompt, 10x10 grid
of tile ids back). The local backend is a self-contained rule-based
stand-in so the whole game is playable and testable offline: each known
word carries a 16-entry tile-weight vector plus a layout hint, and the
grid is painted from the summed weights. It makes no attempt to imitate
any particular trained model; it only honors the same contract.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

import requests

from .errors import (
    EmptySelection,
    GenerationServerError,
    GenerationTimeout,
    InvalidGrid,
    MalformedResponse,
    WordNotOwned,
)
from .words import WordInventory
from .world import SUBGRID_SIZE, validate_tile_grid

GRASS_ID = 0


@dataclass(frozen=True)
class Prompt:
    words: tuple[str, ...]

    def __post_init__(self):
        if not self.words:
            raise EmptySelection("prompt needs at least one word")
        for word in self.words:
            if not word or any(ch.isspace() for ch in word):
                raise WordNotOwned(f"invalid token {word!r}")

    @property
    def rendered(self) -> str:
        return " ".join(self.words)

    def __len__(self) -> int:
        return len(self.words)


def compose_prompt(inventory: WordInventory, selection) -> Prompt:
    """Build a prompt from owned words, order preserved."""
    words = tuple(selection)
    if not words:
        raise EmptySelection("select at least one word")
    for word in words:
        if word not in inventory.vocabulary:
            raise WordNotOwned(f"{word!r} is not in the word pool")
    if not inventory.covers(words):
        missing = [w for w in words if inventory.count(w) < words.count(w)]
        raise WordNotOwned(f"not enough of {missing[0]!r} in the inventory")
    return Prompt(words=words)


class LayoutHint(str, Enum):
    CLUSTER = "cluster"
    RIVER = "river"
    SCATTER = "scatter"
    BORDER = "border"


@dataclass(frozen=True)
class WordAffinity:
    weights: tuple[float, ...]  # 16 non-negative tile weights
    hint: LayoutHint

    def dominant_tile(self) -> int:
        return max(range(len(self.weights)), key=lambda i: (self.weights[i], -i))


class AffinityTable:
    """Mapping of vocabulary words to tile-weight vectors and layout hints."""

    def __init__(self, entries: dict[str, WordAffinity]):
        self.entries = entries

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def get(self, word: str) -> WordAffinity | None:
        return self.entries.get(word)

    @classmethod
    def from_document(cls, document: dict) -> "AffinityTable":
        entries = {}
        for word, entry in document.items():
            weights = tuple(float(w) for w in entry["weights"])
            if len(weights) != 16 or any(w < 0 for w in weights):
                raise ValueError(f"{word}: expected 16 non-negative weights")
            entries[word] = WordAffinity(weights=weights, hint=LayoutHint(entry["hint"]))
        return cls(entries)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "AffinityTable":
        target = Path(path) if path is not None else Path(
            str(resources.files("godgrid").joinpath("data/affinity.json"))
        )
        with open(target, "r", encoding="utf-8") as fh:
            return cls.from_document(json.load(fh))


def _generation_rng(rendered: str, seed: int) -> random.Random:
    digest = hashlib.sha256(f"{seed}\x00{rendered}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _grow_blob(rng, claimed, target_size):
    """Random 4-connected blob over unclaimed cells; best effort near target."""
    free = [(x, y) for y in range(SUBGRID_SIZE) for x in range(SUBGRID_SIZE) if (x, y) not in claimed]
    if not free:
        return set()
    best: set = set()
    for _ in range(5):
        blob = {free[rng.randrange(len(free))]}
        frontier = list(blob)
        while frontier and len(blob) < target_size:
            cx, cy = frontier[rng.randrange(len(frontier))]
            options = [
                (nx, ny)
                for nx, ny in ((cx, cy - 1), (cx + 1, cy), (cx, cy + 1), (cx - 1, cy))
                if 0 <= nx < SUBGRID_SIZE and 0 <= ny < SUBGRID_SIZE
                and (nx, ny) not in claimed and (nx, ny) not in blob
            ]
            if not options:
                frontier.remove((cx, cy))
                continue
            cell = options[rng.randrange(len(options))]
            blob.add(cell)
            frontier.append(cell)
        if len(blob) >= target_size:
            return blob
        if len(blob) > len(best):
            best = blob
    return best


def _carve_river(rng):
    """Winding 1-2 wide path crossing the grid edge to edge."""
    cells = set()
    vertical = rng.random() < 0.5
    lane = rng.randrange(SUBGRID_SIZE)
    for along in range(SUBGRID_SIZE):
        lane = min(SUBGRID_SIZE - 1, max(0, lane + rng.choice((-1, 0, 0, 1))))
        pos = (lane, along) if vertical else (along, lane)
        cells.add(pos)
        if rng.random() < 0.35:
            wide = (min(SUBGRID_SIZE - 1, lane + 1), along) if vertical else (along, min(SUBGRID_SIZE - 1, lane + 1))
            cells.add(wide)
    return cells


def _border_ring():
    edge = range(SUBGRID_SIZE)
    return {(x, y) for y in edge for x in edge if x in (0, SUBGRID_SIZE - 1) or y in (0, SUBGRID_SIZE - 1)}


def generate_local(prompt: Prompt, seed: int, affinity: AffinityTable) -> list[list[int]]:
    """Deterministic rule-based grid for a prompt.

    Pure in (prompt.rendered, seed, table): base terrain is sampled from the
    summed word weights, then each known word stamps its layout feature
    (river/border first, then clusters, then scatter). Cluster words always
    keep a 4-connected blob of their dominant tile; the globally dominant
    tile is topped up to a strict plurality at the end.
    """
    known = [(word, affinity.get(word)) for word in prompt.words if word in affinity]
    totals = [0.0] * 16
    for _, aff in known:
        for i, w in enumerate(aff.weights):
            totals[i] += w
    if sum(totals) <= 0:
        return [[GRASS_ID] * SUBGRID_SIZE for _ in range(SUBGRID_SIZE)]

    rng = _generation_rng(prompt.rendered, seed)
    dominant = max(range(16), key=lambda i: (totals[i], -i))
    tile_ids = [i for i in range(16) if totals[i] > 0]
    tile_weights = [totals[i] for i in tile_ids]

    grid = [
        rng.choices(tile_ids, weights=tile_weights, k=SUBGRID_SIZE)
        for _ in range(SUBGRID_SIZE)
    ]

    claimed: set[tuple[int, int]] = set()

    def paint(cells, tile, claim):
        for x, y in cells:
            grid[y][x] = tile
        if claim:
            claimed.update(cells)

    for word, aff in known:
        if aff.hint is LayoutHint.RIVER:
            paint(_carve_river(rng) - claimed, aff.dominant_tile(), claim=True)
    for word, aff in known:
        if aff.hint is LayoutHint.BORDER:
            ring = {c for c in _border_ring() if c not in claimed and rng.random() < 0.8}
            paint(ring, aff.dominant_tile(), claim=True)
    for word, aff in known:
        if aff.hint is LayoutHint.CLUSTER:
            blob = _grow_blob(rng, claimed, target_size=8 + rng.randrange(7))
            paint(blob, aff.dominant_tile(), claim=True)
    for word, aff in known:
        if aff.hint is LayoutHint.SCATTER:
            free = [(x, y) for y in range(SUBGRID_SIZE) for x in range(SUBGRID_SIZE) if (x, y) not in claimed]
            count = min(len(free), 5 + rng.randrange(6))
            paint(rng.sample(free, count), aff.dominant_tile(), claim=False)

    # strict plurality for the dominant tile, never touching claimed features
    counts = [0] * 16
    for row in grid:
        for v in row:
            counts[v] += 1
    convertible = [
        (x, y)
        for y in range(SUBGRID_SIZE)
        for x in range(SUBGRID_SIZE)
        if (x, y) not in claimed and grid[y][x] != dominant
    ]
    while convertible and counts[dominant] <= max(c for i, c in enumerate(counts) if i != dominant):
        x, y = convertible.pop(rng.randrange(len(convertible)))
        counts[grid[y][x]] -= 1
        grid[y][x] = dominant
        counts[dominant] += 1
    return grid


def decode_grid_payload(payload) -> list[list[int]]:
    """Strict decoder for the wire response; never lets a bad grid through."""
    if isinstance(payload, bytes):
        try:
            payload = payload.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedResponse(f"response is not UTF-8: {exc}")
    try:
        document = json.loads(payload)
    except ValueError as exc:
        raise MalformedResponse(f"response is not JSON: {exc}")
    if not isinstance(document, dict) or "grid" not in document:
        raise MalformedResponse("response JSON has no 'grid' field")
    try:
        return validate_tile_grid(document["grid"])
    except InvalidGrid as exc:
        raise MalformedResponse(str(exc))


class LocalBackend:
    """Offline generator; deterministic in (prompt, seed)."""

    kind = "local"

    def __init__(self, affinity: AffinityTable | None = None):
        self.affinity = affinity if affinity is not None else AffinityTable.load()

    def generate(self, prompt: Prompt, seed: int) -> list[list[int]]:
        return generate_local(prompt, seed, self.affinity)


class RemoteBackend:
    """Client for an external generator service."""

    kind = "remote"

    def __init__(self, endpoint: str, timeout_ms: int = 2000):
        self.endpoint = endpoint.rstrip("/")
        self.timeout_ms = timeout_ms

    def generate(self, prompt: Prompt, seed: int | None = None) -> list[list[int]]:
        try:
            response = requests.post(
                f"{self.endpoint}/generate",
                json={"prompt": prompt.rendered},
                timeout=self.timeout_ms / 1000.0,
            )
        except requests.exceptions.Timeout:
            raise GenerationTimeout(f"no response within {self.timeout_ms} ms")
        except requests.exceptions.RequestException as exc:
            raise GenerationServerError(f"endpoint unreachable: {exc}")
        if response.status_code != 200:
            raise GenerationServerError(f"status {response.status_code}")
        return decode_grid_payload(response.content)


class GenerationPipeline:
    """Remote-first generation with optional local fallback."""

    def __init__(self, local: LocalBackend, remote: RemoteBackend | None = None, fallback: bool = True):
        self.local = local
        self.remote = remote
        self.fallback = fallback

    def generate(self, prompt: Prompt, seed: int) -> tuple[list[list[int]], str]:
        """Returns (grid, backend_kind); raises GenerationError when no route works."""
        if self.remote is None:
            return self.local.generate(prompt, seed), LocalBackend.kind
        try:
            return self.remote.generate(prompt, seed), RemoteBackend.kind
        except (GenerationTimeout, GenerationServerError):
            if not self.fallback:
                raise
            return self.local.generate(prompt, seed), LocalBackend.kind
