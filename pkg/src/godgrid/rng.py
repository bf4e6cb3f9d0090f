"""Named deterministic random streams.

Each subsystem (gacha draws, spawning, combat, generation) gets its own
``random.Random`` derived from the master seed, so the draw order of one
system never perturbs another. Derivation uses SHA-256, never the
process-randomized builtin ``hash``.
"""

from __future__ import annotations

import hashlib
import random

STREAM_NAMES = ("gacha", "spawn", "combat", "generation")


def derive_seed(master_seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{master_seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class RngStreams:
    """Bundle of independent seeded streams used by a game session."""

    def __init__(self, master_seed: int):
        self.master_seed = master_seed
        self.gacha = random.Random(derive_seed(master_seed, "gacha"))
        self.spawn = random.Random(derive_seed(master_seed, "spawn"))
        self.combat = random.Random(derive_seed(master_seed, "combat"))
        self.generation = random.Random(derive_seed(master_seed, "generation"))

    def get(self, name: str) -> random.Random:
        if name not in STREAM_NAMES:
            raise KeyError(name)
        return getattr(self, name)
