"""Report rendering: text tables, TSV files, and matplotlib figures.

Analysis subcommands write delimited output and a figure per table into
the same directory, so a run's artifacts stay reviewable side by side.
Figures are PNG with date metadata stripped to keep outputs reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .telemetry import LENGTH_BUCKETS

_SAVE_KW = dict(dpi=120, metadata={"Date": None})


@dataclass
class ReceiptView:
    """Receipt fields needed by offline analysis, as stored in receipts.json."""

    grid_index: int
    prompt: str
    grid: list
    backend: str
    tick: int


def receipts_to_json(receipts) -> str:
    rows = [
        {
            "grid_index": r.grid_index,
            "prompt": r.prompt.rendered,
            "grid": r.grid,
            "backend": r.backend,
            "tick": r.tick,
        }
        for r in receipts
    ]
    return json.dumps(rows, indent=1)


def load_receipts(path: str | Path) -> list[ReceiptView]:
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    return [ReceiptView(**row) for row in rows]


# --- prompt length table ------------------------------------------------------


def prompt_length_table(histogram: dict[str, float]) -> str:
    lines = ["prompt_length\tpercent"]
    for bucket in LENGTH_BUCKETS:
        label = f"{bucket} word" if bucket == "1" else f"{bucket} words"
        lines.append(f"{label}\t{histogram[bucket]:.2f}")
    return "\n".join(lines) + "\n"


def save_prompt_length_figure(histogram: dict[str, float], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    values = [histogram[b] for b in LENGTH_BUCKETS]
    ax.bar(LENGTH_BUCKETS, values, color="#4878a8")
    ax.set_xlabel("prompt length (words)")
    ax.set_ylabel("share of prompts (%)")
    ax.set_title("Prompt length distribution")
    for x, v in enumerate(values):
        ax.text(x, v, f"{v:.1f}", ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


# --- tile frequency table ------------------------------------------------------


def tile_frequency_table(stats: dict[str, dict]) -> str:
    lines = ["tile_category\tcount\tpercent"]
    for category, row in stats.items():
        lines.append(f"{category}\t{row['count']}\t{row['percent']:.2f}")
    return "\n".join(lines) + "\n"


def save_tile_frequency_figure(stats: dict[str, dict], path: str | Path) -> None:
    categories = list(stats)
    percents = [stats[c]["percent"] for c in categories]
    fig, ax = plt.subplots(figsize=(6, 0.35 * len(categories) + 1.6))
    ax.barh(categories[::-1], percents[::-1], color="#5a9e6f")
    ax.set_xlabel("share of generated cells (%)")
    ax.set_title("Tile occurrence by category")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


# --- generator audit -------------------------------------------------------------


def audit_table(rows: list[dict]) -> str:
    header = "prompt\tseeds\tdeterministic\tdiversity_cells\ttop_categories"
    lines = [header]
    for row in rows:
        top = ",".join(f"{name}:{pct:.1f}%" for name, pct in row["top_categories"])
        lines.append(
            f"{row['prompt']}\t{row['seeds']}\t{row['deterministic']}\t{row['diversity']:.2f}\t{top}"
        )
    return "\n".join(lines) + "\n"


def save_audit_figure(rows: list[dict], category_order: list[str], path: str | Path) -> None:
    fig, axes = plt.subplots(
        len(rows), 1, figsize=(6.5, 2.1 * len(rows) + 0.6), squeeze=False
    )
    for ax, row in zip((a for pair in axes for a in pair), rows):
        shares = dict(row["category_percents"])
        values = [shares.get(c, 0.0) for c in category_order]
        ax.bar(category_order, values, color="#a8784e")
        ax.set_ylabel("%")
        ax.set_title(f"{row['prompt']!r}  (diversity {row['diversity']:.1f} cells)", fontsize=9)
        ax.tick_params(axis="x", labelrotation=60, labelsize=7)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
