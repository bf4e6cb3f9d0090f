"""Headless command-line entry points.

    godgrid run --bot --seed 7 --out runs/win7
    godgrid run --script game.script --seed 3
    godgrid audit-generator --seeds 50 --out audit/
    godgrid analyze runs/win7/prompts.log --out runs/win7/analysis
    godgrid serve --port 8000 --data-dir sessions/

``run`` writes report.json, prompts.log, events.log and receipts.json into
--out; ``analyze`` and ``audit-generator`` write TSV tables plus a PNG
figure next to each table.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import report as report_mod
from .bot import BaselineBot
from .config import load_config
from .errors import EngineError, GenerationError
from .generate import AffinityTable, LocalBackend, Prompt, RemoteBackend
from .runner import DEFAULT_MAX_TICKS, ScriptPolicy, run_game
from .telemetry import parse_log, prompt_length_histogram, tile_frequency
from .tiles import load_tileset


@click.group()
def main():
    """Deterministic god-game engine with word-driven terraforming."""


def _fail(error: EngineError):
    raise click.ClickException(f"{error.code}: {error}")


@main.command("run")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--script", "script_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Command script to replay (default: the baseline bot plays).")
@click.option("--bot", "use_bot", is_flag=True, help="Play with the baseline bot policy.")
@click.option("--max-ticks", type=int, default=DEFAULT_MAX_TICKS, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for report.json, prompts.log, events.log, receipts.json.")
def run_cmd(seed, config_path, script_path, use_bot, max_ticks, out_dir):
    """Run a headless game from a script or the baseline bot."""
    if script_path and use_bot:
        raise click.UsageError("choose either --script or --bot")
    try:
        config = load_config(config_path)
        policy = ScriptPolicy.from_file(script_path) if script_path else BaselineBot()
        out = Path(out_dir) if out_dir else None
        if out:
            out.mkdir(parents=True, exist_ok=True)
        result = run_game(
            config,
            seed,
            policy,
            max_ticks,
            prompt_log_path=out / "prompts.log" if out else None,
            event_log_path=out / "events.log" if out else None,
        )
    except EngineError as error:
        _fail(error)
    summary = result.as_dict()
    if out:
        (out / "report.json").write_text(json.dumps(result.as_dict(include_snapshot=True), indent=1))
        (out / "receipts.json").write_text(report_mod.receipts_to_json(result.receipts))
        click.echo(f"artifacts written to {out}")
    click.echo(json.dumps(summary, indent=1))
    if result.outcome not in ("win", "lose"):
        click.echo("run hit the tick budget before an outcome", err=True)


def _audit_backend(backend_name, generator_url, generator_timeout_ms):
    if backend_name == "remote":
        if not generator_url:
            raise click.UsageError("--generator-url is required with --backend remote")
        return RemoteBackend(generator_url, generator_timeout_ms)
    return LocalBackend(AffinityTable.load())


DEFAULT_AUDIT_PROMPTS = (
    "forest",
    "a river in a forest",
    "a flooded village",
    "lake",
    "village",
    "rocks",
)


@main.command("audit-generator")
@click.option("--prompts", "prompts_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File with one prompt per line (default: a built-in sample).")
@click.option("--seeds", "seed_count", type=int, default=20, show_default=True)
@click.option("--seed", "base_seed", type=int, default=0, show_default=True)
@click.option("--backend", type=click.Choice(["local", "remote"]), default="local", show_default=True)
@click.option("--generator-url", default=None)
@click.option("--generator-timeout-ms", type=int, default=2000, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
def audit_cmd(prompts_path, seed_count, base_seed, backend, generator_url, generator_timeout_ms, out_dir):
    """Probe a generation backend: histograms, diversity, determinism."""
    tileset = load_tileset()
    prompts = (
        [line.strip() for line in Path(prompts_path).read_text(encoding="utf-8").splitlines() if line.strip()]
        if prompts_path
        else list(DEFAULT_AUDIT_PROMPTS)
    )
    engine = _audit_backend(backend, generator_url, generator_timeout_ms)
    rows = []
    try:
        for text in prompts:
            prompt = Prompt(words=tuple(text.split()))
            grids = [engine.generate(prompt, base_seed + i) for i in range(seed_count)]
            again = engine.generate(prompt, base_seed)
            deterministic = again == grids[0]
            pairs = list(zip(grids, grids[1:]))
            diversity = (
                sum(
                    sum(1 for y in range(10) for x in range(10) if a[y][x] != b[y][x])
                    for a, b in pairs
                )
                / len(pairs)
                if pairs
                else 0.0
            )
            counts: dict[str, int] = {}
            for grid in grids:
                for row in grid:
                    for value in row:
                        name = tileset[value].category.value
                        counts[name] = counts.get(name, 0) + 1
            total = sum(counts.values())
            percents = sorted(
                ((name, 100.0 * count / total) for name, count in counts.items()),
                key=lambda kv: -kv[1],
            )
            rows.append(
                {
                    "prompt": text,
                    "seeds": seed_count,
                    "deterministic": deterministic,
                    "diversity": diversity,
                    "category_percents": percents,
                    "top_categories": percents[:3],
                }
            )
    except GenerationError as error:
        _fail(error)
    table = report_mod.audit_table(rows)
    click.echo(table, nl=False)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "generator_audit.tsv").write_text(table, encoding="utf-8")
        category_order = sorted({name for row in rows for name, _ in row["category_percents"]})
        report_mod.save_audit_figure(rows, category_order, out / "generator_audit.png")
        click.echo(f"audit artifacts written to {out}")


@main.command("analyze")
@click.argument("logfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--receipts", "receipts_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="receipts.json from a run (default: sibling of the log file).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.option("--strict", is_flag=True, help="Fail on the first malformed log line.")
def analyze_cmd(logfile, receipts_path, out_dir, strict):
    """Prompt-length and tile-frequency tables from run artifacts."""
    try:
        entries, problems = parse_log(logfile, strict=strict)
        for problem in problems:
            click.echo(f"skipped malformed line {problem.line_number}", err=True)
        if not entries:
            raise click.ClickException("log has no entries to analyze")
        histogram = prompt_length_histogram(entries)
    except EngineError as error:
        _fail(error)
    length_table = report_mod.prompt_length_table(histogram)
    click.echo(length_table, nl=False)

    if receipts_path is None:
        sibling = Path(logfile).with_name("receipts.json")
        receipts_path = str(sibling) if sibling.exists() else None
    frequency_table = None
    if receipts_path:
        receipts = report_mod.load_receipts(receipts_path)
        stats = tile_frequency(receipts, load_tileset())
        frequency_table = report_mod.tile_frequency_table(stats)
        click.echo(frequency_table, nl=False)
    else:
        click.echo("no receipts.json found; skipping the tile-frequency table", err=True)

    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "prompt_lengths.tsv").write_text(length_table, encoding="utf-8")
        report_mod.save_prompt_length_figure(histogram, out / "prompt_lengths.png")
        if frequency_table:
            (out / "tile_frequency.tsv").write_text(frequency_table, encoding="utf-8")
            report_mod.save_tile_frequency_figure(stats, out / "tile_frequency.png")
        click.echo(f"analysis artifacts written to {out}")


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--generator-url", default=None)
@click.option("--generator-timeout-ms", type=int, default=2000, show_default=True)
@click.option("--fallback/--no-fallback", default=True, show_default=True)
@click.option("--tileset", "tileset_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--wordfreq", "wordfreq_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--data-dir", type=click.Path(file_okay=False), default=None)
@click.option("--realtime", is_flag=True, help="New sessions tick in wall-clock time by default.")
def serve_cmd(port, host, generator_url, generator_timeout_ms, fallback, tileset_path, wordfreq_path, data_dir, realtime):
    """Start the HTTP session server."""
    import uvicorn

    from .server import ServerSettings, create_app

    app = create_app(
        ServerSettings(
            generator_url=generator_url,
            generator_timeout_ms=generator_timeout_ms,
            fallback=fallback,
            tileset_path=tileset_path,
            wordfreq_path=wordfreq_path,
            data_dir=data_dir,
            realtime_default=realtime,
        )
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
