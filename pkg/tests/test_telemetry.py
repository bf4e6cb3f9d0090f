import random

import pytest

from godgrid.errors import EmptyInput, EmptyLog, MalformedLine
from godgrid.telemetry import (
    PromptLogEntry,
    append_log,
    format_entry,
    parse_log,
    prompt_length_histogram,
    tile_frequency,
)


def entry(tick=120, grid=3, prompt="a river in a forest", backend="remote"):
    return PromptLogEntry(tick=tick, grid_index=grid, prompt_rendered=prompt, backend_kind=backend)


def test_line_format_is_exact():
    assert format_entry(entry()) == '120\t3\tremote\t"a river in a forest"\n'


def test_round_trip(tmp_path):
    path = tmp_path / "prompts.log"
    append_log(path, entry())
    entries, problems = parse_log(path)
    assert problems == []
    assert entries == [entry()]
    assert entries[0].word_count == 5


def test_escaping_round_trip(tmp_path):
    path = tmp_path / "prompts.log"
    tricky = entry(prompt='say "hi" \\ bye')
    append_log(path, tricky)
    entries, _ = parse_log(path)
    assert entries[0].prompt_rendered == 'say "hi" \\ bye'


def test_empty_file(tmp_path):
    path = tmp_path / "prompts.log"
    path.write_text("")
    entries, problems = parse_log(path)
    assert entries == [] and problems == []


def test_malformed_line_reported_with_number(tmp_path):
    path = tmp_path / "prompts.log"
    path.write_text('120\t3\n' + format_entry(entry()), encoding="utf-8")
    entries, problems = parse_log(path)
    assert len(entries) == 1
    assert len(problems) == 1
    assert problems[0].line_number == 1


def test_strict_mode_raises(tmp_path):
    path = tmp_path / "prompts.log"
    path.write_text("garbage line\n", encoding="utf-8")
    with pytest.raises(MalformedLine):
        parse_log(path, strict=True)


@pytest.mark.parametrize(
    "bad",
    [
        '120\t99\tremote\t"x"',       # grid out of range
        '-1\t3\tremote\t"x"',          # negative tick
        '120\t3\tcarrier\t"x"',        # unknown backend
        '120\t3\tremote\tx',           # unquoted prompt
        '120\t3\tremote\t"x',          # unterminated quote
    ],
)
def test_bad_lines_rejected(bad, tmp_path):
    path = tmp_path / "prompts.log"
    path.write_text(bad + "\n", encoding="utf-8")
    entries, problems = parse_log(path)
    assert entries == []
    assert len(problems) == 1


def test_fuzzed_entries_round_trip(tmp_path):
    rng = random.Random(7)
    path = tmp_path / "prompts.log"
    originals = []
    alphabet = 'abc xyz"\\'
    for i in range(1000):
        prompt = "".join(rng.choice(alphabet) for _ in range(rng.randrange(1, 30))) or "x"
        e = PromptLogEntry(
            tick=rng.randrange(100000),
            grid_index=rng.randrange(16),
            prompt_rendered=prompt,
            backend_kind=rng.choice(("remote", "local")),
        )
        originals.append(e)
        append_log(path, e)
    parsed, problems = parse_log(path)
    assert problems == []
    assert parsed == originals


def test_histogram_buckets():
    entries = [entry(prompt=p) for p in ("one", "one two", "one")]
    histogram = prompt_length_histogram(entries)
    assert histogram["1"] == pytest.approx(66.6667, abs=0.01)
    assert histogram["2"] == pytest.approx(33.3333, abs=0.01)
    assert histogram["3"] == histogram["4"] == histogram["5+"] == 0.0
    assert sum(histogram.values()) == pytest.approx(100.0)


def test_long_prompts_bucket_as_five_plus():
    entries = [entry(prompt="a b c d e f g")]
    assert prompt_length_histogram(entries)["5+"] == 100.0


def test_histogram_rejects_empty():
    with pytest.raises(EmptyLog):
        prompt_length_histogram([])


def test_histogram_partitions_entries():
    rng = random.Random(3)
    entries = [entry(prompt=" ".join(["w"] * rng.randrange(1, 9))) for _ in range(500)]
    histogram = prompt_length_histogram(entries)
    assert sum(histogram.values()) == pytest.approx(100.0)


class FakeReceipt:
    def __init__(self, grid):
        self.grid = grid


def test_tile_frequency_all_water(tileset):
    stats = tile_frequency([FakeReceipt([[9] * 10 for _ in range(10)])], tileset)
    assert stats["water"]["count"] == 100
    assert stats["water"]["percent"] == 100.0
    assert list(stats) == ["water"]


def test_tile_frequency_conserves_counts(tileset):
    rng = random.Random(11)
    receipts = [
        FakeReceipt([[rng.randrange(16) for _ in range(10)] for _ in range(10)])
        for _ in range(7)
    ]
    stats = tile_frequency(receipts, tileset)
    assert sum(v["count"] for v in stats.values()) == 700
    assert sum(v["percent"] for v in stats.values()) == pytest.approx(100.0)


def test_tile_frequency_rejects_empty(tileset):
    with pytest.raises(EmptyInput):
        tile_frequency([], tileset)
