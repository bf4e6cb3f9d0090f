import pytest

from godgrid.generate import AffinityTable
from godgrid.tiles import load_tileset
from godgrid.words import build_pool, load_word_frequencies


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, when they ran."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in rep.nodeid and rep.when == "call":
                rows.append((rep.nodeid.split("::")[-1], outcome == "passed"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, ok in sorted(rows):
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def tileset():
    return load_tileset()


@pytest.fixture(scope="session")
def freq_table():
    return load_word_frequencies()


@pytest.fixture(scope="session")
def pool_words(freq_table):
    return build_pool(freq_table).queue


@pytest.fixture
def pool(pool_words):
    from godgrid.words import WordPool

    return WordPool(pool_words)


@pytest.fixture(scope="session")
def affinity():
    return AffinityTable.load()
