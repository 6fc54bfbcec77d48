from __future__ import annotations

import pytest

from codegree.constructors import build, resolve
from codegree.chartable import character_table

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


_groups: dict = {}
_tables: dict = {}


def group(alias: str):
    if alias not in _groups:
        _groups[alias] = build(resolve(alias))
    return _groups[alias]


def table(alias: str):
    if alias not in _tables:
        _tables[alias] = character_table(group(alias))
    return _tables[alias]


@pytest.fixture(scope="session")
def small():
    """Lazily built small fixture groups by alias."""
    return group


@pytest.fixture(scope="session")
def qian37():
    return group("qian:3,7")


@pytest.fixture(scope="session")
def five_cycle():
    return group("five-cycle")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running witness computations")


@pytest.fixture(scope="session")
def corpus_cold(tmp_path_factory):
    """One cold run of the default corpus: (report, report text, seconds, cache directory)."""
    import time

    from codegree.cache import TableCache
    from codegree.checks import corpus_specs, default_corpus_dir, report_text, run_corpus

    cache_dir = tmp_path_factory.mktemp("cache-cold")
    t0 = time.perf_counter()
    report = run_corpus(corpus_specs(default_corpus_dir()), TableCache(cache_dir))
    seconds = time.perf_counter() - t0
    return report, report_text(report), seconds, cache_dir


@pytest.fixture(scope="session")
def corpus_entries(corpus_cold):
    return {e["name"]: e for e in corpus_cold[0]["entries"]}
