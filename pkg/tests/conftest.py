from __future__ import annotations

import sys
from pathlib import Path

import pytest

from tilogic import TileSet

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@pytest.fixture
def uniform() -> TileSet:
    """One tile, every edge the same colour."""
    return TileSet.from_edges([("a", "a", "a", "a")])


@pytest.fixture
def alternating() -> TileSet:
    """t0 and t1 must alternate along rows; columns are free."""
    return TileSet.from_edges([("a", "b", "c", "c"), ("b", "a", "c", "c")])


@pytest.fixture
def incompatible() -> TileSet:
    return TileSet.from_edges([("a", "b", "c", "c")])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("tests.test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
