"""Pytest configuration and shared fixtures."""

import tempfile
from pathlib import Path
from typing import Generator

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup


def pytest_addoption(parser: pytest.Parser) -> None:
    """Add custom command line options."""
    parser.addoption(
        "--db-mode",
        action="store",
        default="disk",
        choices=["memory", "disk"],
        help="Series cache database: 'memory' for in-memory SQLite, 'disk' for a temporary file (default: disk)",
    )


@pytest.fixture
def db_path(request: pytest.FixtureRequest) -> Generator[str, None, None]:
    """Series cache database path for the configured --db-mode; one isolated database per test."""
    if request.config.getoption("--db-mode") == "memory":
        yield ":memory:"
        return

    with tempfile.TemporaryDirectory() as temp_dir:
        yield str(Path(temp_dir) / f"series_{request.node.name}.db")


@pytest.fixture
def c2() -> AbelianPGroup:
    return AbelianPGroup.cyclic(2, 1)


@pytest.fixture
def c3() -> AbelianPGroup:
    return AbelianPGroup.cyclic(3, 1)
