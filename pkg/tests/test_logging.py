"""Tests for TRACE and DEBUG logging."""

import logging

import pytest

from asc_counts.abelian_p_groups import AbelianPGroup, subgroup_lattice
from asc_counts.conductor_gf import global_asc_gf
from asc_counts.series_algebra import TruncatedSeries
from asc_counts.series_cache import SeriesCache
from asc_counts.trace import TRACE


def test_trace_level_is_defined() -> None:
    """TRACE sits below DEBUG and has a name."""
    assert TRACE == 5
    assert TRACE < logging.DEBUG
    assert logging.getLevelName(TRACE) == "TRACE"


def test_cache_operations_log_at_trace(db_path: str, caplog: pytest.LogCaptureFixture) -> None:
    """put(), get() and delete() log their key at TRACE."""
    cache = SeriesCache(db_path=db_path)
    with caplog.at_level(TRACE, logger="asc_counts.series_cache"):
        cache.put("key1", TruncatedSeries.one(1))
        cache.get("key1")
        cache.delete("key1")

    messages = [record.message for record in caplog.records]
    assert "put(key='key1')" in messages
    assert "get(key='key1')" in messages
    assert "delete(key='key1')" in messages
    cache.close()


def test_cache_hits_and_misses_log_at_debug(db_path: str, caplog: pytest.LogCaptureFixture) -> None:
    """Hits and misses are DEBUG messages."""
    cache = SeriesCache(db_path=db_path)
    cache.put("key1", TruncatedSeries.one(1))
    with caplog.at_level(logging.DEBUG, logger="asc_counts.series_cache"):
        cache.get("key1")
        cache.get("key2")

    debug = [record.message for record in caplog.records if record.levelno == logging.DEBUG]
    assert any("memory hit" in message for message in debug)
    assert any("miss" in message for message in debug)
    cache.close()


def test_trace_is_silent_at_debug(caplog: pytest.LogCaptureFixture) -> None:
    """Closed-form construction logs only at TRACE."""
    with caplog.at_level(logging.DEBUG, logger="asc_counts.conductor_gf"):
        global_asc_gf(AbelianPGroup.cyclic(2, 1), 2)
    assert not [record for record in caplog.records if record.name == "asc_counts.conductor_gf"]

    with caplog.at_level(TRACE, logger="asc_counts.conductor_gf"):
        global_asc_gf(AbelianPGroup.cyclic(2, 1), 2)
    assert any("global_asc_gf" in record.message for record in caplog.records)


def test_lattice_size_is_logged(caplog: pytest.LogCaptureFixture) -> None:
    """The subgroup count of each lattice is a DEBUG message."""
    with caplog.at_level(logging.DEBUG, logger="asc_counts.abelian_p_groups"):
        subgroup_lattice(AbelianPGroup.cyclic(3, 2))
    assert any("3 subgroups" in record.message for record in caplog.records)
