"""Tests for least-recently-used eviction in both cache tiers."""

from asc_counts.series_algebra import TruncatedSeries
from asc_counts.series_cache import SeriesCache


def _series(value: int) -> TruncatedSeries:
    return TruncatedSeries.from_coefficients([1, value])


def test_memory_eviction_keeps_the_disk_copy(db_path: str) -> None:
    """Memory drops the oldest entry; the row stays on disk."""
    cache = SeriesCache(db_path=db_path, max_memory_items=2)
    cache.put("a", _series(1), timestamp=1.0)
    cache.put("b", _series(2), timestamp=2.0)
    cache.put("c", _series(3), timestamp=3.0)

    assert set(cache._memory_cache) == {"b", "c"}
    assert cache.get_count() == 3
    assert cache.get_stats()["memory_evictions"] == 1
    cache.close()


def test_access_refreshes_recency(db_path: str) -> None:
    """A get() makes an entry the most recently used."""
    cache = SeriesCache(db_path=db_path, max_memory_items=2)
    cache.put("a", _series(1), timestamp=1.0)
    cache.put("b", _series(2), timestamp=2.0)
    cache.get("a", timestamp=3.0)
    cache.put("c", _series(3), timestamp=4.0)

    assert set(cache._memory_cache) == {"a", "c"}
    cache.close()


def test_promotion_can_evict(db_path: str) -> None:
    """Promoting a disk hit pushes the least recent memory entry out."""
    cache = SeriesCache(db_path=db_path, max_memory_items=2)
    cache.put("a", _series(1), timestamp=1.0)
    cache.put("b", _series(2), timestamp=2.0)
    cache.put("c", _series(3), timestamp=3.0)

    assert cache.get("a", timestamp=4.0) == _series(1)
    assert set(cache._memory_cache) == {"a", "c"}
    stats = cache.get_stats()
    assert stats["disk_hits"] == 1
    assert stats["memory_evictions"] == 2
    cache.close()


def test_ties_evict_the_smallest_key(db_path: str) -> None:
    """Equal timestamps are broken alphabetically."""
    cache = SeriesCache(db_path=db_path, max_memory_items=1, max_disk_items=1)
    cache.put("b", _series(2), timestamp=1.0)
    cache.put("a", _series(1), timestamp=1.0)

    assert set(cache._memory_cache) == {"b"}
    assert cache.exists("b")
    assert not cache.exists("a")
    cache.close()


def test_disk_eviction_cascades_to_memory(db_path: str) -> None:
    """A row evicted from disk is gone from memory too."""
    cache = SeriesCache(db_path=db_path, max_memory_items=10, max_disk_items=2)
    cache.put("a", _series(1), timestamp=1.0)
    cache.put("b", _series(2), timestamp=2.0)
    cache.put("c", _series(3), timestamp=3.0)

    assert cache.get("a") is None
    assert cache.get_count() == 2
    stats = cache.get_stats()
    assert stats["disk_evictions"] == 1
    assert stats["current_memory_items"] == 2
    cache.close()
