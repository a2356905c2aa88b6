import json
import logging
import os
import sqlite3
import threading
import time
from typing import Callable, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from asc_counts.series_algebra import TruncatedSeries
from asc_counts.trace import TRACE

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"

MAX_KEY_LENGTH = 256


class CachedSeries(BaseModel):
    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    series: TruncatedSeries


def series_key(kind: str, group_spec: str, q: int, order: int) -> str:
    """E.g. 'cond|p=3;m=1|q=3|N=20'."""
    return f"{kind}|{group_spec}|q={q}|N={order}"


class SeriesCache:
    """
    Two-tier (memory + SQLite) store for computed series.

    Rows carry a timestamp and the schema version they were written with; both tiers evict least
    recently used entries by count, and a disk eviction also drops the memory copy.
    """

    def __init__(
        self,
        db_path: str,
        max_memory_items: int = 256,
        max_disk_items: int = 4096,
        schema_version: str = SCHEMA_VERSION,
    ) -> None:
        self._db_path = db_path
        self._max_memory_items = max_memory_items
        self._max_disk_items = max_disk_items
        self._schema_version = schema_version

        self._memory_cache: dict[str, TruncatedSeries] = {}
        self._memory_timestamps: dict[str, float] = {}

        self._setup_database()

        self._stats_memory_hits = 0
        self._stats_disk_hits = 0
        self._stats_misses = 0
        self._stats_memory_evictions = 0
        self._stats_disk_evictions = 0
        self._stats_total_puts = 0
        self._stats_total_gets = 0
        self._stats_total_deletes = 0

        self._lock = threading.RLock()

    def _setup_database(self) -> None:
        if self._db_path != ":memory:":
            db_dir = os.path.dirname(self._db_path)
            if db_dir and not os.path.exists(db_dir):
                os.makedirs(db_dir, exist_ok=True)

        self._conn = sqlite3.connect(self._db_path, check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.execute(
            """
            CREATE TABLE IF NOT EXISTS series_cache (
                key TEXT PRIMARY KEY,
                value TEXT NOT NULL,
                timestamp REAL NOT NULL,
                schema_version TEXT NOT NULL
            )
            """
        )
        self._conn.commit()

    def _validate_key(self, key: str) -> None:
        if not isinstance(key, str):
            raise TypeError(f"Key must be a string, got {type(key).__name__}")
        if len(key) == 0:
            raise ValueError("Key cannot be empty")
        if len(key) > MAX_KEY_LENGTH:
            raise ValueError(f"Key length {len(key)} exceeds maximum of {MAX_KEY_LENGTH} characters")

    def _deserialize(self, json_str: str) -> TruncatedSeries:
        """Raises ValueError if the stored JSON does not parse as a CachedSeries."""
        try:
            return CachedSeries.model_validate_json(json_str).series
        except (ValidationError, json.JSONDecodeError) as e:
            raise ValueError(f"Failed to deserialize JSON: {e}") from e

    def _drop_from_memory(self, key: str) -> None:
        if key in self._memory_cache:
            del self._memory_cache[key]
            del self._memory_timestamps[key]

    def _delete_row(self, key: str) -> None:
        self._conn.execute("DELETE FROM series_cache WHERE key = ?", (key,))
        self._conn.commit()

    def _evict_from_memory(self) -> None:
        """Evict least recently used entries; ties go to the alphabetically smallest key."""
        while len(self._memory_cache) > self._max_memory_items:
            lru_key = min(self._memory_timestamps.keys(), key=lambda k: (self._memory_timestamps[k], k))
            logger.log(TRACE, f"evicting from memory: key={lru_key!r}")
            self._drop_from_memory(lru_key)
            self._stats_memory_evictions += 1

    def _evict_from_disk(self) -> None:
        """Evict least recently used rows, cascading to memory."""
        disk_count = self._conn.execute("SELECT COUNT(*) FROM series_cache").fetchone()[0]
        while disk_count > self._max_disk_items:
            row = self._conn.execute(
                "SELECT key FROM series_cache ORDER BY timestamp ASC, key ASC LIMIT 1"
            ).fetchone()
            if row is None:
                break
            lru_key = row[0]
            logger.log(TRACE, f"evicting from disk: key={lru_key!r}")
            self._delete_row(lru_key)
            self._drop_from_memory(lru_key)
            self._stats_disk_evictions += 1
            disk_count -= 1

    def get(self, key: str, timestamp: Optional[float] = None) -> Optional[TruncatedSeries]:
        """Look in memory, then on disk; a disk hit is promoted to memory."""
        self._validate_key(key)
        logger.log(TRACE, f"get(key={key!r})")
        if timestamp is None:
            timestamp = time.time()

        with self._lock:
            self._stats_total_gets += 1

            if key in self._memory_cache:
                logger.debug(f"series cache memory hit: {key!r}")
                self._memory_timestamps[key] = timestamp
                self._conn.execute("UPDATE series_cache SET timestamp = ? WHERE key = ?", (timestamp, key))
                self._conn.commit()
                self._stats_memory_hits += 1
                return self._memory_cache[key]

            row = self._conn.execute(
                "SELECT value, schema_version FROM series_cache WHERE key = ?", (key,)
            ).fetchone()
            if row is None:
                logger.debug(f"series cache miss: {key!r}")
                self._stats_misses += 1
                return None

            value_json, stored_schema_version = row
            if stored_schema_version != self._schema_version:
                logger.log(
                    TRACE,
                    f"get(key={key!r}): schema version mismatch "
                    f"(stored={stored_schema_version!r}, expected={self._schema_version!r})",
                )
                self._delete_row(key)
                self._stats_misses += 1
                return None

            try:
                series = self._deserialize(value_json)
            except ValueError as e:
                logger.log(TRACE, f"get(key={key!r}): deserialization failed: {e}")
                self._delete_row(key)
                self._stats_misses += 1
                return None

            self._conn.execute("UPDATE series_cache SET timestamp = ? WHERE key = ?", (timestamp, key))
            self._conn.commit()
            self._memory_cache[key] = series
            self._memory_timestamps[key] = timestamp
            self._evict_from_memory()

            logger.debug(f"series cache disk hit: {key!r}")
            self._stats_disk_hits += 1
            return series

    def put(self, key: str, series: TruncatedSeries, timestamp: Optional[float] = None) -> None:
        self._validate_key(key)
        logger.log(TRACE, f"put(key={key!r})")
        if not isinstance(series, TruncatedSeries):
            raise TypeError(f"Value must be a TruncatedSeries, got {type(series).__name__}")
        if timestamp is None:
            timestamp = time.time()

        value_json = CachedSeries(schema_version=self._schema_version, series=series).model_dump_json()
        with self._lock:
            self._stats_total_puts += 1
            self._conn.execute(
                """
                INSERT OR REPLACE INTO series_cache (key, value, timestamp, schema_version)
                VALUES (?, ?, ?, ?)
                """,
                (key, value_json, timestamp, self._schema_version),
            )
            self._conn.commit()
            self._memory_cache[key] = series
            self._memory_timestamps[key] = timestamp
            self._evict_from_memory()
            self._evict_from_disk()

    def get_or_compute(self, key: str, compute: Callable[[], TruncatedSeries]) -> TruncatedSeries:
        cached = self.get(key)
        if cached is not None:
            return cached
        series = compute()
        self.put(key, series)
        return series

    def delete(self, key: str) -> None:
        self._validate_key(key)
        logger.log(TRACE, f"delete(key={key!r})")
        with self._lock:
            self._stats_total_deletes += 1
            self._drop_from_memory(key)
            self._delete_row(key)

    def exists(self, key: str) -> bool:
        self._validate_key(key)
        if key in self._memory_cache:
            return True
        return self._conn.execute("SELECT COUNT(*) FROM series_cache WHERE key = ?", (key,)).fetchone()[0] > 0

    def get_count(self) -> int:
        """Number of distinct keys; every memory entry is also on disk."""
        return self._conn.execute("SELECT COUNT(*) FROM series_cache").fetchone()[0]

    def clear(self) -> None:
        logger.log(TRACE, "clear()")
        with self._lock:
            self._memory_cache.clear()
            self._memory_timestamps.clear()
            self._conn.execute("DELETE FROM series_cache")
            self._conn.commit()

    def get_stats(self) -> dict[str, int]:
        return {
            "memory_hits": self._stats_memory_hits,
            "disk_hits": self._stats_disk_hits,
            "misses": self._stats_misses,
            "memory_evictions": self._stats_memory_evictions,
            "disk_evictions": self._stats_disk_evictions,
            "total_puts": self._stats_total_puts,
            "total_gets": self._stats_total_gets,
            "total_deletes": self._stats_total_deletes,
            "current_memory_items": len(self._memory_cache),
            "current_disk_items": self.get_count(),
        }

    def close(self) -> None:
        if hasattr(self, "_conn"):
            self._conn.close()
