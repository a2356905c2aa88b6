"""Runtime settings, loaded from a TOML key-value file and overridden by CLI flags."""

import logging
import sys
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from asc_counts.abelian_p_groups import DEFAULT_LATTICE_BOUND_EXPONENT

logger = logging.getLogger(__name__)


class AscSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    default_order: int = Field(default=30, ge=0)
    # subgroup lattices allowed up to order p^this
    lattice_bound_exponent: int = Field(default=DEFAULT_LATTICE_BOUND_EXPONENT, ge=0)
    bruteforce_guard: int = Field(default=10**9, ge=1)
    cache_path: Optional[str] = None
    cache_max_memory_items: int = Field(default=256, ge=1)
    cache_max_disk_items: int = Field(default=4096, ge=1)

    def with_overrides(self, **overrides: object) -> "AscSettings":
        """Return a copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        if not changes:
            return self
        return AscSettings.model_validate({**self.model_dump(), **changes})


def load_settings(path: Optional[str | Path] = None) -> AscSettings:
    """Load settings from a TOML file; missing path means defaults.

    Raises:
        ValueError: If the file cannot be parsed or contains unknown/invalid keys
    """
    if path is None:
        return AscSettings()

    config_path = Path(path)
    try:
        raw = tomllib.loads(config_path.read_text())
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ValueError(f"Cannot read config file {str(config_path)!r}: {e}") from e

    try:
        settings = AscSettings.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ValueError(f"Invalid config key {location!r} in {str(config_path)!r}: {first['msg']}") from e

    logger.debug(f"loaded settings from {str(config_path)!r}: {settings!r}")
    return settings
