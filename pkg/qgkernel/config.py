# Runtime configuration: resource caps, cache wiring and logging level.
# Read from QGK_* environment variables (a local .env file is honoured) with tolerant parsing,
# so a malformed value falls back to its default instead of aborting a run.
from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field


def _to_int(val: Optional[str], default: int) -> int:
    try:
        return int(val) if val is not None else default
    except Exception:
        return default


# Basic truthy parser for env flags (1, true, yes, on)
def _truthy(val: Optional[str]) -> bool:
    if val is None:
        return False
    return val.strip().lower() in {"1", "true", "t", "yes", "y", "on"}


class Settings(BaseModel):
    """Resolved configuration. Frozen; use override_settings() to change it temporarily."""

    model_config = ConfigDict(frozen=True)

    max_ground_size: int = Field(16, ge=0)
    max_word_degree: int = Field(8, ge=0)
    coproduct_cap: int = Field(1_000_000, ge=1)
    transfer_cap: int = Field(1_000_000, ge=1)
    float_switch_dim: int = Field(64, ge=1)
    syllable_cap: int = Field(12, ge=1)
    direct_average_cap: int = Field(100_000, ge=1)
    max_image_terms: int = Field(32, ge=1)
    max_ucp_dim: int = Field(4096, ge=1)
    pullback_cap: int = Field(1_000_000, ge=1)
    redis_enabled: bool = False
    redis_url: str = "redis://localhost:6379/0"
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        load_dotenv(override=False)
        defaults = cls()
        return cls(
            max_ground_size=_to_int(os.getenv("QGK_MAX_GROUND_SIZE"), defaults.max_ground_size),
            max_word_degree=_to_int(os.getenv("QGK_MAX_WORD_DEGREE"), defaults.max_word_degree),
            coproduct_cap=_to_int(os.getenv("QGK_COPRODUCT_CAP"), defaults.coproduct_cap),
            transfer_cap=_to_int(os.getenv("QGK_TRANSFER_CAP"), defaults.transfer_cap),
            float_switch_dim=_to_int(os.getenv("QGK_FLOAT_SWITCH_DIM"), defaults.float_switch_dim),
            syllable_cap=_to_int(os.getenv("QGK_SYLLABLE_CAP"), defaults.syllable_cap),
            direct_average_cap=_to_int(os.getenv("QGK_DIRECT_AVERAGE_CAP"), defaults.direct_average_cap),
            max_image_terms=_to_int(os.getenv("QGK_MAX_IMAGE_TERMS"), defaults.max_image_terms),
            max_ucp_dim=_to_int(os.getenv("QGK_MAX_UCP_DIM"), defaults.max_ucp_dim),
            pullback_cap=_to_int(os.getenv("QGK_PULLBACK_CAP"), defaults.pullback_cap),
            redis_enabled=_truthy(os.getenv("QGK_REDIS_ENABLED", "false")),
            redis_url=os.getenv("QGK_REDIS_URL", defaults.redis_url),
            log_level=(os.getenv("QGK_LOG_LEVEL") or defaults.log_level).upper(),
        )


# Process-wide instance, built lazily on first access
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Drop the cached instance so the next get_settings() re-reads the environment."""
    global _settings
    _settings = None


@contextmanager
def override_settings(**changes: object) -> Iterator[Settings]:
    """
    Temporarily replace selected settings.

        with override_settings(transfer_cap=10_000):
            transfer_matrix(...)
    """
    global _settings
    previous = get_settings()
    _settings = previous.model_copy(update=changes)
    try:
        yield _settings
    finally:
        _settings = previous
