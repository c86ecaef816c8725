# Memo cache for exact Haar values: an in-process dict plus an opt-in shared Redis tier.
# Controlled by QGK_REDIS_ENABLED / QGK_REDIS_URL; the Redis tier fails open so evaluation never depends on it.
from __future__ import annotations

import logging
import threading
from fractions import Fraction
from typing import Optional

import redis

from .config import get_settings

logger = logging.getLogger("qgkernel.cache")

# Shared tier for this process; the first get_redis() call decides it once
_client: Optional[redis.Redis] = None
_attempted = False


def _connect(url: str) -> Optional[redis.Redis]:
    try:
        client = redis.Redis.from_url(url, socket_timeout=0.25, socket_connect_timeout=0.25)
        client.ping()
    except (redis.RedisError, ValueError) as exc:
        logger.warning("cache.redis.unreachable url=%s error=%s; Haar values stay in the local memo", url, exc)
        return None
    logger.info("cache.redis.attached url=%s", url)
    return client


def get_redis() -> Optional[redis.Redis]:
    """Shared Haar-value store, or None when QGK_REDIS_ENABLED is off or the first ping failed."""
    global _client, _attempted
    settings = get_settings()
    if not settings.redis_enabled:
        return None
    if not _attempted:
        _attempted = True
        _client = _connect(settings.redis_url)
    return _client


def reset_redis() -> None:
    """Forget the client so the next get_redis() connects again."""
    global _client, _attempted
    _client = None
    _attempted = False


def _encode(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _decode(raw: object) -> Optional[Fraction]:
    if raw is None:
        return None
    text = raw.decode() if isinstance(raw, bytes) else str(raw)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        logger.warning("cache.redis.bad_value %r", text)
        return None


class ValueCache:
    """
    Get-or-compute memo keyed by strings.

    Insertions are idempotent: a key always maps to the same exact value, so
    racing writers (threads here, processes through Redis SET NX) are harmless.
    """

    def __init__(self, namespace: str) -> None:
        self.namespace = namespace
        self._local: dict[str, Fraction] = {}
        self._lock = threading.Lock()

    def _redis_key(self, key: str) -> str:
        return f"qgk:v1:{self.namespace}:{key}"

    def get(self, key: str) -> Optional[Fraction]:
        hit = self._local.get(key)
        if hit is not None:
            return hit
        r = get_redis()
        if r is None:
            return None
        try:
            value = _decode(r.get(self._redis_key(key)))
        except redis.RedisError as exc:
            logger.warning("cache.redis.get_failed key=%s error=%s", key, exc)
            return None
        if value is not None:
            with self._lock:
                self._local.setdefault(key, value)
        return value

    def put(self, key: str, value: Fraction) -> Fraction:
        with self._lock:
            stored = self._local.setdefault(key, value)
        r = get_redis()
        if r is not None:
            try:
                r.set(self._redis_key(key), _encode(stored), nx=True)
            except redis.RedisError as exc:
                logger.debug("cache.redis.set_failed key=%s error=%s", key, exc)
        return stored

    def clear(self) -> None:
        with self._lock:
            self._local.clear()

    def __len__(self) -> int:
        return len(self._local)
