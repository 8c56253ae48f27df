"""Result cache for the MCP tools.

Enumerations and scans are pure functions of their arguments, so results are
stored as JSON text under a key built from those arguments.  Redis is used
when ``MONTREP_REDIS_URL`` is set, an in-process dict otherwise.
"""
from __future__ import annotations

import logging
from typing import Awaitable, Callable

import redis.asyncio as redis
from redis.exceptions import RedisError

logger = logging.getLogger(__name__)


class CacheLayer:
    def __init__(self, redis_url: str | None = None, namespace: str = "montrep"):
        self.redis = redis.from_url(redis_url, decode_responses=True) if redis_url else None
        self.namespace = namespace
        self._local: dict[str, str] = {}

    def _key(self, key: str) -> str:
        return f"{self.namespace}:{key}"

    async def get_or_compute(self, key: str, compute: Callable[[], Awaitable[str]], ttl: int = 3600) -> str:
        key = self._key(key)
        if self.redis:
            try:
                cached = await self.redis.get(key)
            except RedisError as exc:
                logger.warning("redis read failed for %s: %s", key, exc)
                cached = None
            if cached:
                return cached
        elif key in self._local:
            return self._local[key]

        result = await compute()

        if self.redis:
            try:
                await self.redis.setex(key, ttl, result)
            except RedisError as exc:
                logger.warning("redis write failed for %s: %s", key, exc)
        else:
            self._local[key] = result
        return result

    def clear_local(self) -> None:
        self._local.clear()
