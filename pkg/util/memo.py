"""
Implements the Memo class, a thread-safe memo for pure computations.
"""
from collections.abc import Callable, Hashable
from logging import getLogger
from threading import Lock

LOGGER = getLogger("util.memo")


class Memo[K: Hashable, V]:
    """
    Dictionary-backed memo guarded by a lock.

    The first finished computation for a key is stored; any caller that
    computed the same key concurrently gets the stored object back, so a
    key always maps to one identical value.
    The computation itself runs outside the lock.
    """
    __slots__ = ("_cache", "_lock", "_name")

    def __init__(self, name: str="memo"):
        self._cache: dict[K, V] = {}
        self._lock = Lock()
        self._name = name

    def get_or_compute(self, key: K, compute: Callable[[], V]) -> V:
        with self._lock:
            if key in self._cache:
                LOGGER.debug("%s: cache hit for %s", self._name, key)
                return self._cache[key]
        value = compute()
        with self._lock:
            # Someone may have been faster, theirs wins
            return self._cache.setdefault(key, value)

    def items(self) -> list[tuple[K, V]]:
        with self._lock:
            return list(self._cache.items())

    def __contains__(self, key: K) -> bool:
        with self._lock:
            return key in self._cache

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)
