"""Baby-step stores keyed by canonical (Q, P*) pairs.

Two backends share one interface: a plain dict, and an unsorted entry list
fronted by a Bloom filter.  The Bloom filter never answers "absent" for a
stored key; a "maybe" is settled by scanning the list.
"""

from __future__ import annotations

import math
from typing import Any, Protocol

Key = tuple[int, int]

_MASK64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    # splitmix64 finaliser
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def key_hashes(key: Key) -> tuple[int, int]:
    """Two independent 64-bit hashes of a key for double hashing."""
    Q, P = key
    h1 = _mix64((Q & _MASK64) ^ _mix64(P & _MASK64))
    h2 = _mix64(h1 ^ 0x5851F42D4C957F2D) | 1
    return h1, h2


def bloom_parameters(n: int, fpr: float) -> tuple[int, int]:
    """Bit count m and hash count k for n items at false-positive rate fpr."""
    n = max(n, 1)
    m = max(64, math.ceil(-n * math.log(fpr) / math.log(2) ** 2))
    k = max(1, math.ceil(m / n * math.log(2)))
    return m, k


class BabyStepStore(Protocol):
    def insert(self, key: Key, value: Any) -> None: ...

    def lookup(self, key: Key) -> Any | None: ...

    def __len__(self) -> int: ...


class ExactStore:
    def __init__(self) -> None:
        self._d: dict[Key, Any] = {}

    def insert(self, key: Key, value: Any) -> None:
        self._d.setdefault(key, value)

    def lookup(self, key: Key) -> Any | None:
        return self._d.get(key)

    def __len__(self) -> int:
        return len(self._d)


class BloomFilter:
    def __init__(self, m: int, k: int) -> None:
        self.m = m
        self.k = k
        self.bits = bytearray((m + 7) // 8)

    @classmethod
    def for_capacity(cls, n: int, fpr: float = 1e-3) -> BloomFilter:
        return cls(*bloom_parameters(n, fpr))

    def _indices(self, key: Key):
        h1, h2 = key_hashes(key)
        m = self.m
        for i in range(self.k):
            yield ((h1 + i * h2) & _MASK64) % m

    def add(self, key: Key) -> None:
        bits = self.bits
        for i in self._indices(key):
            bits[i >> 3] |= 1 << (i & 7)

    def __contains__(self, key: Key) -> bool:
        bits = self.bits
        return all(bits[i >> 3] >> (i & 7) & 1 for i in self._indices(key))


class BloomStore:
    """Unsorted (key, value) list behind a Bloom filter."""

    def __init__(self, capacity: int, fpr: float = 1e-3) -> None:
        self.bloom = BloomFilter.for_capacity(capacity, fpr)
        self.entries: list[tuple[Key, Any]] = []
        self.false_positives = 0

    def insert(self, key: Key, value: Any) -> None:
        if self.lookup(key) is None:
            self.entries.append((key, value))
            self.bloom.add(key)

    def lookup(self, key: Key) -> Any | None:
        if key not in self.bloom:
            return None
        for k, v in self.entries:
            if k == key:
                return v
        self.false_positives += 1
        return None

    def __len__(self) -> int:
        return len(self.entries)


def make_store(backend: str, capacity: int, fpr: float = 1e-3) -> BabyStepStore:
    if backend == "exact":
        return ExactStore()
    if backend == "bloom":
        return BloomStore(capacity, fpr)
    raise ValueError(f"unknown store backend {backend!r}")
