"""Segmented sieves over the class d = 5 (mod 8).

Only odd squares can divide such d, and only odd primes matter for the
prime flags, so every array here is indexed by i with d = first + 8*i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass
class Segment:
    lo: int
    hi: int
    d: np.ndarray           # every integer = 5 (mod 8) in [lo, hi)
    squarefree: np.ndarray
    prime: np.ndarray

    @property
    def D(self) -> np.ndarray:
        return self.d[self.squarefree]


def _first(lo: int) -> int:
    return lo + (5 - lo) % 8


def sieve_segment(lo: int, hi: int) -> Segment:
    if not 0 <= lo < hi:
        raise ValueError(f"bad range [{lo}, {hi})")
    first = _first(lo)
    n = max(0, (hi - first + 7) // 8)
    d = first + 8 * np.arange(n, dtype=np.int64)
    sqf = np.ones(n, dtype=bool)
    prime = np.ones(n, dtype=bool)
    if n == 0:
        return Segment(lo, hi, d, sqf, prime)
    top = int(d[-1])
    for p in small_primes(math.isqrt(top)).tolist():
        if p == 2:
            continue
        inv8 = pow(8, -1, p)
        # first index with p | d; skip d == p itself
        i = (-first * inv8) % p
        if first + 8 * i == p:
            i += p
        prime[i::p] = False
        q = p * p
        i = (-first * pow(8, -1, q)) % q
        sqf[i::q] = False
    prime &= d > 1
    return Segment(lo, hi, d, sqf, prime)


def enumerate_D(lo: int, hi: int) -> list[int]:
    """Squarefree d = 5 (mod 8) in [lo, hi), ascending."""
    return sieve_segment(lo, hi).D.tolist()


def prime_pi(x: int, segment: int = 1 << 22) -> int:
    """Number of primes <= x, by an odd-only segmented sieve."""
    return prime_pi_many([x], segment)[0]


def prime_pi_many(xs, segment: int = 1 << 22) -> list[int]:
    """pi(x) for every x in ``xs`` from one sieve pass up to max(xs)."""
    xs = [int(x) for x in xs]
    if not xs:
        return []
    top = max(xs)
    want = sorted(set(x for x in xs if x >= 2))
    found = {x: 0 for x in xs if x < 2}
    if not want:
        return [found[x] for x in xs]
    base = small_primes(math.isqrt(top))[1:]
    count = 1  # the prime 2
    lo = 3
    wi = 0
    while wi < len(want) and want[wi] < lo:
        found[want[wi]] = count
        wi += 1
    while lo <= top:
        hi = min(lo + 2 * segment, top + 1)
        n = (hi - lo + 1) // 2
        flags = np.ones(n, dtype=bool)  # flags[j] <-> lo + 2j
        for p in base.tolist():
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            if start % 2 == 0:
                start += p
            flags[(start - lo) // 2 :: p] = False
        cum = np.cumsum(flags)
        while wi < len(want) and want[wi] < hi:
            j = (want[wi] - lo) // 2
            found[want[wi]] = count + int(cum[j])
            wi += 1
        count += int(cum[-1])
        lo += 2 * n
    return [found[x] for x in xs]
