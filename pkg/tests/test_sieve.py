import math

import numpy as np
import pytest

from eisenstein.sieve import enumerate_D, prime_pi, prime_pi_many, sieve_segment, small_primes


def naive_D(lo, hi):
    out = []
    for d in range(lo, hi):
        if d % 8 == 5 and all(d % (p * p) for p in range(3, math.isqrt(d) + 1, 2)):
            out.append(d)
    return out


def naive_prime(n):
    return n > 1 and all(n % p for p in range(2, math.isqrt(n) + 1))


def test_spec_examples():
    assert enumerate_D(0, 100) == [5, 13, 21, 29, 37, 53, 61, 69, 77, 85, 93]
    assert enumerate_D(0, 8) == [5]


def test_count_to_one_million_matches_naive():
    # exact count, independently by trial division on the 125000 candidates
    assert len(enumerate_D(0, 10**6)) == len(naive_D(0, 10**6))


@pytest.mark.parametrize("lo, hi", [(0, 1), (5, 6), (6, 13), (9991, 12345), (10**9, 10**9 + 5000)])
def test_windows(lo, hi):
    if hi < 10**6:
        assert enumerate_D(lo, hi) == naive_D(lo, hi)
    else:
        got = enumerate_D(lo, hi)
        assert all(d % 8 == 5 for d in got)
        assert got == [d for d in range(lo + (5 - lo) % 8, hi, 8) if all(d % (p * p) for p in small_primes(math.isqrt(d)).tolist()[1:])]


def test_segment_independence():
    whole = enumerate_D(0, 200_000)
    parts = []
    for lo in range(0, 200_000, 7777):
        parts += enumerate_D(lo, min(lo + 7777, 200_000))
    assert whole == parts


def test_prime_flags():
    seg = sieve_segment(0, 20000)
    for d, pr in zip(seg.d.tolist(), seg.prime.tolist()):
        assert pr == naive_prime(d), d


def test_bad_range():
    with pytest.raises(ValueError):
        sieve_segment(10, 10)


def test_prime_pi():
    assert [prime_pi(x) for x in (0, 1, 2, 3, 10, 100, 7919)] == [0, 0, 1, 2, 4, 25, 1000]
    assert prime_pi(10**7) == 664579
    xs = [10**6, 17, 2, 10**6 - 1, 999983]
    assert prime_pi_many(xs, segment=4096) == [prime_pi(x) for x in xs]


def test_density_envelope():
    x = 10**6
    assert abs(len(enumerate_D(0, x)) - x / math.pi**2) < x**0.6


def test_small_primes():
    assert small_primes(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(small_primes(1)) == 0
    assert np.all(np.diff(small_primes(10**4)) > 0)
