"""Shared test utilities: random members of D, random cycle ideals, and the
two-path composition comparison."""

from __future__ import annotations

import math
import random

import numpy as np

from eisenstein.ideal import (
    Ideal,
    Walker,
    canonical_key,
    ideal_product_plain,
    reduce_walker,
    rho,
)
from eisenstein.infrastructure import MIN_PERIOD_LOG
from eisenstein.nucomp import nucomp_choose
from eisenstein.residue import reduce_rational
from eisenstein.sieve import small_primes


def random_D(rng: random.Random, lo: int, hi: int) -> int:
    """A random squarefree d = 5 (mod 8) in [lo, hi), hi <= 2**62."""
    sq = small_primes(math.isqrt(hi))[1:] ** 2
    while True:
        d = rng.randrange(lo, hi) // 8 * 8 + 5
        if lo <= d < hi and not np.any(np.int64(d) % sq == 0):
            return d


def cycle_walker(d: int, steps: int) -> Walker:
    w = Walker(Ideal.unit(d))
    for _ in range(steps):
        w = rho(w)
    return w


def compose_nucomp(w1: Walker, w2: Walker) -> tuple[Walker, str]:
    I3, g, lg, branch = nucomp_choose(w1.ideal, w2.ideal)
    w, _ = reduce_walker(Walker(I3, w1.res * w2.res / g, w1.logv + w2.logv - lg))
    return w, branch


def compose_plain(w1: Walker, w2: Walker) -> Walker:
    S, I3 = ideal_product_plain(w1.ideal, w2.ideal)
    w, _ = reduce_walker(Walker(I3, w1.res * w2.res / reduce_rational(S), w1.logv + w2.logv - math.log(S)))
    return w


def aligned(a: Walker, b: Walker, max_steps: int = 200) -> tuple[Walker, Walker] | None:
    """Walk whichever is behind until both sit on the same cycle ideal at the
    same log position; None if that does not happen within ``max_steps``."""
    for _ in range(max_steps):
        if canonical_key(a.ideal) == canonical_key(b.ideal) and abs(a.logv - b.logv) < MIN_PERIOD_LOG:
            return a, b
        if a.logv < b.logv:
            a = rho(a)
        else:
            b = rho(b)
    return None


def path_mismatch(w1: Walker, w2: Walker) -> str | None:
    """Compare NUCOMPchoose+reduce with plain product+reduce; None if they agree."""
    a, branch = compose_nucomp(w1, w2)
    b = compose_plain(w1, w2)
    if a.res.v or b.res.v:
        return f"nonzero valuation ({branch}): {a.res} vs {b.res}"
    pair = aligned(a, b)
    if pair is None:
        return f"no common cycle position ({branch})"
    a, b = pair
    if a.res != b.res:
        return f"residue {a.res.t} != {b.res.t} ({branch})"
    if abs(a.logv - b.logv) > 1e-6:
        return f"log {a.logv} != {b.logv} ({branch})"
    return None


# acceptance criteria outcomes, printed by the terminal summary hook
ACCEPTANCE_LINES: list[str] = []


def record(number: int, ok: bool, text: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
