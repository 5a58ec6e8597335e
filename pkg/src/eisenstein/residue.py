"""Residues modulo the inert prime 2 in O_K, K = Q(sqrt d), d = 5 (mod 8).

O_K/2O_K is the field F_4 = {0, 1, w, w+1} with w the image of (1+sqrt d)/2,
and its unit group is cyclic of order 3.  Every nonzero element of the
localisation O_{K,2} is recorded as a pair (v, t): the power of 2 it carries
and the discrete log in Z/3 of the F_4* class left after removing it.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from types import MappingProxyType

# (x mod 2, y mod 2) of x + y*w  ->  discrete log of the class in F_4*.
CANONICAL_LOG_TABLE = MappingProxyType({(1, 0): 0, (0, 1): 1, (1, 1): 2})

# Table used when a caller does not pin one; only fault injection swaps it.
LOG_TABLE = CANONICAL_LOG_TABLE


@contextmanager
def permuted_log_table() -> Iterator[dict[tuple[int, int], int]]:
    """Swap the classes of w and w+1 in the default table (fault injection)."""
    global LOG_TABLE
    saved = LOG_TABLE
    LOG_TABLE = {(1, 0): 0, (0, 1): 2, (1, 1): 1}
    try:
        yield LOG_TABLE
    finally:
        LOG_TABLE = saved


@dataclass(frozen=True, slots=True)
class ValuedResidue:
    """Nonzero element of O_{K,2} modulo units of 1 + 2O_{K,2}.

    ``v`` may go negative transiently when tracking quotients such as
    1/gamma; a value in O_{K,2} always has ``v >= 0``.
    """

    v: int
    t: int

    def __post_init__(self) -> None:
        if self.t not in (0, 1, 2):
            raise ValueError(f"t must be in Z/3, got {self.t}")

    def __mul__(self, other: ValuedResidue) -> ValuedResidue:
        return ValuedResidue(self.v + other.v, (self.t + other.t) % 3)

    def __truediv__(self, other: ValuedResidue) -> ValuedResidue:
        return ValuedResidue(self.v - other.v, (self.t - other.t) % 3)

    def inverse(self) -> ValuedResidue:
        return ValuedResidue(-self.v, (-self.t) % 3)

    def conjugate(self) -> ValuedResidue:
        # Frobenius x -> x^2 on F_4*, i.e. doubling the log.
        return ValuedResidue(self.v, (2 * self.t) % 3)

    @property
    def is_unit(self) -> bool:
        return self.v == 0


ONE = ValuedResidue(0, 0)


def reduce_coords(x: int, y: int, table=None) -> ValuedResidue:
    """Residue of ``x + y*w`` in the integral basis [1, w]."""
    if x == 0 and y == 0:
        raise ValueError("zero has no residue")
    v = 0
    while x % 2 == 0 and y % 2 == 0:
        x //= 2
        y //= 2
        v += 1
    if table is None:
        table = LOG_TABLE
    return ValuedResidue(v, table[(x & 1, y & 1)])


def reduce_AB(A: int, B: int, table=None) -> ValuedResidue:
    """Residue of ``A + B*sqrt(d)``; uses sqrt(d) = 2w - 1."""
    return reduce_coords(A - B, 2 * B, table)


def reduce_halfint(G: int, B: int, table=None) -> ValuedResidue:
    """Residue of ``(G + B*sqrt(d)) / 2``, which must lie in O_K."""
    if (G - B) % 2:
        raise ValueError(f"(G + B sqrt d)/2 is not integral for G={G}, B={B}")
    return reduce_coords((G - B) // 2, B, table)


def reduce_rational(n: int) -> ValuedResidue:
    """Residue of a nonzero rational integer; odd integers are all 1 in F_4."""
    if n == 0:
        raise ValueError("zero has no residue")
    n = abs(n)
    return ValuedResidue((n & -n).bit_length() - 1, 0)
