"""Slow exact ground truth: the fundamental unit by a big-integer cycle walk."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ideal import InvariantError
from .residue import CANONICAL_LOG_TABLE, reduce_halfint

ORACLE_LIMIT = 10**7


@dataclass(frozen=True, slots=True)
class ExactUnit:
    """epsilon = (G + B sqrt d)/2 with G^2 - d B^2 = 4 * norm."""

    d: int
    G: int
    B: int
    norm: int
    period: int

    def log(self) -> float:
        if self.G.bit_length() < 900:
            return math.log((self.G + self.B * math.sqrt(self.d)) / 2)
        # thousands of digits: isqrt is off by < 1, far below double precision
        return math.log(self.G + math.isqrt(self.d * self.B * self.B)) - math.log(2)

    def power(self, k: int) -> tuple[int, int]:
        """(x, y) with epsilon^k = (x + y sqrt d)/2."""
        x, y = 2, 0
        for _ in range(k):
            x, y = (x * self.G + self.d * y * self.B) // 2, (x * self.B + y * self.G) // 2
        return x, y


def _check_d(d: int, limit: int) -> None:
    if d % 8 != 5:
        raise ValueError(f"d={d} is not 5 mod 8")
    if d > limit:
        raise ValueError(f"d={d} exceeds the oracle cost guard {limit}")


def pell_fundamental_unit(d: int, limit: int = ORACLE_LIMIT) -> ExactUnit:
    """Walk the principal cycle from (2, 1) keeping theta = (G + B sqrt d)/2 exactly."""
    _check_d(d, limit)
    s = math.isqrt(d)
    Q, P = 2, 1
    G, B = 2, 0
    period = 0
    while True:
        P = (P + s) // Q * Q - P
        # theta <- theta * (P + sqrt d) / Q, exact in O_K
        G, B = G * P + B * d, G + B * P
        G, rg = divmod(G, Q)
        B, rb = divmod(B, Q)
        if rg or rb:
            raise InvariantError(f"oracle: generator left O_K for d={d}")
        Q = (d - P * P) // Q
        period += 1
        if Q == 2:
            break
    n4 = G * G - d * B * B
    if n4 not in (4, -4) or (G - B) % 2:
        raise InvariantError(f"oracle: ({G} + {B} sqrt {d})/2 is not a unit")
    return ExactUnit(d, G, B, n4 // 4, period)


def oracle_residue(d: int, limit: int = ORACLE_LIMIT) -> int:
    """Discrete log in Z/3 of epsilon_d mod 2O_K, from the exact unit."""
    eps = pell_fundamental_unit(d, limit)
    r = reduce_halfint(eps.G, eps.B, CANONICAL_LOG_TABLE)
    if r.v != 0:
        raise InvariantError(f"oracle: unit of d={d} reduced into 2O_K")
    return r.t


def odd_pell_solution(d: int, limit: int = ORACLE_LIMIT) -> tuple[int, int] | None:
    """Smallest (x, y) from epsilon^k, k <= 6, with x, y odd and x^2 - d y^2 = 4."""
    eps = pell_fundamental_unit(d, limit)
    for k in range(1, 7):
        x, y = eps.power(k)
        if x % 2 and y % 2 and x * x - d * y * y == 4:
            return x, y
    return None


def odd_pell_solution_exists(d: int, limit: int = ORACLE_LIMIT) -> bool:
    return odd_pell_solution(d, limit) is not None
