"""Primitive ideals [Q/2, (P + sqrt d)/2] of O_K and the reduction step rho.

Every routine here carries the generator of the principal ideal along as a
:class:`~eisenstein.residue.ValuedResidue` plus an approximate natural log,
never as an exact algebraic number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .residue import ONE, ValuedResidue, reduce_AB, reduce_rational


class InvariantError(ArithmeticError):
    """An arithmetic invariant broke; the current d cannot be trusted."""


@dataclass(frozen=True, slots=True)
class Ideal:
    Q: int
    P: int
    d: int

    def check(self) -> None:
        Q, P, d = self.Q, self.P, self.d
        if Q <= 0 or Q % 4 != 2 or P % 2 == 0 or (d - P * P) % (2 * Q):
            raise InvariantError(f"invalid ideal Q={Q} P={P} for d={d}")

    @property
    def norm(self) -> int:
        return self.Q // 2

    @classmethod
    def unit(cls, d: int) -> Ideal:
        return cls(2, 1, d)


@dataclass(frozen=True, slots=True)
class Walker:
    """An ideal together with the residue and log of its tracked generator."""

    ideal: Ideal
    res: ValuedResidue = ONE
    logv: float = 0.0


def log_abs(A: int, B: int, d: int) -> float:
    """ln|A + B sqrt(d)|, avoiding cancellation when A and B differ in sign."""
    r = math.sqrt(d)
    if A == 0 or B == 0 or (A > 0) == (B > 0):
        return math.log(abs(A) + abs(B) * r)
    return math.log(abs(A * A - d * B * B)) - math.log(abs(A) + abs(B) * r)


def _step(w: Walker, P1: int) -> Walker:
    I = w.ideal
    Q, d = I.Q, I.d
    num = d - P1 * P1
    if num % Q:
        raise InvariantError(f"rho: {Q} does not divide d - P^2 for d={d}")
    Q1 = abs(num // Q)
    out = Ideal(Q1, P1, d)
    out.check()
    res = w.res * reduce_AB(P1, 1) / reduce_rational(Q)
    return Walker(out, res, w.logv + log_abs(P1, 1, d) - math.log(Q))


def rho(w: Walker) -> Walker:
    """One continued-fraction step (P,Q) -> (qQ - P, (d - P'^2)/Q).

    The generator is multiplied by (P' + sqrt d)/Q.
    """
    I = w.ideal
    q = (I.P + math.isqrt(I.d)) // I.Q
    return _step(w, q * I.Q - I.P)


def rho_centered(w: Walker) -> Walker:
    """Reduction step with P' = -P (mod Q) taken in (-Q/2, Q/2].

    Used while Q > 2 sqrt(d): it shrinks Q geometrically, whereas the floor
    rule can crawl for very large Q.
    """
    I = w.ideal
    P1 = (-I.P) % I.Q
    if P1 > I.Q // 2:
        P1 -= I.Q
    return _step(w, P1)


def canonical_key(I: Ideal) -> tuple[int, int]:
    """(Q, P*) with P* = P (mod Q) in the window (floor(sqrt d) - Q, floor(sqrt d)]."""
    s = math.isqrt(I.d)
    return I.Q, s - (s - I.P) % I.Q


def is_reduced(I: Ideal) -> bool:
    Q, P = canonical_key(I)
    return Q - P <= math.isqrt(I.d)


def reduce_walker(w: Walker, max_steps: int = 10_000) -> tuple[Walker, int]:
    """Apply rho until the ideal is reduced; returns the walker and step count."""
    d = w.ideal.d
    steps = 0
    while w.ideal.Q * w.ideal.Q > 4 * d:
        w = rho_centered(w)
        steps += 1
    while not is_reduced(w.ideal):
        w = rho(w)
        steps += 1
        if steps > max_steps:
            raise InvariantError(f"reduction did not terminate for d={d}")
    return w, steps


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def ideal_product_plain(I1: Ideal, I2: Ideal) -> tuple[int, Ideal]:
    """I1 * I2 = S * I3 with I3 primitive; returns (S, I3).

    With a_i = Q_i/2 and b_i = P_i, the content is
    e = gcd(a1, a2, (b1 + b2)/2) and the primitive part has norm a1 a2 / e^2
    and middle coefficient solving the usual composition congruences.
    """
    d = I1.d
    a1, b1 = I1.Q // 2, I1.P
    a2, b2 = I2.Q // 2, I2.P
    m = (b1 + b2) // 2
    g, u, v = xgcd(a1, a2)
    e, w, z = xgcd(g, m)
    X, Y, Z = w * u, w * v, z
    a3 = a1 * a2 // (e * e)
    num = X * a1 * b2 + Y * a2 * b1 + Z * (b1 * b2 + d) // 2
    if num % e:
        raise InvariantError(f"composition congruences unsolvable for d={d}")
    b3 = (num // e) % (2 * a3)
    I3 = Ideal(2 * a3, b3, d)
    I3.check()
    return e, I3
