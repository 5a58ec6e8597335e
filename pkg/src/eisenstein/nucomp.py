"""NUCOMP / NUDUPL composition of binary quadratic forms with partial reduction.

A form (u, v, w) has discriminant v^2 - 4uw = d.  Both compositions return
the output form phi3 and the relative generator gamma = (A + B sqrt d)/C with
phi3 = (1/gamma) phi1 phi2.  "mod" is the least non-negative residue and
every other division must be exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ideal import Ideal, InvariantError, ideal_product_plain, log_abs, xgcd
from .residue import ValuedResidue, reduce_AB, reduce_rational

# Plain ideal product below this Q: NUCOMP intermediates blow up on small norms.
PLAIN_PRODUCT_MAX_Q = 50


@dataclass(frozen=True, slots=True)
class Form:
    u: int
    v: int
    w: int

    @property
    def disc(self) -> int:
        return self.v * self.v - 4 * self.u * self.w


@dataclass(frozen=True, slots=True)
class Gamma:
    A: int
    B: int
    C: int

    def residue(self) -> ValuedResidue:
        return reduce_AB(self.A, self.B) / reduce_rational(self.C)

    def log(self, d: int) -> float:
        return log_abs(self.A, self.B, d) - math.log(abs(self.C))


def _div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise InvariantError(f"inexact division {a} / {b}")
    return q


def _partial_euclid(bx: int, by: int, L: int) -> tuple[int, int, int, int, int]:
    x, y, z = 1, 0, 0
    while abs(by) > L and bx != 0:
        q, t = divmod(by, bx)
        by, bx = bx, t
        t = y - q * x
        y, x = x, t
        z += 1
    if z % 2:
        by, y = -by, -y
    return bx, by, x, y, z


def nucomp(f1: Form, f2: Form, L: int) -> tuple[Form, Gamma]:
    if f1.w < f2.w:
        f1, f2 = f2, f1
    u1, v1, w1 = f1.u, f1.v, f1.w
    u2, v2, w2 = f2.u, f2.v, f2.w
    s = _div(v1 + v2, 2)
    m = v2 - s

    F, b, c = xgcd(u2, u1)  # b*u2 + c*u1 = F
    if s % F == 0:
        G = F
        Bx = m * b
        By = u1 // G
        Cy = u2 // G
        Dy = s // G
    else:
        G, x, y = xgcd(F, s)
        H = F // G
        By = u1 // G
        Cy = u2 // G
        Dy = s // G
        l = (y * (b * w1 + c * w2)) % H
        Bx = _div(b * m + l * By, H)

    bx, by, x, y, z = _partial_euclid(Bx % By, By, L)
    ax, ay = G * x, G * y

    if z:
        cx = _div(Cy * bx - m * x, By)
        Q1 = by * cx
        Q2 = Q1 + m
        dx = _div(Dy * bx - w2 * x, By)
        Q3 = y * dx
        Q4 = Q3 + Dy
        dy = _div(Q4, x)
        if bx:
            cy = _div(Q2, bx)
        else:
            cy = _div(cx * dy - w1, dx)
        u3 = by * cy - ay * dy
        w3 = bx * cx - ax * dx
        v3 = G * (Q3 + Q4) - Q1 - Q2
    else:
        Q1 = Cy * bx
        cx = _div(Q1 - m, By)
        dx = _div(bx * Dy - w2, By)
        u3 = by * Cy
        w3 = bx * cx - G * dx
        v3 = v2 - 2 * Q1

    t = 2 * u3
    return Form(u3, v3, w3), Gamma(G * (x * t + y * v3), G * y, t)


def nudupl(f: Form, L: int) -> tuple[Form, Gamma]:
    u, v, w = f.u, f.v, f.w
    G, x, y = xgcd(u, v)
    By = u // G
    Dy = v // G
    Bx = (y * w) % By

    bx, by, x, y, z = _partial_euclid(Bx, By, L)
    ax, ay = G * x, G * y

    if z == 0:
        dx = _div(bx * Dy - w, By)
        u3 = by * by
        w3 = bx * bx
        v3 = v - (bx + by) ** 2 + u3 + w3
        w3 = w3 - G * dx
    else:
        dx = _div(bx * Dy - w * x, By)
        Q1 = dx * y
        dy = Q1 + Dy
        v3 = G * (dy + Q1)
        dy = _div(dy, x)
        u3 = by * by
        w3 = bx * bx
        v3 = v3 - (bx + by) ** 2 + u3 + w3
        u3 = u3 - ay * dy
        w3 = w3 - ax * dx

    t = 2 * u3
    return Form(u3, v3, w3), Gamma(G * (x * t + y * v3), G * y, t)


def ideal_to_form(I: Ideal) -> Form:
    """[u/2, (v + sqrt d)/2]  ->  (u/2, -v, (v^2 - d)/(2u))."""
    u, v = I.Q, I.P % I.Q
    return Form(u // 2, -v, _div(v * v - I.d, 2 * u))


def form_to_ideal(f: Form, d: int) -> Ideal:
    u = abs(2 * f.u)
    I = Ideal(u, (-f.v) % u, d)
    I.check()
    return I


def quartic_root(d: int) -> int:
    return math.isqrt(math.isqrt(d))


def nucomp_choose(I1: Ideal, I2: Ideal) -> tuple[Ideal, ValuedResidue, float, str]:
    """Compose two ideals; returns (I3, residue of gamma, ln|gamma|, branch).

    I3 = (1/gamma) I1 I2 and I3 is primitive but not necessarily reduced.
    """
    d = I1.d
    if I1.Q <= PLAIN_PRODUCT_MAX_Q or I2.Q <= PLAIN_PRODUCT_MAX_Q:
        S, I3 = ideal_product_plain(I1, I2)
        return I3, reduce_rational(S), math.log(S), "plain"
    L = quartic_root(d)
    f1 = ideal_to_form(I1)
    if I1.Q == I2.Q and I1.P % I1.Q == I2.P % I2.Q:
        f3, g = nudupl(f1, L)
        branch = "nudupl"
    else:
        f3, g = nucomp(f1, ideal_to_form(I2), L)
        branch = "nucomp"
    if f3.disc != d:
        raise InvariantError(f"{branch} changed the discriminant for d={d}")
    return form_to_ideal(f3, d), g.residue(), g.log(d), branch
