"""Analytic constants and empirical fits for the counting functions.

Model for Eisenstein discriminants::

    pi_E(x) ~ x/(3 pi^2) + c x^{5/6}

and for the prime subsequence::

    pi_{E,P}(x) ~ pi(x)/12 + b * L(x),   L(x) = int_2^x t^{-1/6} / log t dt
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate, special

from .sieve import prime_pi_many, small_primes

C1 = 1.0 / (3.0 * math.pi**2)
C56_STAR = -0.0386          # numeric input, not recomputed
C56_REFERENCE = -0.03761
MIN_PRIME_CUTOFF = 10**5
MAX_TAIL = 1e-5


# --- zeta values ---------------------------------------------------------

def _cvz_alternating(a, n: int) -> float:
    """sum_{k>=0} (-1)^k a(k) by Cohen-Villegas-Zagier acceleration, n terms."""
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b, c, s = -1.0, -d, 0.0
    for k in range(n):
        c = b - c
        s += c * a(k)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return s / d


def zeta_via_eta(s: float, tol: float = 1e-10, max_order: int = 80) -> tuple[float, int]:
    """zeta(s) for real s != 1 from the alternating eta series.

    The order grows until two consecutive orders agree to ``tol``;
    returns (value, order used).
    """
    if s == 1.0:
        raise ValueError("pole at s = 1")
    factor = 1.0 - 2.0 ** (1.0 - s)
    prev = None
    for n in range(4, max_order + 1):
        z = _cvz_alternating(lambda k: (k + 1.0) ** -s, n) / factor
        if prev is not None and abs(z - prev) < tol:
            return z, n
        prev = z
    raise ArithmeticError(f"eta acceleration did not settle for s={s}")


def zeta_direct(s: float, terms: int = 10**5) -> tuple[float, float, float]:
    """zeta(s), s > 1: partial sum plus Euler-Maclaurin tail.

    Returns (value, lower, upper) where the bracket uses the integral
    bounds int_{N+1}^inf < tail < int_N^inf.
    """
    if s <= 1.0:
        raise ValueError("direct sum needs s > 1")
    n = np.arange(1, terms + 1, dtype=np.float64)
    head = math.fsum((n[::-1]) ** -s)
    N = float(terms)
    lo = head + (N + 1.0) ** (1.0 - s) / (s - 1.0)
    hi = head + N ** (1.0 - s) / (s - 1.0)
    em = head + N ** (1.0 - s) / (s - 1.0) - 0.5 * N**-s + s * N ** (-s - 1.0) / 12.0
    return em, lo, hi


# --- Euler product -------------------------------------------------------

def K_2() -> float:
    return (1.0 - 2.0 ** (-2.0 / 3.0)) / (6.0 * (1.0 - 2.0 ** (-5.0 / 3.0)))


def K_p(p: np.ndarray | float) -> np.ndarray | float:
    r = np.asarray(p, dtype=np.float64) ** (-1.0 / 3.0)
    p = np.asarray(p, dtype=np.float64)
    return 1.0 - (1.0 + r) / p**2 * (1.0 - r) / ((1.0 - r**5) * (1.0 + 1.0 / p))


def K_product(cutoff: int) -> tuple[float, float]:
    """prod_{p <= cutoff} K_p and a bound T on -log of the missing tail.

    For p >= 3, 1 - K_p < 1/p^2, hence -log K_p < 1/(p^2 - 1), and the sum
    over odd n > cutoff telescopes to 1/(2(n0 - 1)), n0 the first such n.
    The full product lies in [P exp(-T), P].
    """
    primes = small_primes(cutoff)
    odd = primes[primes > 2]
    log_p = math.log(K_2()) + math.fsum(np.log(K_p(odd)))
    n0 = cutoff + 1 if cutoff % 2 == 0 else cutoff + 2
    return math.exp(log_p), 1.0 / (2.0 * (n0 - 1))


@dataclass(frozen=True)
class ConstantReport:
    C1: float
    C56: float
    C56_tail: float        # |C56 - true value| bound from the Euler product tail
    C56_star: float
    K2: float
    K_product: float
    K_tail_log: float
    prime_cutoff: int
    zeta13: float
    zeta13_order: int
    zeta53: float
    zeta53_lower: float
    zeta53_upper: float
    gamma23: float

    @property
    def lower_slope(self) -> float:
        return self.C56 - 2.0 * self.C56_star

    def text(self) -> str:
        return "\n".join([
            f"C1            = {self.C1:.15f}   (1/(3 pi^2))",
            f"zeta(1/3)     = {self.zeta13:.12f}   (eta/CVZ order {self.zeta13_order})",
            f"zeta(5/3)     = {self.zeta53:.12f}   in [{self.zeta53_lower:.12f}, {self.zeta53_upper:.12f}]",
            f"Gamma(2/3)    = {self.gamma23:.12f}",
            f"K_2           = {self.K2:.12f}",
            f"prod_p K_p    = {self.K_product:.12f}   (p <= {self.prime_cutoff}, -log tail <= {self.K_tail_log:.2e})",
            f"C_5/6         = {self.C56:.8f} +- {self.C56_tail:.1e}",
            f"C*_5/6        = {self.C56_star}   (input)",
            f"C - 2C*       = {self.lower_slope:.6f}",
        ])

    def json(self) -> str:
        return json.dumps({"record": "constants", **asdict(self)}, sort_keys=True)


def compute_C56(prime_cutoff: int = 10**6) -> ConstantReport:
    if prime_cutoff < MIN_PRIME_CUTOFF:
        raise ValueError(f"prime cutoff must be >= {MIN_PRIME_CUTOFF}")
    prod, tail = K_product(prime_cutoff)
    if tail > MAX_TAIL:
        raise ValueError(f"Euler product tail {tail:.2e} exceeds {MAX_TAIL}; raise the cutoff")
    z13, order = zeta_via_eta(1.0 / 3.0)
    z53, z53lo, z53hi = zeta_direct(5.0 / 3.0)
    g23 = math.gamma(2.0 / 3.0)
    pref = 4.0 ** (11.0 / 6.0) * z13 / (5.0 * g23**3 * z53)
    c56 = pref * prod
    return ConstantReport(
        C1=C1,
        C56=c56,
        C56_tail=abs(c56) * -math.expm1(-tail),
        C56_star=C56_STAR,
        K2=K_2(),
        K_product=prod,
        K_tail_log=tail,
        prime_cutoff=prime_cutoff,
        zeta13=z13,
        zeta13_order=order,
        zeta53=z53,
        zeta53_lower=z53lo,
        zeta53_upper=z53hi,
        gamma23=g23,
    )


# --- fits ----------------------------------------------------------------

class FitError(ValueError):
    pass


def _checked(rows: Iterable[Sequence[float]], min_rows: int = 3, decades: float = 2.0) -> np.ndarray:
    arr = np.array(sorted(tuple(r) for r in rows), dtype=np.float64)
    if arr.ndim != 2 or len(arr) < min_rows:
        raise FitError(f"need at least {min_rows} checkpoints, got {len(arr)}")
    x = arr[:, 0]
    if x[0] <= 0 or math.log10(x[-1] / x[0]) < decades - 1e-12:
        raise FitError(f"checkpoints must span at least {decades:g} decades")
    return arr


def _lsq(u: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """One-parameter least squares y ~ c u (no intercept); (c, residual norm)."""
    c = float(np.dot(u, y) / np.dot(u, u))
    return c, float(np.linalg.norm(y - c * u))


@dataclass(frozen=True)
class FitReport:
    c: float
    residual: float
    x_min: float
    x_max: float
    rows: int
    prob_coefficient: float     # a in P(d in E | d in D) ~ 1/3 - a/d^{1/6}
    prime_b: float | None = None
    prime_residual: float | None = None
    prime_prob_coefficient: float | None = None

    def text(self) -> str:
        lines = [
            f"range         = [{self.x_min:.0f}, {self.x_max:.0f}] ({self.rows} checkpoints)",
            f"c             = {self.c:.6f}   pi_E ~ x/(3 pi^2) + c x^(5/6)",
            f"residual      = {self.residual:.3f}",
            f"probability   = 1/3 - {self.prob_coefficient:.4f}/d^(1/6)",
        ]
        if self.prime_b is not None:
            lines += [
                f"prime b       = {self.prime_b:.6f}   pi_EP ~ pi(x)/12 + b L(x)",
                f"prime resid   = {self.prime_residual:.3f}",
                f"prime prob    = 1/3 - {self.prime_prob_coefficient:.4f}/p^(1/6)",
            ]
        return "\n".join(lines)

    def json(self) -> str:
        return json.dumps({"record": "fit", **asdict(self)}, sort_keys=True)


def prob_from_c(c: float) -> float:
    """a with int_0^x (1/3 - a t^{-1/6}) dt / pi^2 = x/(3 pi^2) + c x^{5/6}."""
    return -c * 5.0 * math.pi**2 / 6.0


def c_from_prob(a: float) -> float:
    return -a * 6.0 / (5.0 * math.pi**2)


def fit_secondary(checkpoints: Iterable[Sequence[float]]) -> FitReport:
    """Fit c from rows (x, pi_E) or checkpoint rows (x, pi_D, pi_E, ...)."""
    arr = _checked(checkpoints)
    x = arr[:, 0]
    pe = arr[:, 2] if arr.shape[1] >= 3 else arr[:, 1]
    c, res = _lsq(x ** (5.0 / 6.0), pe - C1 * x)
    return FitReport(c, res, float(x[0]), float(x[-1]), len(x), prob_from_c(c))


def L_integral(x: float) -> float:
    """int_2^x t^{-1/6}/log t dt by adaptive quadrature in u = log t."""
    if x <= 2:
        return 0.0
    val, _ = integrate.quad(
        lambda u: math.exp(5.0 * u / 6.0) / u, math.log(2.0), math.log(x),
        epsabs=0.0, epsrel=1e-13, limit=200,
    )
    return val


def L_integral_ei(x: float) -> float:
    """Same integral via the exponential integral, Ei(5/6 log x) - Ei(5/6 log 2)."""
    if x <= 2:
        return 0.0
    return float(special.expi(5.0 / 6.0 * math.log(x)) - special.expi(5.0 / 6.0 * math.log(2.0)))


def fit_primes(
    checkpoints: Iterable[Sequence[float]],
    prime_counts: dict[int, int] | None = None,
) -> tuple[float, float]:
    """Coefficient b and residual norm from rows (x, pi_EP) or full checkpoints.

    pi(x) comes from ``prime_counts`` when given, else from a sieve.
    """
    arr = _checked(checkpoints)
    x = arr[:, 0]
    pep = arr[:, 3] if arr.shape[1] >= 4 else arr[:, 1]
    if prime_counts is None:
        # checkpoint rows count d < x; pi(x - 1) matches
        pis = np.array(prime_pi_many([int(v) - 1 for v in x]), dtype=np.float64)
    else:
        pis = np.array([prime_counts[int(v)] for v in x], dtype=np.float64)
    L = np.array([L_integral(v) for v in x])
    return _lsq(L, pep - pis / 12.0)


def prime_prob_from_b(b: float) -> float:
    """a_p in P(p in E | p in D, prime) ~ 1/3 - a_p/p^{1/6}, using density 1/(4 log t)."""
    return -4.0 * b


def fit_all(
    checkpoints: Iterable[Sequence[float]],
    primes: bool = True,
    prime_counts: dict[int, int] | None = None,
) -> FitReport:
    rows = list(checkpoints)
    base = fit_secondary(rows)
    if not primes:
        return base
    b, res = fit_primes(rows, prime_counts)
    return FitReport(
        base.c, base.residual, base.x_min, base.x_max, base.rows, base.prob_coefficient,
        b, res, prime_prob_from_b(b),
    )


# --- bounds ---------------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    x: float
    lower: float
    upper: float
    delta_upper: float
    measured: int | None = None

    @property
    def within(self) -> bool | None:
        if self.measured is None:
            return None
        return self.lower <= self.measured <= self.upper


def bounds(x: float, C56: float | None = None, measured: int | None = None) -> Bounds:
    """Leading-order bounds on pi_E(x), error terms O(x^{2/3+eps}) dropped.

    lower = (C - 2C*) x^{5/6}
    upper = x/(2 pi^2) + (C + C*) x^{5/6}, i.e. pi_c(x) plus the Delta bound
    delta_upper = x/(6 pi^2) + C* x^{5/6}, the bound on Delta(x) itself
    """
    if C56 is None:
        C56 = compute_C56().C56
    x56 = x ** (5.0 / 6.0)
    return Bounds(
        x,
        (C56 - 2.0 * C56_STAR) * x56,
        x / (2.0 * math.pi**2) + (C56 + C56_STAR) * x56,
        x / (6.0 * math.pi**2) + C56_STAR * x56,
        measured,
    )


def bounds_report(x: float, C56: float | None = None, measured: int | None = None) -> str:
    b = bounds(x, C56, measured)
    lines = [
        f"x             = {x:.0f}",
        f"lower bound   = {b.lower:.1f}",
        f"upper bound   = {b.upper:.1f}",
        f"Delta upper   = {b.delta_upper:.1f}   (slope 1/(6 pi^2) = {1 / (6 * math.pi**2):.6f})",
    ]
    if measured is not None:
        lines.append(f"measured pi_E = {measured}   ({'within' if b.within else 'OUTSIDE'} bounds)")
    return "\n".join(lines)
