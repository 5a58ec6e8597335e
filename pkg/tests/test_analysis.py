import math
import random

import pytest

from eisenstein import analysis as an


def test_C1_closed_form():
    assert abs(an.C1 - 1 / (3 * math.pi**2)) < 1e-12
    assert an.C1 == pytest.approx(0.0337737, abs=1e-7)


def test_K2():
    assert an.K_2() == pytest.approx(0.09003, abs=5e-6)
    # the unsimplified form agrees with the simplified one
    r = 2 ** (-1 / 3)
    assert an.K_2() == pytest.approx((1 + r) / 4 * (1 - r) / ((1 - 2 ** (-5 / 3)) * 1.5), rel=1e-14)


def test_zeta_values_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    z13, order = an.zeta_via_eta(1 / 3)
    assert abs(z13 - float(mpmath.zeta(mpmath.mpf(1) / 3))) < 1e-9
    assert order >= 5
    z53, lo, hi = an.zeta_direct(5 / 3)
    ref = float(mpmath.zeta(mpmath.mpf(5) / 3))
    assert lo <= ref <= hi
    assert abs(z53 - ref) < 1e-12


def test_zeta_direct_bracket_tightens():
    _, lo1, hi1 = an.zeta_direct(5 / 3, 10**3)
    _, lo2, hi2 = an.zeta_direct(5 / 3, 10**5)
    assert lo1 <= lo2 <= hi2 <= hi1


def test_euler_product_monotone_with_tail():
    p1, t1 = an.K_product(10**5)
    p2, t2 = an.K_product(10**6)
    assert p2 <= p1
    assert p1 * math.exp(-t1) <= p2
    assert t2 < t1


def test_C56():
    rep = an.compute_C56(10**5)
    assert abs(rep.C56 - (-0.03761)) < 5e-5
    assert rep.C56_tail < 1e-5
    assert rep.C56_star == -0.0386
    assert rep.lower_slope == pytest.approx(0.0396, abs=5e-4)
    assert "C_5/6" in rep.text() and '"record": "constants"' in rep.json()


def test_C56_cutoff_guard():
    with pytest.raises(ValueError):
        an.compute_C56(10**4)


def model(xs, c):
    return [(x, 0, x * an.C1 + c * x ** (5 / 6), 0) for x in xs]


def test_fit_round_trip_and_order_invariance():
    xs = [10 ** (k / 4) for k in range(16, 45)]
    rows = model(xs, -0.024)
    assert abs(an.fit_secondary(rows).c + 0.024) < 1e-6
    random.Random(3).shuffle(rows)
    assert an.fit_secondary(rows).c == an.fit_secondary(sorted(rows)).c


def test_fit_subset_changes_continuously():
    rng = random.Random(4)
    xs = [10 ** (k / 4) for k in range(16, 45)]
    rows = [(x, 0, x * an.C1 - 0.024 * x ** (5 / 6) + rng.gauss(0, 50), 0) for x in xs]
    full = an.fit_secondary(rows).c
    sub = an.fit_secondary(rows[:-1]).c
    assert abs(full - sub) < 1e-3


@pytest.mark.parametrize("rows", [
    [(1e6, 0, 1, 0), (1e7, 0, 2, 0)],
    [(1e6, 0, 1, 0), (2e6, 0, 2, 0), (5e6, 0, 3, 0)],
])
def test_fit_rejects_degenerate(rows):
    with pytest.raises(an.FitError):
        an.fit_secondary(rows)


def test_probability_model_identity():
    assert an.prob_from_c(-0.024) == pytest.approx(0.024 * 5 * math.pi**2 / 6)
    assert an.c_from_prob(an.prob_from_c(-0.0247)) == pytest.approx(-0.0247)
    # the quoted 0.201 gives 0.0244387..., quoted truncated as 0.02443
    assert -an.c_from_prob(0.201) == pytest.approx(0.02443, abs=1e-5)


def test_L_integral_two_methods():
    assert abs(an.L_integral(10) - an.L_integral_ei(10)) < 1e-8
    for x in (1e4, 1e8, 1e11):
        assert an.L_integral(x) == pytest.approx(an.L_integral_ei(x), rel=1e-10)
    assert an.L_integral(2) == 0.0


def test_fit_primes_round_trip():
    xs = [10**k for k in range(3, 8)]
    pis = {x: int(x / math.log(x)) for x in xs}
    rows = [(x, 0, 0, pis[x] / 12 - 0.037 * an.L_integral(x)) for x in xs]
    b, res = an.fit_primes(rows, pis)
    assert abs(b + 0.037) < 1e-6
    assert an.prime_prob_from_b(-0.037) == pytest.approx(0.148)


def test_fit_primes_uses_sieve_counts():
    xs = [10**3, 10**4, 10**5]
    from eisenstein.sieve import prime_pi

    rows = [(x, 0, 0, prime_pi(x - 1) / 12 - 0.03 * an.L_integral(x)) for x in xs]
    assert an.fit_primes(rows)[0] == pytest.approx(-0.03, abs=1e-9)


def test_bounds():
    b = an.bounds(1e6, C56=-0.03761, measured=31044)
    assert b.lower == pytest.approx((-0.03761 + 2 * 0.0386) * 1e5)
    assert b.within
    assert b.delta_upper == pytest.approx(1e6 / (6 * math.pi**2) - 0.0386 * 1e5)
    assert 1 / (6 * math.pi**2) == pytest.approx(0.016887, abs=1e-6)
    text = an.bounds_report(1e6, C56=-0.03761, measured=31044)
    assert "within" in text
