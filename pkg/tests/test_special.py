"""Bessel and log-gamma accuracy against independent oracles."""

import math

import mpmath as mp
import numpy as np
import pytest

from krylovchain.special import bessel_j, bessel_j_array, log_gamma


def bessel_series_exact(n, x, terms=4000):
    """Power-series oracle: J_n(x) = sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!).

    Summed in mpmath with enough working digits to absorb the ~e^|x|
    cancellation of the alternating series, so the result is exact to
    double precision.
    """
    digits = 40 + int(0.46 * abs(x))
    with mp.workdps(digits):
        half = mp.mpf(x) / 2
        term = half ** n / mp.factorial(n)
        acc = mp.mpf(0)
        for k in range(terms):
            acc += term if k % 2 == 0 else -term
            term = term * half * half / ((k + 1) * (n + k + 1))
            if term != 0 and abs(term) < mp.mpf(10) ** (-digits) and half * half < (k + 1) * (n + k + 1):
                acc += term if (k + 1) % 2 == 0 else -term
                break
        return float(acc)


@pytest.mark.parametrize(
    "n,x",
    [(0, 0.3), (0, 1.0), (0, 2.404826), (1, 1.0), (3, 1.0), (2, 7.5), (10, 4.2),
     (5, 30.0), (0, 50.0), (25, 25.0), (40, 12.0)],
)
def test_bessel_matches_series_oracle(n, x):
    assert bessel_j(n, x) == pytest.approx(bessel_series_exact(n, x), abs=1e-13)


def test_bessel_trivial_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    # first zero of J_0, located by bisection on the series oracle
    lo, hi = 2.0, 3.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bessel_series_exact(0, mid) > 0:
            lo = mid
        else:
            hi = mid
    assert abs(lo - 2.404826) < 1e-5
    assert abs(bessel_j(0, 2.404826)) < 1e-6


def test_bessel_negative_argument_parity():
    for n in (0, 1, 4, 7):
        assert bessel_j(n, -3.7) == pytest.approx((-1) ** n * bessel_j(n, 3.7), abs=1e-15)


def test_bessel_recurrence_property():
    # J_{n-1}(x) + J_{n+1}(x) = (2n/x) J_n(x)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(40):
        x = float(rng.uniform(0.05, 100.0))
        js = bessel_j_array(51, x)
        for n in range(1, 50):
            lhs = js[n - 1] + js[n + 1]
            rhs = 2.0 * n / x * js[n]
            worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-10


def test_bessel_array_consistent_with_scalar():
    js = bessel_j_array(12, 9.25)
    for n in range(13):
        assert js[n] == pytest.approx(bessel_j(n, 9.25), abs=5e-16)


def test_bessel_accuracy_contract_far_ranges():
    # |x| <= 500, n <= 1000 at absolute error <= 1e-12
    for n, x in [(800, 20.0), (1000, 500.0), (3, 480.0), (120, 130.0)]:
        assert bessel_j(n, x) == pytest.approx(bessel_series_exact(n, x, terms=2000), abs=1e-12)


def test_bessel_sum_rule():
    # J_0 + 2 sum J_2k = 1 should be reproduced far beyond the normalization order
    for x in (0.7, 13.0, 211.0):
        js = bessel_j_array(int(x) + 160, x)
        total = js[0] + 2.0 * np.sum(js[2::2])
        assert total == pytest.approx(1.0, abs=1e-12)


def test_log_gamma_matches_factorials():
    for n in range(1, 160):
        assert log_gamma(n + 1.0) == pytest.approx(
            math.log(math.factorial(n)), rel=1e-13
        )
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-13)
    with pytest.raises(ValueError):
        log_gamma(0.0)
