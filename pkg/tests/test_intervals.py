import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from stirling_bounds import intervals as iv
from stirling_bounds.intervals import DOWN, UP, LogInterval, log_binomial, log_factorial


def contains(interval: LogInterval, n: int) -> bool:
    # endpoints are 128-bit; compare at a precision that does not round them
    with mp.workprec(400):
        return mpf(interval.lo) <= mp.log10(mpf(n)) <= mpf(interval.hi)


def test_directed_rounding_brackets():
    third_lo = iv.from_fraction(Fraction(1, 3), DOWN)
    third_hi = iv.from_fraction(Fraction(1, 3), UP)
    assert iv.to_fraction(third_lo) < Fraction(1, 3) < iv.to_fraction(third_hi)
    e_lo, e_hi = iv.exp(iv.from_int(1, DOWN), DOWN), iv.exp(iv.from_int(1, UP), UP)
    with mp.workprec(300):
        assert mpf(e_lo) < mp.e < mpf(e_hi)
        assert mpf(iv.ln10(DOWN)) < mp.log(10) < mpf(iv.ln10(UP))


def test_log_interval_from_int():
    for n in (1, 2, 10, 120, 10**30 + 7, 3**200):
        li = LogInterval.from_int(n)
        assert contains(li, n)
        assert li.width < 1e-30
    with pytest.raises(ValueError):
        LogInterval.from_int(0)


def test_log_interval_arithmetic():
    a, b = LogInterval.from_int(6), LogInterval.from_int(4)
    assert contains(a * b, 24)
    assert (a / b).contains_log(LogInterval.from_fraction(Fraction(3, 2)))
    with pytest.raises(ValueError):
        LogInterval(iv.from_int(2, UP), iv.from_int(1, DOWN))


@pytest.mark.parametrize(
    "N, k", [(10, 3), (4950, 7), (10**6, 5000), (10**6, 999_000), (10**15, 100), (2**53 + 5, 1000), (7, 0), (7, 7)]
)
def test_log_binomial_contains_exact(N, k):
    li = log_binomial(N, k)
    assert contains(li, math.comb(N, k))
    assert li.width <= 1e-6


def test_log_binomial_small_example():
    assert log_binomial(10, 3).contains_int(120)
    assert log_binomial("4950", 7).contains_int(math.comb(4950, 7))


def test_log_binomial_rejects():
    with pytest.raises(ValueError):
        log_binomial(5, 6)
    with pytest.raises(ValueError):
        log_binomial(-1, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10**7), st.data())
def test_log_binomial_property(N, data):
    k = data.draw(st.integers(0, min(N, 3000)))
    assert contains(log_binomial(N, k), math.comb(N, k))


@settings(max_examples=15, deadline=None)
@given(st.integers(2**53, 2**80), st.integers(1, 400))
def test_log_binomial_big_N(N, k):
    assert contains(log_binomial(N, k), math.comb(N, k))


def test_log_binomial_large_scale():
    N = math.comb(10**12, 2)
    li = log_binomial(N, 2 * 10**6)
    assert li.width < 1e-6
    assert 35664465.4315447 < float(li.mid) < 35664465.4315448
    # Stirling-series cross-check of the magnitude
    k = 2 * 10**6
    with mp.workprec(200):
        approx = (mp.loggamma(N + 1) - mp.loggamma(k + 1) - mp.loggamma(N - k + 1)) / mp.log(10)
    assert abs(float(approx) - float(li.mid)) < 1e-5


def test_log_factorial():
    for k in (0, 1, 5, 170, 3000):
        assert contains(log_factorial(k), math.factorial(k))


def test_to_json_strings():
    js = LogInterval.from_int(120).to_json()
    assert set(js) == {"log10_lo", "log10_hi"}
    assert float(js["log10_lo"]) <= math.log10(120) <= float(js["log10_hi"])
