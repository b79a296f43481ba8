import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stirling_bounds import asymptotics as asy
from stirling_bounds import bounds as bd
from stirling_bounds.exact import stirling1_unsigned_exact, stirling2_exact


@given(st.floats(1e-3, 1e8))
def test_lgamma_matches_math(x):
    assert math.isclose(asy.lgamma(x), math.lgamma(x), rel_tol=1e-13, abs_tol=1e-13)


def test_lgamma_remainder_small():
    assert asy.lgamma_remainder_bound(10.0) < 1e-15
    with pytest.raises(ValueError):
        asy.lgamma(0.0)


# --- Moser-Wyman --------------------------------------------------------------


def test_moser_wyman_first_order():
    for n in range(3, 30):
        e = asy.moser_wyman_s2(n, n - 1, s=0)
        assert e.inputs["n"] == n
        assert math.isclose(e.log10_value, math.log10(n * (n - 1) / 2), rel_tol=1e-12)


def test_moser_wyman_examples():
    e = asy.moser_wyman_s2(50, 43, 3)
    assert e.valid and e.contains(stirling2_exact(50, 43))
    bad = asy.moser_wyman_s2(100, 50, 3)
    assert not bad.valid and bad.window is None
    with pytest.raises(ValueError):
        bad.contains(1)
    with pytest.raises(ValueError):
        asy.moser_wyman_s2(10, 10)
    with pytest.raises(ValueError):
        asy.moser_wyman_s2(10, 5, s=4)


@pytest.mark.parametrize("s", [0, 1, 2, 3])
def test_moser_wyman_window_contains_exact(s):
    checked = 0
    for n in range(2, 61):
        for m in range(1, n):
            e = asy.moser_wyman_s2(n, m, s)
            assert e.valid == (2 * (n - m) ** 2 < 5 * m)
            if e.valid:
                checked += 1
                assert e.e_s_bound >= 0
                assert e.contains(stirling2_exact(n, m)), (n, m, s)
    assert checked > 300


def test_moser_wyman_verbatim_q_fails():
    misses = sum(
        not asy.moser_wyman_s2(n, m, 3, q_convention=asy.Q_VERBATIM).contains(stirling2_exact(n, m))
        for n in range(5, 40)
        for m in range(1, n)
        if 2 * (n - m) ** 2 < 5 * m and n - m >= 2
    )
    assert misses > 0


# --- implicit R -------------------------------------------------------------------


def test_implicit_R_second():
    R, H, e = asy.implicit_R_second(2000, 1000)
    assert abs(R / -math.expm1(-R) - 2) <= 1e-12
    assert H > 0
    R, _, _ = asy.implicit_R_second(100001, 100000)
    assert 0 < R < 1e-4
    _, _, e = asy.implicit_R_second(2000, 1900)
    assert abs(e.ratio_to(stirling2_exact(2000, 1900)) - 1) < 0.01
    for n, m in [(5, 5), (5, 0), (5, 7)]:
        with pytest.raises(ValueError):
            asy.implicit_R_second(n, m)


def test_implicit_R_first():
    R, H, e = asy.implicit_R_first(1000, 500)
    assert abs(e.ratio_to(stirling1_unsigned_exact(1000, 500)) - 1) < 0.01
    R, H, e = asy.implicit_R_first(300, 299)
    assert e.extra["residual"] <= 1e-12 and H > 0
    for n, m in [(5, 5), (5, 1), (5, 9)]:
        with pytest.raises(ValueError):
            asy.implicit_R_first(n, m)


def test_implicit_R_residual_grid():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(3, 10**4)
        m = rng.randint(2, n - 1)
        assert asy.implicit_R_second(n, m)[2].extra["residual"] <= 1e-12
        assert asy.implicit_R_first(n, m)[2].extra["residual"] <= 1e-12


# --- other regimes --------------------------------------------------------------


def test_small_m_first_kind():
    assert math.isclose(asy.small_m_first_kind(50, 1).log10_value, math.log10(math.factorial(49)), rel_tol=1e-13)
    assert abs(asy.small_m_first_kind(10**4, 3).ratio_to(stirling1_unsigned_exact(10**4, 3)) - 1) < 0.10
    est = asy.small_m_first_kind(10**6, 2).log10_value
    assert abs(10 ** (est - asy.log10_stirling1_m2(10**6)) - 1) < 0.05


def test_harmonic_closed_form():
    for n in range(2, 200):
        assert math.isclose(asy.log10_stirling1_m2(n), math.log10(stirling1_unsigned_exact(n, 2)), rel_tol=1e-12)


def test_sachkov():
    assert abs(asy.sachkov_s2(50, 1).log10_value) < 1e-12
    assert abs(asy.sachkov_s2(40, 5).ratio_to(stirling2_exact(40, 5)) - 1) < 0.15
    e = asy.sachkov_s2(100, 3)
    assert math.isfinite(e.log10_value) and e.valid
    assert not asy.sachkov_s2(100, 40).valid


def test_prop24_matches_bound_midpoint():
    for n, k in [(12, 3), (30, 5), (200, 14)]:
        r = bd.theorem4_bound(n, k)
        for kind, rate in (("first", r.mu), ("second", 2 * r.mu)):
            e = asy.prop24_formula(n, n - k, kind)
            direct = math.log10(math.comb(math.comb(n, 2), k)) - float(rate) / math.log(10)
            assert math.isclose(e.log10_value, direct, rel_tol=1e-12)


def test_prop24_inside_certified_enclosure():
    r = bd.theorem4_bound(10**4, 100, mode=bd.LOG)
    up = float(r.enclosure_first.log10_upper and __import__("mpmath").mpf(r.enclosure_first.log10_upper))
    lo = float(__import__("mpmath").mpf(r.enclosure_first.log10_lower))
    assert lo <= asy.prop24_formula(10**4, 10**4 - 100, "first").log10_value <= up


def test_prop24_relative_error_small_case():
    e = asy.prop24_formula(10, 8, "second")
    exact = stirling2_exact(10, 8)
    C = math.comb(45, 2)
    d2 = bd.theorem4_bound(10, 2).cap2
    assert abs(10**e.log10_value - exact) / C <= float(d2)


def test_param_formula():
    e = asy.param_formula(10**6, 0.5, 1.0, "first")
    assert abs(e.log10_value - e.extra["closed_log10"]) < 1e-2
    assert e.extra["k"] == 1000 and not e.extra["rounded"]
    # a = 0: binomial with the e^{-2k^2/(3n)} correction
    n, k = 500, 4
    e0 = asy.param_formula(n, 0.0, k, "first")
    target = math.log10(math.comb(math.comb(n, 2), k)) - (2 / 3) * k * k / n / math.log(10)
    assert math.isclose(e0.log10_value, target, rel_tol=1e-12)
    # the kinds differ by exactly the extra e^{-(2/3) t^2 n^{2a-1}}
    for n, a in [(400, 0.25), (10**5, 0.5)]:
        f, s = asy.param_formula(n, a, 1.0, "first"), asy.param_formula(n, a, 1.0, "second")
        t = f.extra["t_eff"]
        gap = (2 / 3) * t * t * n ** (2 * a - 1) / math.log(10)
        assert math.isclose(f.log10_value - s.log10_value, gap, rel_tol=1e-9)


@pytest.mark.parametrize("kind, fn", [("first", stirling1_unsigned_exact), ("second", stirling2_exact)])
def test_param_ratio_moves_to_one(kind, fn):
    for a in (0.25, 0.5):
        ratios = []
        for n in (50, 100, 200, 400):
            e = asy.param_formula(n, a, 1.0, kind)
            ratios.append(abs(1 / e.ratio_to(fn(n, n - e.extra["k"])) - 1))
        assert all(x > y for x, y in zip(ratios, ratios[1:])), ratios


def test_louchard():
    x, y = 10.0, 1000.0
    diff = asy.louchard_T(x, y, "first") - asy.louchard_T(x, y, "second")
    assert math.isclose(diff, x * (2 / (3 * y) + 3 / (9 * y * y)), rel_tol=1e-9)
    big = asy.louchard_T(7.0, 1e15, "first")
    assert math.isclose(big, 7.0 * (1 - math.log(2) + 2 * math.log(1e15) + math.log(7.0)), rel_tol=1e-12)
    with pytest.raises(ValueError):
        asy.louchard_T(-1.0, 2.0, "first")


def test_louchard_against_param_formula():
    # T1 equals the closed-form exponent minus (2/9) n^{3a-2}
    for n, a in [(10**6, 0.75), (10**5, 0.6)]:
        x, y = asy.louchard_xy(n, a)
        closed = x * ((2 - a) * math.log(n) + 1 - math.log(2)) - (2 / 3) * n ** (2 * a - 1)
        assert math.isclose(asy.louchard_T(x, y, "first"), closed - (2 / 9) * n ** (3 * a - 2), rel_tol=1e-12)
    n, a = 10**5, 0.6  # n^a = 1000 exactly, so no rounding of k
    e = asy.louchard_estimate(n, a, "first")
    p = asy.param_formula(n, a, 1.0, "first")
    assert abs(e.log10_value - p.extra["closed_log10"]) < 0.1
