"""Reference asymptotic formulas for Stirling numbers, evaluated in log space.

None of these carry certified error bars except :func:`moser_wyman_s2`,
whose geometric remainder bound is evaluated in exact rationals. The
others are first-order estimates used for cross-checks against the exact
oracles and the certified enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import intervals as iv

EULER_GAMMA = 0.5772156649015329
LN10 = math.log(10.0)
HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

FIRST = "first"
SECOND = "second"
KINDS = (FIRST, SECOND)

Q_M = "m"  # q = 2/m
Q_VERBATIM = "verbatim"  # q = 2/(n - m)
Q_CONVENTIONS = (Q_M, Q_VERBATIM)

MAX_ITER = 200


@dataclass
class AsymptoticEstimate:
    """A log10 estimate plus whatever diagnostics its regime produces."""

    regime: str
    inputs: dict
    log10_value: float
    valid: bool = True
    s: Optional[int] = None
    e_s_bound: Optional[Fraction] = None
    extra: dict = field(default_factory=dict)
    window: Optional[tuple[Fraction, Fraction]] = None

    def contains(self, x: int) -> bool:
        """Exact containment in the guaranteed window (windowed estimates only)."""
        if self.window is None:
            raise ValueError(f"regime {self.regime!r} has no guaranteed window")
        lo, hi = self.window
        return lo <= x <= hi

    def ratio_to(self, exact: int) -> float:
        """estimate / exact, computed through logs."""
        return 10.0 ** (self.log10_value - math.log10(exact))

    def to_json(self) -> dict:
        out = {
            "regime": self.regime,
            "inputs": {k: str(v) for k, v in self.inputs.items()},
            "log10_value": repr(float(self.log10_value)),
            "valid": self.valid,
        }
        if self.s is not None:
            out["s"] = self.s
        if self.e_s_bound is not None:
            out["E_s_bound"] = repr(float(self.e_s_bound))
        if self.window is not None:
            lo, hi = self.window
            out["window_log10_lo"] = repr(_log10_pos(lo)) if lo > 0 else None
            out["window_log10_hi"] = repr(_log10_pos(hi))
        for k, v in self.extra.items():
            out[k] = repr(float(v)) if isinstance(v, (float, Fraction, np.floating)) else v
        return out


def _log10_pos(q) -> float:
    q = Fraction(q)
    return math.log10(q.numerator) - math.log10(q.denominator)


# ---------------------------------------------------------------------------
# log-gamma


_BERNOULLI = (
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
)
_STIRLING_COEFFS = tuple(float(b / ((2 * j + 2) * (2 * j + 1))) for j, b in enumerate(_BERNOULLI))
_SERIES_MIN = 10.0


def lgamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Stirling's series with seven correction terms for x >= 10; the first
    omitted term bounds the remainder by below 1e-16 there. Smaller
    arguments are shifted up with Gamma(x) = Gamma(x + j) / (x (x+1) ... ).
    """
    if not x > 0:
        raise ValueError(f"lgamma needs x > 0, got {x}")
    shift = 0.0
    while x < _SERIES_MIN:
        shift += math.log(x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    p = inv
    for c in _STIRLING_COEFFS[:7]:
        corr += c * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + HALF_LN_2PI + corr - shift


def lgamma_remainder_bound(x: float) -> float:
    """Bound on the truncation error of the series at ``x`` (first omitted term)."""
    return abs(_STIRLING_COEFFS[7]) / x**15


def log10_factorial(n: int) -> float:
    return lgamma(n + 1.0) / LN10


# ---------------------------------------------------------------------------
# safeguarded root finding


def _solve_increasing(f: Callable[[float], float], df: Callable[[float], float], lo: float, hi: float,
                      rtol: float = 1e-13) -> tuple[float, int]:
    """Root of an increasing ``f`` on (lo, hi) with f(lo) < 0 < f(hi).

    Newton steps are taken when they stay in the bracket; otherwise bisect.
    """
    x = 0.5 * (lo + hi)
    for it in range(1, MAX_ITER + 1):
        fx = f(x)
        if fx == 0.0:
            return x, it
        if fx < 0:
            lo = x
        else:
            hi = x
        d = df(x)
        step_ok = False
        if d > 0:
            nx = x - fx / d
            if lo < nx < hi:
                step_ok = True
        if not step_ok:
            nx = 0.5 * (lo + hi)
        # polish a little past rtol so the residual sits at rounding level
        tol = 1e-2 * rtol * abs(nx)
        if abs(nx - x) <= tol or hi - lo <= tol:
            return nx, it
        x = nx
    return x, MAX_ITER


# ---------------------------------------------------------------------------
# second kind


def _falling(r: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= r - i
    return out


def moser_wyman_s2(n: int, m: int, s: int = 3, q_convention: str = Q_M) -> AsymptoticEstimate:
    """C(n,m) q^{-(n-m)} (sum_{j<=s} A_j q^j), with the hard window +/- E_s.

    Everything is exact rational; ``window`` is
    C(n,m) q^{-(n-m)} [sum - E_s, sum + E_s] with
    E_s = rho^{s+1}/(1 - rho), rho = 2 (n-m)^2 / (5m). When rho >= 1 the
    bound is void, ``valid`` is False and the window is None.
    """
    if not 0 < m < n:
        raise ValueError(f"need 0 < m < n, got n={n}, m={m}")
    if not 0 <= s <= 3:
        raise ValueError(f"only s in 0..3 is available, got {s}")
    if q_convention not in Q_CONVENTIONS:
        raise ValueError(f"unknown q convention {q_convention!r}")
    r = n - m
    q = Fraction(2, m) if q_convention == Q_M else Fraction(2, r)
    terms = [
        Fraction(1),
        Fraction(_falling(r, 2), 12),
        Fraction(_falling(r, 4), 288),
        Fraction(_falling(r, 6), 10368) - Fraction(_falling(r, 4), 1440),
    ]
    bracket = sum(a * q**j for j, a in enumerate(terms[: s + 1]))
    scale = math.comb(n, m) * (1 / q) ** r
    rho = Fraction(2 * r * r, 5 * m)
    valid = rho < 1
    e_s = rho ** (s + 1) / (1 - rho) if valid else None
    window = (scale * (bracket - e_s), scale * (bracket + e_s)) if valid else None
    value = scale * bracket
    return AsymptoticEstimate(
        regime="moser-wyman",
        inputs={"n": n, "m": m, "q_convention": q_convention},
        log10_value=_log10_pos(value) if value > 0 else float("-inf"),
        valid=valid,
        s=s,
        e_s_bound=e_s,
        window=window,
        extra={"q": float(q), "rho": float(rho), "bracket": float(bracket)},
    )


def _ratio_second(R: float) -> float:
    """R / (1 - e^{-R}), continuous at 0."""
    if R == 0.0:
        return 1.0
    return R / -math.expm1(-R)


def implicit_R_second(n: int, m: int) -> tuple[float, float, AsymptoticEstimate]:
    """Solve R/(1 - e^{-R}) = n/m and evaluate the leading-term estimate of S(n, m)."""
    if not 0 < m < n:
        raise ValueError(f"need 0 < m < n, got n={n}, m={m}")
    c = n / m

    def f(R: float) -> float:
        return _ratio_second(R) - c

    def df(R: float) -> float:
        em = -math.expm1(-R)
        return (em - R * math.exp(-R)) / (em * em)

    R, iters = _solve_increasing(f, df, 0.0, c + 1.0)
    if R > 1.0:
        # written in e^{-R} so that large R (small m) cannot overflow
        emr = math.exp(-R)
        ln_em1 = R + math.log1p(-emr)
        H = -math.expm1(math.log1p(R) - R) / (2.0 * math.expm1(-R) ** 2)
    else:
        em1 = math.expm1(R)
        # e^R - 1 - R without cancellation for small R
        tail = em1 - R if R > 1e-3 else R * R * (0.5 + R / 6 + R * R / 24 + R**3 / 120)
        H = math.exp(R) * tail / (2.0 * em1 * em1)
        ln_em1 = math.log(em1)
    ln_val = (
        lgamma(n + 1.0) + m * ln_em1 - math.log(2.0) - n * math.log(R)
        - lgamma(m + 1.0) - 0.5 * math.log(math.pi * m * R * H)
    )
    residual = abs(_ratio_second(R) - c) / c
    est = AsymptoticEstimate(
        regime="implicit-R-second",
        inputs={"n": n, "m": m},
        log10_value=ln_val / LN10,
        extra={"R": R, "H": H, "residual": residual, "iterations": iters},
    )
    return R, H, est


# ---------------------------------------------------------------------------
# first kind


def implicit_R_first(n: int, m: int) -> tuple[float, float, AsymptoticEstimate]:
    """Solve sum_{k<n} R/(R+k) = m and evaluate Gamma(n+R)/(R^m Gamma(R) sqrt(2 pi H)).

    m = 1 puts the root at R = 0 (the k = 0 term alone is 1), where the
    formula degenerates; it is rejected along with m >= n.
    """
    if not 2 <= m < n:
        raise ValueError(f"need 2 <= m < n, got n={n}, m={m}")
    ks = np.arange(n, dtype=np.float64)

    def F(R: float) -> float:
        return math.fsum((R / (R + ks)).tolist())

    def f(R: float) -> float:
        return F(R) - m

    def df(R: float) -> float:
        return math.fsum((ks / (R + ks) ** 2).tolist())

    hi = m * (n - 1) / (n - m) + 1.0
    R, iters = _solve_increasing(f, df, 0.0, hi)
    H = math.fsum((R * ks / (R + ks) ** 2).tolist())
    ln_val = lgamma(n + R) - m * math.log(R) - lgamma(R) - 0.5 * math.log(2.0 * math.pi * H)
    residual = abs(F(R) - m) / m
    est = AsymptoticEstimate(
        regime="implicit-R-first",
        inputs={"n": n, "m": m},
        log10_value=ln_val / LN10,
        extra={"R": R, "H": H, "residual": residual, "iterations": iters},
    )
    return R, H, est


def harmonic(n: int) -> float:
    """H_n = 1 + 1/2 + ... + 1/n."""
    if n < 1:
        return 0.0
    if n <= 10**7:
        return math.fsum((1.0 / np.arange(1, n + 1, dtype=np.float64)).tolist())
    x = float(n)
    return math.log(x) + EULER_GAMMA + 1 / (2 * x) - 1 / (12 * x * x)


def log10_stirling1_m2(n: int) -> float:
    """log10 |s(n, 2)| = log10((n-1)! H_{n-1})."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return lgamma(float(n)) / LN10 + math.log10(harmonic(n - 1))


def small_m_first_kind(n: int, m: int) -> AsymptoticEstimate:
    """(n-1)!/(m-1)! (ln n + gamma)^{m-1}."""
    if m < 1 or n < m:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    ln_val = lgamma(float(n)) - lgamma(float(m)) + (m - 1) * math.log(math.log(n) + EULER_GAMMA)
    return AsymptoticEstimate(regime="small-m-first", inputs={"n": n, "m": m}, log10_value=ln_val / LN10)


def sachkov_s2(n: int, m: int) -> AsymptoticEstimate:
    """m^n/m! exp[(n/m - m) e^{-n/m}]; flagged invalid outside m < n/ln n."""
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got n={n}, m={m}")
    ln_val = n * math.log(m) - lgamma(m + 1.0) + (n / m - m) * math.exp(-n / m)
    return AsymptoticEstimate(
        regime="sachkov", inputs={"n": n, "m": m}, log10_value=ln_val / LN10, valid=m < n / math.log(n)
    )


# ---------------------------------------------------------------------------
# explicit full-range formulas


def _rate_factor(kind: str) -> int:
    """Poisson rate multiple of mu: the first kind counts column attacks only."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    return 1 if kind == FIRST else 2


def _log10_binomial_mid(N: int, k: int) -> float:
    if N <= 10**6:
        return math.log10(math.comb(N, k))
    return float(iv.log_binomial(N, k).mid)


def prop24_formula(n: int, m: int, kind: str) -> AsymptoticEstimate:
    """log10 of C(C(n,2), n-m) e^{-c mu}, c = 1 (first kind) or 2 (second kind)."""
    if not 0 <= m < n or n < 3:
        raise ValueError(f"need n >= 3 and 0 <= m < n, got n={n}, m={m}")
    c = _rate_factor(kind)
    k = n - m
    N = math.comb(n, 2)
    mu = Fraction(math.comb(k, 2) * math.comb(n, 3), math.comb(N, 2))
    val = _log10_binomial_mid(N, k) - c * float(mu) / LN10
    return AsymptoticEstimate(
        regime="poisson-full-range", inputs={"n": n, "m": m, "kind": kind}, log10_value=val, extra={"mu": mu}
    )


def param_formula(n: int, a: float, t: float, kind: str) -> AsymptoticEstimate:
    """Binomial and closed forms at m = n - t n^a.

    The binomial argument is k = round(t n^a) and both forms are evaluated
    at the effective t = k / n^a so they describe the same m.
    ``log10_value`` is the binomial form; ``closed_log10`` the closed form.
    """
    if not 0 <= a < 1 or t <= 0:
        raise ValueError(f"need 0 <= a < 1 and t > 0, got a={a}, t={t}")
    c = _rate_factor(kind)
    x = n**a
    k = int(round(t * x))
    if k < 1 or k > n:
        raise ValueError(f"t n^a = {t * x} does not give 1 <= k <= n")
    t_eff = k / x
    N = math.comb(n, 2)
    decay = c * (2.0 / 3.0) * t_eff * t_eff * n ** (2 * a - 1)
    binom_form = _log10_binomial_mid(N, k) - decay / LN10
    ln_closed = (
        -0.5 * math.log(2 * math.pi * t_eff**5 * x)
        + t_eff * x * ((2 - a) * math.log(n) + 1 - math.log(2))
        - decay
    )
    return AsymptoticEstimate(
        regime="poisson-parametric",
        inputs={"n": n, "a": a, "t": t, "kind": kind},
        log10_value=binom_form,
        extra={"k": k, "t_eff": t_eff, "rounded": k != t * x, "closed_log10": ln_closed / LN10},
    )


def louchard_xy(n: float, a: float) -> tuple[float, float]:
    return n**a, n ** (1 - a)


def louchard_T(x: float, y: float, kind: str) -> float:
    """T1 (first kind) or T1' (second kind), truncated after the 1/y^2 term."""
    if x <= 0 or y <= 0:
        raise ValueError("need x, y > 0")
    if kind == FIRST:
        c1, c2 = 2.0 / 3.0, 2.0 / 9.0
    elif kind == SECOND:
        c1, c2 = 4.0 / 3.0, 5.0 / 9.0
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return x * (1 - math.log(2) + 2 * math.log(y) + math.log(x) - c1 / y - c2 / (y * y))


def louchard_estimate(n: float, a: float, kind: str) -> AsymptoticEstimate:
    """log10 of e^{T}/sqrt(2 pi n^a) at m = n - n^a."""
    x, y = louchard_xy(n, a)
    T = louchard_T(x, y, kind)
    val = (T - 0.5 * math.log(2 * math.pi * x)) / LN10
    return AsymptoticEstimate(regime="louchard", inputs={"n": n, "a": a, "kind": kind}, log10_value=val,
                              extra={"T": T})
