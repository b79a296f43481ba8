"""Directed-rounding helpers and base-10 log enclosures.

Endpoints are mpmath raw mpf values rounded with explicit floor/ceiling
modes at :data:`PREC` bits. The low-level ``mpmath.libmp`` calls take the
precision as an argument, so nothing here touches a global context.
mpmath does not promise correctly rounded transcendental results, so
``log``/``exp`` outputs get an extra outward nudge of a few ulps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import libmp as L
from mpmath import mp, mpf

PREC = 128
_NUDGE_BITS = 4

DOWN = L.round_floor
UP = L.round_ceiling

ZERO = L.fzero


class PrecisionBudgetError(ArithmeticError):
    """Tracked rounding error exceeds the allowed budget."""


def _nudge(x, rnd, prec: int = PREC):
    """Move ``x`` outward by 2^-(prec - _NUDGE_BITS) relative."""
    if x == ZERO:
        tiny = L.from_man_exp(1, -prec * 4)
        return L.mpf_neg(tiny) if rnd == DOWN else tiny
    _, _, exp, bc = x
    step = L.from_man_exp(1, exp + bc - (prec - _NUDGE_BITS))
    return L.mpf_sub(x, step, prec, rnd) if rnd == DOWN else L.mpf_add(x, step, prec, rnd)


def from_int(n: int, rnd) -> tuple:
    return L.from_int(int(n), PREC, rnd)


def from_fraction(q: Fraction, rnd) -> tuple:
    q = Fraction(q)
    return L.from_rational(q.numerator, q.denominator, PREC, rnd)


def from_float(x: float) -> tuple:
    return L.from_float(float(x))


def add(a, b, rnd):
    return L.mpf_add(a, b, PREC, rnd)


def sub(a, b, rnd):
    return L.mpf_sub(a, b, PREC, rnd)


def mul(a, b, rnd):
    return L.mpf_mul(a, b, PREC, rnd)


def div(a, b, rnd):
    return L.mpf_div(a, b, PREC, rnd)


def ln(x, rnd):
    if L.mpf_sign(x) <= 0:
        raise ValueError("log of non-positive value")
    return _nudge(L.mpf_log(x, PREC, rnd), rnd)


def exp(x, rnd):
    return _nudge(L.mpf_exp(x, PREC, rnd), rnd)


def ln10(rnd):
    return ln(L.from_int(10), rnd)


def log10(x, rnd):
    """log10 of a positive raw mpf, rounded in direction ``rnd``."""
    v = ln(x, rnd)
    if L.mpf_sign(v) >= 0:
        return div(v, ln10(UP if rnd == DOWN else DOWN), rnd)
    return div(v, ln10(rnd), rnd)


def pow10(x, rnd):
    """10**x for raw mpf ``x``."""
    if L.mpf_sign(x) >= 0:
        e = mul(x, ln10(rnd), rnd)
    else:
        e = mul(x, ln10(UP if rnd == DOWN else DOWN), rnd)
    return exp(e, rnd)


def to_fraction(x) -> Fraction:
    p, q = L.to_rational(x)
    return Fraction(int(p), int(q))


def to_mpf(x) -> mpf:
    """Wrap a raw value without rounding it to the global mpmath precision."""
    with mp.workprec(PREC):
        return mpf(x)


def to_str(x, digits: int = 40) -> str:
    return L.to_str(x, digits)


def cmp(a, b) -> int:
    return L.mpf_cmp(a, b)


def floor(x) -> int:
    return int(L.to_int(L.mpf_floor(x)))


def mpf_min(a, b):
    return a if cmp(a, b) <= 0 else b


def mpf_max(a, b):
    return a if cmp(a, b) >= 0 else b


@dataclass(frozen=True)
class LogInterval:
    """Enclosure ``[10**lo, 10**hi]`` of a positive real, stored as raw mpf."""

    lo: tuple
    hi: tuple

    def __post_init__(self) -> None:
        if cmp(self.lo, self.hi) > 0:
            raise ValueError("LogInterval with lo > hi")

    @classmethod
    def from_int(cls, n: int) -> "LogInterval":
        if n <= 0:
            raise ValueError(f"log of non-positive integer {n}")
        return cls(log10(from_int(n, DOWN), DOWN), log10(from_int(n, UP), UP))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "LogInterval":
        if q <= 0:
            raise ValueError(f"log of non-positive value {q}")
        return cls(log10(from_fraction(q, DOWN), DOWN), log10(from_fraction(q, UP), UP))

    @classmethod
    def from_ln_bounds(cls, lo_ln, hi_ln) -> "LogInterval":
        """Convert natural-log bounds (raw mpf) to base 10, outward."""
        def conv(v, rnd):
            other = UP if rnd == DOWN else DOWN
            return div(v, ln10(other if L.mpf_sign(v) >= 0 else rnd), rnd)

        return cls(conv(lo_ln, DOWN), conv(hi_ln, UP))

    def __mul__(self, other: "LogInterval") -> "LogInterval":
        return LogInterval(add(self.lo, other.lo, DOWN), add(self.hi, other.hi, UP))

    def __truediv__(self, other: "LogInterval") -> "LogInterval":
        return LogInterval(sub(self.lo, other.hi, DOWN), sub(self.hi, other.lo, UP))

    @property
    def width(self) -> float:
        return float(to_mpf(sub(self.hi, self.lo, UP)))

    @property
    def mid(self) -> mpf:
        with mp.workprec(PREC):
            return (mpf(self.lo) + mpf(self.hi)) / 2

    def contains_log(self, other: "LogInterval") -> bool:
        return cmp(self.lo, other.lo) <= 0 and cmp(other.hi, self.hi) <= 0

    def contains_int(self, n: int) -> bool:
        return n > 0 and self.contains_log(LogInterval.from_int(n))

    def to_json(self) -> dict:
        return {"log10_lo": to_str(self.lo), "log10_hi": to_str(self.hi)}


# ---------------------------------------------------------------------------
# log C(N, k) by summation

_EPS = 2.0 ** -53
# numpy's vectorised log/log1p are not correctly rounded; charge 16 ulp per call.
_ULPS_PER_LOG = 16.0
_EXACT_FLOAT = 2 ** 53


def _ln_sum_floats(terms: np.ndarray, budget: float) -> tuple:
    """Enclose sum(terms) + [-budget, budget] in natural-log space (raw mpf lo, hi).

    ``math.fsum`` is correctly rounded, so its own error is half an ulp of
    the total; one full ulp is charged.
    """
    s = math.fsum(terms.tolist())
    slack = budget + abs(s) * _EPS + 1e-300
    lo = sub(from_float(s), from_float(slack), DOWN)
    hi = add(from_float(s), from_float(slack), UP)
    return lo, hi


def ln_factorial_bounds(k: int, chunk: int = 1 << 20) -> tuple:
    """Natural-log enclosure of k! as sum_{i<=k} ln i."""
    if k < 0:
        raise ValueError(f"negative argument {k}")
    lo, hi = ZERO, ZERO
    for start in range(1, k + 1, chunk):
        i = np.arange(start, min(k, start + chunk - 1) + 1, dtype=np.float64)
        t = np.log(i)
        budget = _ULPS_PER_LOG * _EPS * float(np.sum(np.abs(t)))
        plo, phi = _ln_sum_floats(t, budget)
        lo, hi = add(lo, plo, DOWN), add(hi, phi, UP)
    return lo, hi


def ln_binomial_bounds(N: int, k: int, chunk: int = 1 << 20) -> tuple:
    """Natural-log enclosure of C(N, k) as sum_{i=1}^k ln((N - k + i)/i).

    For N below 2**53 every N - k + i is an exact double and each term is
    log(N - k + i) - log(i). Above that, ln(N - k + i) is split as
    ln N + log1p((i - k)/N) with ln N taken at full precision; |(i-k)/N|
    is then tiny and log1p is well conditioned. Every float term carries
    an absolute error budget; partial sums are combined outward.
    """
    N, k = int(N), int(k)
    if k < 0 or N < 0:
        raise ValueError(f"negative argument N={N}, k={k}")
    if k > N:
        raise ValueError(f"k={k} exceeds N={N}")
    k = min(k, N - k) if N < _EXACT_FLOAT else k
    lo, hi = ZERO, ZERO
    big = N >= _EXACT_FLOAT
    if big:
        lnN_lo = ln(from_int(N, DOWN), DOWN)
        lnN_hi = ln(from_int(N, UP), UP)
        lo = mul(lnN_lo, from_int(k, DOWN), DOWN)
        hi = mul(lnN_hi, from_int(k, UP), UP)
        Nf = float(N)
    for start in range(1, k + 1, chunk):
        stop = min(k, start + chunk - 1)
        i = np.arange(start, stop + 1, dtype=np.float64)
        log_i = np.log(i)
        if big:
            x = (i - k) / Nf
            num = np.log1p(x)
            # x carries ~3 eps relative error from float(N) and the division;
            # |x| < 2**-20 keeps log1p's condition number near 1.
            num_budget = (_ULPS_PER_LOG + 4.0) * _EPS * float(np.sum(np.abs(num)))
        else:
            num = np.log(float(N - k) + i)
            num_budget = _ULPS_PER_LOG * _EPS * float(np.sum(np.abs(num)))
        terms = num - log_i
        # the subtraction itself rounds once per term
        budget = (
            num_budget
            + _ULPS_PER_LOG * _EPS * float(np.sum(np.abs(log_i)))
            + _EPS * float(np.sum(np.abs(terms)))
        )
        plo, phi = _ln_sum_floats(terms, budget)
        lo, hi = add(lo, plo, DOWN), add(hi, phi, UP)
    if L.mpf_sign(lo) < 0:
        lo = ZERO  # C(N, k) >= 1
    return lo, hi


def log_binomial(N: int | str, k: int) -> LogInterval:
    """Enclosure of log10 C(N, k); ``N`` may be a decimal string."""
    N = int(N)
    lo, hi = ln_binomial_bounds(N, k)
    return LogInterval.from_ln_bounds(lo, hi)


def log_factorial(k: int) -> LogInterval:
    lo, hi = ln_factorial_bounds(k)
    return LogInterval.from_ln_bounds(lo, hi)
