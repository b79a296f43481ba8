"""Certified two-sided enclosures from Poisson approximation.

Three families of bounds are evaluated:

* :func:`theorem4_bound` -- uniform k-subsets of the staircase board
  (S(n, n-k) and |s(n, n-k)|),
* :func:`theorem5_bound` -- k independent labelled rooks (N^k outcomes),
* :func:`theorem6_bound` -- rook and file numbers of a general Ferrers board.

Every ingredient (rates, d-terms, caps) is an exact ``Fraction``. Only the
final exponentials and the binomial prefactor are rounded, outward, in
:mod:`stirling_bounds.intervals`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import intervals as iv
from .exact import FerrersBoard
from .intervals import DOWN, UP, LogInterval, PrecisionBudgetError

EXACT = "exact"
LOG = "log"
MODES = (EXACT, LOG)

# d1/d2 variants for the staircase theorem
D_FIGURE = "figure"  # printed coefficients, no (1 - T) factor: reproduces the D2 table
D_PRINTED = "printed"  # printed coefficients with the (1 - T) factor
D_DERIVED = "derived"  # assembled from the coupling terms R+, C+, R_A-, ...
D_FORMS = (D_FIGURE, D_PRINTED, D_DERIVED)

CAP_RATE = "rate"
CAP_PRINTED = "printed"
CAP_CONVENTIONS = (CAP_RATE, CAP_PRINTED)

FORM_DERIVED = "derived"
FORM_VERBATIM = "verbatim"

EXACT_PREFACTOR_MAX_N = 10**6
LOG_BUDGET = Fraction(1, 10**8)


def _check_nk(n: int, k: int) -> None:
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    if k < 2 or k > n:
        raise ValueError(f"need 2 <= k <= n, got n={n}, k={k}")


def fmin(*xs: Fraction) -> Fraction:
    return min(Fraction(x) for x in xs)


# ---------------------------------------------------------------------------
# enclosures


@dataclass(frozen=True)
class Enclosure:
    """``prefactor * [exp(-rate) - cap, exp(-rate) + cap]``, rounded outward.

    ``prefactor_exact`` is set in exact mode (an int or Fraction); in log
    mode only the base-10 log enclosure ``prefactor`` is available.
    ``bracket_lo`` may be <= 0; the clamped lower endpoint is then 0.
    """

    rate: Fraction
    cap: Fraction
    prefactor: Optional[LogInterval]
    prefactor_exact: Optional[Fraction]
    bracket_lo: tuple
    bracket_hi: tuple

    @classmethod
    def build(cls, rate: Fraction, cap: Fraction, prefactor_exact=None, prefactor=None) -> "Enclosure":
        e_lo = iv.exp(iv.from_fraction(-rate, DOWN), DOWN)
        e_hi = iv.exp(iv.from_fraction(-rate, UP), UP)
        lo = iv.sub(e_lo, iv.from_fraction(cap, UP), DOWN)
        hi = iv.add(e_hi, iv.from_fraction(cap, UP), UP)
        if prefactor_exact is not None:
            prefactor_exact = Fraction(prefactor_exact)
            if prefactor is None and prefactor_exact > 0:
                prefactor = LogInterval.from_fraction(prefactor_exact)
        return cls(Fraction(rate), Fraction(cap), prefactor, prefactor_exact, lo, hi)

    @property
    def is_zero(self) -> bool:
        return self.prefactor_exact is not None and self.prefactor_exact == 0

    @property
    def lower_is_trivial(self) -> bool:
        """True when the raw lower endpoint is <= 0 and clamping applies."""
        return self.is_zero or iv.cmp(self.bracket_lo, iv.ZERO) <= 0

    @property
    def lower_raw(self) -> Optional[Fraction]:
        if self.prefactor_exact is None:
            return None
        return self.prefactor_exact * iv.to_fraction(self.bracket_lo)

    @property
    def lower(self) -> Optional[Fraction]:
        raw = self.lower_raw
        return None if raw is None else max(raw, Fraction(0))

    @property
    def upper(self) -> Optional[Fraction]:
        if self.prefactor_exact is None:
            return None
        return self.prefactor_exact * iv.to_fraction(self.bracket_hi)

    @property
    def log10_lower(self):
        """Raw mpf lower bound on log10 of the lower endpoint, or None if <= 0."""
        if self.lower_is_trivial:
            return None
        return iv.add(self.prefactor.lo, iv.log10(self.bracket_lo, DOWN), DOWN)

    @property
    def log10_upper(self):
        if self.is_zero:
            return None
        return iv.add(self.prefactor.hi, iv.log10(self.bracket_hi, UP), UP)

    def contains(self, x: int) -> bool:
        if x < 0:
            return False
        if self.prefactor_exact is not None:
            return self.lower <= x <= self.upper
        if x == 0:
            return self.lower_is_trivial
        lx = LogInterval.from_int(x)
        if iv.cmp(lx.hi, self.log10_upper) > 0:
            return False
        lo = self.log10_lower
        return lo is None or iv.cmp(lo, lx.lo) <= 0

    def integer_range(self) -> Optional[tuple[int, int]]:
        if self.prefactor_exact is None:
            return None
        return math.ceil(self.lower), math.floor(self.upper)

    def mantissa(self, exponent10: Optional[int] = None) -> dict:
        """Endpoints as ``mantissa * 10**exponent10`` (lower rounded down, upper up)."""
        up = self.log10_upper
        if up is None:
            return {"mantissa_lo": "0", "mantissa_hi": "0", "exponent10": 0}
        if exponent10 is None:
            exponent10 = iv.floor(up)
        e = iv.from_int(exponent10, DOWN)
        hi = iv.pow10(iv.sub(up, e, UP), UP)
        lo_log = self.log10_lower
        lo = iv.ZERO if lo_log is None else iv.pow10(iv.sub(lo_log, e, DOWN), DOWN)
        return {
            "mantissa_lo": iv.to_str(lo, 20),
            "mantissa_hi": iv.to_str(hi, 20),
            "exponent10": int(exponent10),
        }

    def to_json(self) -> dict:
        out = {
            "rate": frac_json(self.rate),
            "cap": frac_json(self.cap),
            "lower_clamped": self.lower_is_trivial,
            "log10_prefactor": None if self.prefactor is None else self.prefactor.to_json(),
        }
        lo, up = self.log10_lower, self.log10_upper
        out["log10_lower"] = None if lo is None else iv.to_str(lo)
        out["log10_upper"] = None if up is None else iv.to_str(up)
        m = self.mantissa()
        out["mantissa_lo"] = m["mantissa_lo"]
        out["mantissa_hi"] = m["mantissa_hi"]
        out["exponent10"] = m["exponent10"]
        rng = self.integer_range()
        if rng is not None:
            out["lower_raw_sign"] = (self.lower_raw > 0) - (self.lower_raw < 0)
            out["integer_lo"] = str(rng[0])
            out["integer_hi"] = str(rng[1])
        return out


def frac_json(q) -> dict:
    q = Fraction(q)
    return {"exact": f"{q.numerator}/{q.denominator}", "float": float(q)}


def _prefactor_binomial(N: int, k: int, mode: str, exact_max_n: int):
    if mode == EXACT:
        if N > exact_max_n:
            raise ValueError(f"exact mode needs N <= {exact_max_n}, got N={N}; use mode='log'")
        return math.comb(N, k), None
    if mode == LOG:
        return None, iv.log_binomial(N, k)
    raise ValueError(f"unknown mode {mode!r}")


def _check_budget(pref: Optional[LogInterval]) -> None:
    if pref is None:
        return
    width = Fraction(iv.to_fraction(iv.sub(pref.hi, pref.lo, UP)))
    scale = max(abs(iv.to_fraction(pref.hi)), Fraction(1))
    if width > LOG_BUDGET * scale:
        raise PrecisionBudgetError(f"log10 prefactor width {float(width):.3e} exceeds budget")


# ---------------------------------------------------------------------------
# staircase, uniform k-subsets


def mu(n: int, k: int) -> Fraction:
    """Expected number of column-attacking pairs, C(k,2) C(n,3) / C(N,2)."""
    _check_nk(n, k)
    N = math.comb(n, 2)
    return Fraction(math.comb(k, 2) * math.comb(n, 3), math.comb(N, 2))


def t_term(n: int, k: int) -> Fraction:
    """Probability of coupling cases 1, 2a, 3a as used by the bound."""
    return Fraction(13 - 12 * k + 3 * k * k, math.comb(math.comb(n, 2), 2))


def d_printed(n: int, k: int, with_tightening: bool = True) -> tuple[Fraction, Fraction]:
    """d1, d2 with the printed coefficients; ``with_tightening`` keeps the (1 - T) factor."""
    N = math.comb(n, 2)
    CN2 = math.comb(N, 2)
    c3, c4 = math.comb(n, 3), math.comb(n, 4)
    T = Fraction(13 - 12 * k + 3 * k * k, CN2)
    f = (1 - T) if with_tightening else Fraction(1)
    a_term = Fraction(6 * c4 * (k - 2), c3 * (N - 2))
    d1 = Fraction(c3, CN2) + T + f * (Fraction(4 * (k - 2) * c3, CN2) + a_term)
    d2 = (
        Fraction(2 * c3, CN2)
        + T
        + f * (Fraction(8 * (k - 2) * c3, CN2) + a_term + Fraction(k - 2, N - 2) * Fraction(5 * n - 11, 4))
    )
    return d1, d2


@dataclass
class BoundReport:
    n: int
    k: int
    mode: str
    d_form: str
    N: int
    mu: Fraction
    t_term: Fraction
    r_alpha: Fraction
    c_alpha: Fraction
    r_plus: Fraction
    c_plus: Fraction
    ra_minus: Fraction
    rb_minus: Fraction
    ca_minus: Fraction
    cb_minus: Fraction
    d1: Fraction
    d2: Fraction
    cap1: Fraction
    cap2: Fraction
    enclosure_first: Enclosure
    enclosure_second: Enclosure
    d_variants: dict = field(default_factory=dict)

    @property
    def d1_derived(self) -> Fraction:
        return self.d_variants[D_DERIVED][0]

    @property
    def d2_derived(self) -> Fraction:
        return self.d_variants[D_DERIVED][1]

    def to_json(self) -> dict:
        out = {"n": str(self.n), "k": str(self.k), "N": str(self.N), "mode": self.mode, "d_form": self.d_form}
        for name in (
            "mu", "t_term", "r_alpha", "c_alpha", "r_plus", "c_plus", "ra_minus", "rb_minus",
            "ca_minus", "cb_minus", "d1", "d2", "cap1", "cap2",
        ):
            out[name] = frac_json(getattr(self, name))
        out["d_variants"] = {
            k: {"d1": frac_json(v[0]), "d2": frac_json(v[1])} for k, v in self.d_variants.items()
        }
        out["enclosure_first"] = self.enclosure_first.to_json()
        out["enclosure_second"] = self.enclosure_second.to_json()
        return out


def theorem4_bound(
    n: int,
    k: int,
    mode: str = EXACT,
    d_form: str = D_FIGURE,
    exact_max_n: int = EXACT_PREFACTOR_MAX_N,
) -> BoundReport:
    """Enclose S(n, n-k) and |s(n, n-k)| on the staircase board.

    S(n, n-k) lies in C(N,k) [e^{-2 mu} -/+ cap2] and |s(n, n-k)| in
    C(N,k) [e^{-mu} -/+ cap1].
    """
    _check_nk(n, k)
    if d_form not in D_FORMS:
        raise ValueError(f"unknown d_form {d_form!r}")
    N = math.comb(n, 2)
    CN2 = math.comb(N, 2)
    c3, c4 = math.comb(n, 3), math.comb(n, 4)
    m = mu(n, k)
    T = t_term(n, k)
    r_alpha = c_alpha = Fraction(c3, CN2)
    r_plus = c_plus = 2 * (k - 2) * r_alpha
    ra_minus = ca_minus = Fraction(3 * c4 * (k - 2), c3 * (N - 2))
    rb_minus = cb_minus = Fraction((k - 2) * (5 * n - 11), 8 * (N - 2))

    d1_der = c_alpha + T + (1 - T) * (c_plus + 2 * ca_minus)
    d2_der = r_alpha + c_alpha + T + (1 - T) * (r_plus + ra_minus + rb_minus + c_plus + ca_minus + cb_minus)
    variants = {
        D_FIGURE: d_printed(n, k, with_tightening=False),
        D_PRINTED: d_printed(n, k, with_tightening=True),
        D_DERIVED: (d1_der, d2_der),
    }
    d1, d2 = variants[d_form]
    cap1 = fmin(d1, m * d1, 1)
    cap2 = fmin(d2, 2 * m * d2, 1)

    exact_pref, log_pref = _prefactor_binomial(N, k, mode, exact_max_n)
    _check_budget(log_pref)
    first = Enclosure.build(m, cap1, exact_pref, log_pref)
    second = Enclosure.build(2 * m, cap2, exact_pref, log_pref)
    return BoundReport(
        n=n, k=k, mode=mode, d_form=d_form, N=N, mu=m, t_term=T,
        r_alpha=r_alpha, c_alpha=c_alpha, r_plus=r_plus, c_plus=c_plus,
        ra_minus=ra_minus, rb_minus=rb_minus, ca_minus=ca_minus, cb_minus=cb_minus,
        d1=d1, d2=d2, cap1=cap1, cap2=cap2,
        enclosure_first=first, enclosure_second=second, d_variants=variants,
    )


def d2_table(n_values=range(11, 31), k_values=(3, 4), d_form: str = D_FIGURE) -> dict:
    """cap2 for each (n, k) as an exact rational."""
    return {(n, k): theorem4_bound(n, k, d_form=d_form).cap2 for n in n_values for k in k_values}


def format_table_value(x: Fraction) -> str:
    """Six significant digits with trailing zeros dropped; a clamped 1 prints as ``1.``."""
    if x == 1:
        return "1."
    return f"{float(x):.6g}"


# ---------------------------------------------------------------------------
# staircase, independent labelled rooks


@dataclass
class IndepBoundReport:
    n: int
    k: int
    mode: str
    cap_convention: str
    d_source: str
    N: int
    A: int
    A_c: int
    A_r: int
    S2: int
    S3: int
    mu1: Fraction
    mu2: Fraction
    c_alpha: Fraction
    r_alpha: Fraction
    c_plus: Fraction
    r_plus: Fraction
    ra_minus: Fraction
    ca_minus: Fraction
    rb_minus: Fraction
    cb_minus: Fraction
    d1_symbolic: Fraction
    d2_symbolic: Fraction
    d1_printed: Fraction
    d2_printed: Fraction
    d1_indep: Fraction
    d2_indep: Fraction
    cap1_indep: Fraction
    cap2_indep: Fraction
    enclosure_first: Enclosure
    enclosure_second: Enclosure

    @property
    def d1_difference(self) -> Fraction:
        return self.d1_printed - self.d1_symbolic

    @property
    def d2_difference(self) -> Fraction:
        return self.d2_printed - self.d2_symbolic

    def to_json(self) -> dict:
        out = {
            "n": str(self.n), "k": str(self.k), "N": str(self.N), "mode": self.mode,
            "cap_convention": self.cap_convention, "d_source": self.d_source,
            "A": str(self.A), "A_c": str(self.A_c), "A_r": str(self.A_r),
            "S_n(2)": str(self.S2), "S_n(3)": str(self.S3),
        }
        for name in (
            "mu1", "mu2", "c_alpha", "r_alpha", "c_plus", "r_plus", "ra_minus", "ca_minus",
            "rb_minus", "cb_minus", "d1_symbolic", "d2_symbolic", "d1_printed", "d2_printed",
            "d1_difference", "d2_difference", "d1_indep", "d2_indep", "cap1_indep", "cap2_indep",
        ):
            out[name] = frac_json(getattr(self, name))
        out["prefactor"] = "N^k/k!"
        out["enclosure_first"] = self.enclosure_first.to_json()
        out["enclosure_second"] = self.enclosure_second.to_json()
        return out


def power_sum(n: int, i: int) -> int:
    """S_n(i) = sum_{r=1}^{n-1} r^i."""
    return sum(r**i for r in range(1, n))


def indep_rb_sum(n: int) -> int:
    """sum_{r=1}^{n-1} sum_{c1=1}^{r} sum_{c2=c1}^{r} (r + (n - c1) + (n - c2)).

    For fixed r there are P = r(r+1)/2 pairs c1 <= c2, and c1 + c2
    averages r + 1 over them, so the inner double sum is P (2n - 1).
    """
    return (2 * n - 1) * math.comb(n + 1, 3)


def theorem5_bound(
    n: int,
    k: int,
    mode: str = EXACT,
    cap_convention: str = CAP_RATE,
    d_source: str = "printed",
    exact_max_n: int = EXACT_PREFACTOR_MAX_N,
) -> IndepBoundReport:
    """Independence-coupling enclosure with prefactor N^k / k!.

    Both the explicit closed forms and the symbol-by-symbol definitions
    are evaluated; ``d_source`` picks which pair feeds the caps.
    """
    _check_nk(n, k)
    if cap_convention not in CAP_CONVENTIONS:
        raise ValueError(f"unknown cap convention {cap_convention!r}")
    if d_source not in ("printed", "symbolic"):
        raise ValueError(f"unknown d_source {d_source!r}")
    N = math.comb(n, 2)
    N2 = N * N
    A = n * (n - 1) * (4 * n - 5) // 6
    A_c = n * (n - 1) * (2 * n - 1) // 6
    A_r = 2 * math.comb(n, 3)
    S2, S3 = power_sum(n, 2), power_sum(n, 3)
    pairs = math.comb(k, 2)
    mu1 = Fraction(pairs * A_c, N2)
    mu2 = Fraction(pairs * A, N2)

    c_a = Fraction(A_c, N2)
    r_a = Fraction(A_r, N2)
    c_plus = 2 * (k - 2) * c_a
    r_plus = 2 * (k - 2) * r_a
    ra = 2 * (k - 2) * Fraction(S3, A * N)
    ca = Fraction(A, A_c) * ra
    rb = Fraction((k - 2) * indep_rb_sum(n), A * N)
    cb = Fraction(A, A_c) * rb
    d1_sym = c_a + c_plus + ca + cb
    d2_sym = r_a + c_a + 2 * (r_plus + ra + rb)

    base1 = Fraction(n * (n - 1) * (2 * n - 1), 6 * N2)
    base2 = Fraction(n * (n - 1) * (4 * n - 5), 6 * N2)
    d1_pr = (
        base1
        + 2 * (k - 2) * base1
        + Fraction(3 * (k - 2) * n * (n - 1), (2 * n - 1) * N)
        + Fraction(2 * (k - 2) * (n + 1), N)
    )
    d2_pr = base2 + 2 * (
        4 * (k - 2) * base1
        + Fraction(3 * (k - 2) * n * (n - 1), (4 * n - 5) * N)
        + Fraction(2 * (k - 2) * (2 * n - 1) * (n + 1), (4 * n - 5) * N)
    )
    d1, d2 = (d1_pr, d2_pr) if d_source == "printed" else (d1_sym, d2_sym)
    cap1 = fmin(d1, mu1 * d1, 1)
    if cap_convention == CAP_RATE:
        cap2 = fmin(d2, mu2 * d2, 1)
    else:
        cap2 = fmin(d2, 2 * mu1 * d2, 1)

    if mode == EXACT:
        if N > exact_max_n:
            raise ValueError(f"exact mode needs N <= {exact_max_n}; use mode='log'")
        pref_exact, pref_log = Fraction(N**k, math.factorial(k)), None
    elif mode == LOG:
        pref_exact = None
        pref_log = LogInterval.from_int(N)
        pref_log = LogInterval(
            iv.mul(pref_log.lo, iv.from_int(k, DOWN), DOWN), iv.mul(pref_log.hi, iv.from_int(k, UP), UP)
        ) / iv.log_factorial(k)
        _check_budget(pref_log)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return IndepBoundReport(
        n=n, k=k, mode=mode, cap_convention=cap_convention, d_source=d_source, N=N,
        A=A, A_c=A_c, A_r=A_r, S2=S2, S3=S3, mu1=mu1, mu2=mu2,
        c_alpha=c_a, r_alpha=r_a, c_plus=c_plus, r_plus=r_plus,
        ra_minus=ra, ca_minus=ca, rb_minus=rb, cb_minus=cb,
        d1_symbolic=d1_sym, d2_symbolic=d2_sym, d1_printed=d1_pr, d2_printed=d2_pr,
        d1_indep=d1, d2_indep=d2, cap1_indep=cap1, cap2_indep=cap2,
        enclosure_first=Enclosure.build(mu1, cap1, pref_exact, pref_log),
        enclosure_second=Enclosure.build(mu2, cap2, pref_exact, pref_log),
    )


# ---------------------------------------------------------------------------
# general Ferrers boards


@dataclass
class FerrersBoundReport:
    board: FerrersBoard
    k: int
    mode: str
    s2_form: str
    s4_form: str
    N: int
    L: int
    L_prime: int
    lam: Fraction
    lam_prime: Fraction
    s0: Fraction
    s0p: Fraction
    s1: Fraction
    s1p: Fraction
    s2: Fraction
    s2p: Fraction
    s3: Fraction
    s3p: Fraction
    s4: Fraction
    d3: Fraction
    d4: Fraction
    cap_rook: Fraction
    cap_file: Fraction
    enclosure_rook: Enclosure
    enclosure_file: Enclosure

    def to_json(self) -> dict:
        out = {
            "board": str(self.board), "k": str(self.k), "mode": self.mode,
            "s2_form": self.s2_form, "s4_form": self.s4_form,
            "N": str(self.N), "L": str(self.L), "L_prime": str(self.L_prime),
        }
        for name in (
            "lam", "lam_prime", "s0", "s0p", "s1", "s1p", "s2", "s2p", "s3", "s3p", "s4",
            "d3", "d4", "cap_rook", "cap_file",
        ):
            out[name] = frac_json(getattr(self, name))
        out["enclosure_rook"] = self.enclosure_rook.to_json()
        out["enclosure_file"] = self.enclosure_file.to_json()
        return out


def _s2_sum(parts) -> int:
    return sum(math.comb(b, 2) * (b - 2) for b in parts)


def _s3_sum(parts, conj) -> int:
    """sum_i sum_{c1<c2<=b_i} [(conj_{c1} - 1) + (conj_{c2} - 1)].

    Each column c <= b_i appears in b_i - 1 of the pairs.
    """
    prefix = [0]
    for h in conj:
        prefix.append(prefix[-1] + h - 1)
    return sum((b - 1) * prefix[b] for b in parts)


def theorem6_bound(
    board: FerrersBoard,
    k: int,
    mode: str = EXACT,
    s2_form: str = FORM_DERIVED,
    s4_form: str = FORM_DERIVED,
    exact_max_n: int = EXACT_PREFACTOR_MAX_N,
) -> FerrersBoundReport:
    """Enclose r_B(k) and f_B(k) with prefactor C(N, k).

    ``s2_form='derived'`` uses the 2(k-2) prefactor that the same-row
    argument produces (the printed s2 carries k-2); ``s4_form='derived'``
    uses 3k^2 (the printed s4 has 3k^3). The undefined "M" in s3' is N.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    N, L, Lp = board.N, board.L, board.L_prime
    rows, cols = board.rows, board.cols
    zero = Fraction(0)
    if k > N:
        pref = 0
        enc = Enclosure.build(zero, zero, prefactor_exact=0)
        return FerrersBoundReport(
            board=board, k=k, mode=mode, s2_form=s2_form, s4_form=s4_form, N=N, L=L, L_prime=Lp,
            lam=zero, lam_prime=zero, s0=zero, s0p=zero, s1=zero, s1p=zero, s2=zero, s2p=zero,
            s3=zero, s3p=zero, s4=zero, d3=zero, d4=zero, cap_rook=zero, cap_file=zero,
            enclosure_rook=enc, enclosure_file=enc,
        )
    CN2 = math.comb(N, 2)
    pairs = math.comb(k, 2)
    lam = Fraction(pairs * L, CN2)
    lamp = Fraction(pairs * Lp, CN2)
    s0, s0p = Fraction(L, CN2), Fraction(Lp, CN2)
    s1, s1p = Fraction(2 * (k - 2) * L, CN2), Fraction(2 * (k - 2) * Lp, CN2)
    if k == 2:
        s2 = s2p = s3 = s3p = zero
    else:
        f2 = 2 if s2_form == FORM_DERIVED else 1
        s2 = Fraction(f2 * (k - 2) * _s2_sum(rows), N - 2)
        s2p = Fraction(f2 * (k - 2) * _s2_sum(cols), N - 2)
        s3 = Fraction((k - 2) * _s3_sum(rows, cols), N - 2)
        s3p = Fraction((k - 2) * _s3_sum(cols, rows), N - 2)
    kk = k * k if s4_form == FORM_DERIVED else k**3
    s4 = Fraction(13 - 12 * k + 3 * kk, CN2)
    d3 = s0 + s0p + s1 + s1p + (s2 + s2p + s3 + s3p) / (L + Lp) + s4
    # no column pairs at all (single row): the column ratio term vanishes
    d4 = s0p + s1p + ((s2p + s3p) / Lp if Lp else zero) + s4
    cap_rook = fmin(d3, (lam + lamp) * d3, 1)
    cap_file = fmin(d4, lamp * d4, 1)
    exact_pref, log_pref = _prefactor_binomial(N, k, mode, exact_max_n)
    _check_budget(log_pref)
    return FerrersBoundReport(
        board=board, k=k, mode=mode, s2_form=s2_form, s4_form=s4_form, N=N, L=L, L_prime=Lp,
        lam=lam, lam_prime=lamp, s0=s0, s0p=s0p, s1=s1, s1p=s1p, s2=s2, s2p=s2p,
        s3=s3, s3p=s3p, s4=s4, d3=d3, d4=d4, cap_rook=cap_rook, cap_file=cap_file,
        enclosure_rook=Enclosure.build(lam + lamp, cap_rook, exact_pref, log_pref),
        enclosure_file=Enclosure.build(lamp, cap_file, exact_pref, log_pref),
    )


def truncated_caps(n: int, k: int) -> tuple[Fraction, Fraction]:
    """Caps built from alpha and plus terms only, with R_A-, R_B-, C_A-, C_B- dropped.

    Not a certified bound. It exists to show which evaluation produces
    the widely quoted 6-digit intervals at n = 10**12, k = 2 * 10**6.
    """
    _check_nk(n, k)
    c = Fraction(math.comb(n, 3), math.comb(math.comb(n, 2), 2))
    T = t_term(n, k)
    m = mu(n, k)
    d1 = c + T + (1 - T) * 2 * (k - 2) * c
    d2 = 2 * c + T + (1 - T) * 4 * (k - 2) * c
    return fmin(d1, m * d1, 1), fmin(d2, 2 * m * d2, 1)
