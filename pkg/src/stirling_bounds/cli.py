"""Command-line entry point: ``stirling-bounds <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 precision-budget failure.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, InvalidOperation
from fractions import Fraction
from typing import Optional, Sequence

from . import asymptotics as asy
from . import bounds as bd
from .exact import (
    COLUMNS_ONLY,
    ROWS_AND_COLUMNS,
    FerrersBoard,
    file_number_exact,
    rook_number_exact,
    stirling1_unsigned_exact,
    stirling2_exact,
)
from .intervals import PrecisionBudgetError
from .simulate import SimConfig, estimate_p_w0, simulate_coupling

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_PRECISION = 3

ABSTRACT_N = 10**12
ABSTRACT_K = 2 * 10**6
ABSTRACT_PUBLISHED = {
    "first": ("1.87669", "1.876982", 35664464),
    "second": ("1.30121", "1.306975", 35664463),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_int(text: str) -> int:
    """Plain integers or scientific notation such as ``1e12`` or ``2E6``."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not d.is_finite() or d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_board(text: str) -> FerrersBoard:
    try:
        return FerrersBoard.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _kind_name(kind: int) -> str:
    return "first" if kind == 1 else "second"


# ---------------------------------------------------------------------------
# subcommands


def cmd_bound(args) -> tuple[int, dict]:
    n, k = args.n, args.k
    if n < 3 or not 0 <= k <= n:
        raise UsageError(f"need n >= 3 and 0 <= k <= n, got n={n}, k={k}")
    if k < 2:
        # the theorems need k >= 2; these two bands are closed forms
        value = 1 if k == 0 else math.comb(n, 2)
        return EXIT_OK, {"n": str(n), "k": str(k), "source": "exact", "first": str(value), "second": str(value)}
    if args.theorem == 4:
        report = bd.theorem4_bound(n, k, mode=args.mode, d_form=args.d_form)
    else:
        report = bd.theorem5_bound(n, k, mode=args.mode, cap_convention=args.cap_convention,
                                   d_source=args.d_source)
    out = {"theorem": args.theorem, **report.to_json()}
    if args.check:
        ok = True
        for name, fn, enc in (
            ("first", stirling1_unsigned_exact, report.enclosure_first),
            ("second", stirling2_exact, report.enclosure_second),
        ):
            inside = enc.contains(fn(n, n - k))
            out[f"contains_exact_{name}"] = inside
            ok &= inside
        return (EXIT_OK if ok else EXIT_VERIFY), out
    return EXIT_OK, out


def cmd_exact(args) -> tuple[int, dict]:
    if args.board is not None:
        if args.k is None:
            raise UsageError("--board needs --k")
        return EXIT_OK, {
            "board": str(args.board), "k": str(args.k),
            "rook_number": str(rook_number_exact(args.board, args.k)),
            "file_number": str(file_number_exact(args.board, args.k)),
        }
    if args.n is None or args.m is None:
        raise UsageError("exact needs --n and --m (or --board and --k)")
    fn = stirling1_unsigned_exact if args.kind == 1 else stirling2_exact
    try:
        value = fn(args.n, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK, {"n": str(args.n), "m": str(args.m), "kind": _kind_name(args.kind), "value": str(value)}


def cmd_asymptotic(args) -> tuple[int, dict]:
    kind = _kind_name(args.kind)
    reg = args.regime
    need = {"moser-wyman": "nm", "implicit-r": "nm", "small-m": "nm", "sachkov": "nm", "prop24": "nm",
            "param": "n", "louchard": "n"}[reg]
    if "n" in need and args.n is None or "m" in need and args.m is None:
        raise UsageError(f"regime {reg} needs --n" + (" and --m" if "m" in need else ""))
    try:
        if reg == "moser-wyman":
            est = asy.moser_wyman_s2(args.n, args.m, args.s, q_convention=args.q_convention)
        elif reg == "implicit-r":
            fn = asy.implicit_R_first if args.kind == 1 else asy.implicit_R_second
            est = fn(args.n, args.m)[2]
        elif reg == "small-m":
            est = asy.small_m_first_kind(args.n, args.m)
        elif reg == "sachkov":
            est = asy.sachkov_s2(args.n, args.m)
        elif reg == "prop24":
            est = asy.prop24_formula(args.n, args.m, kind)
        elif reg == "param":
            est = asy.param_formula(args.n, args.a, args.t, kind)
        else:
            est = asy.louchard_estimate(args.n, args.a, kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK, est.to_json()


_ATTACKS = {"both": ROWS_AND_COLUMNS, "columns": COLUMNS_ONLY}


def cmd_simulate(args) -> tuple[int, dict]:
    try:
        config = SimConfig(
            board=args.board, k=args.k, model=args.model, attacks=_ATTACKS[args.attacks],
            replicas=args.replicas, seed=args.seed, streams=args.streams,
        )
        run = simulate_coupling if args.coupling else estimate_p_w0
        result = run(config, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK, result.to_json()


def table_rows(d_form: str) -> list[tuple[int, str, str]]:
    table = bd.d2_table(d_form=d_form)
    return [(n, bd.format_table_value(table[(n, 3)]), bd.format_table_value(table[(n, 4)])) for n in range(11, 31)]


def cmd_table(args) -> tuple[int, object]:
    if args.format == "json":
        table = bd.d2_table(d_form=args.d_form)
        return EXIT_OK, {
            "d_form": args.d_form,
            "rows": [
                {"n": n, "k": k, "cap2": bd.frac_json(table[(n, k)])} for n in range(11, 31) for k in (3, 4)
            ],
        }
    rows = table_rows(args.d_form)
    if args.format == "tsv":
        lines = ["n\tk=3\tk=4"] + [f"{n}\t{a}\t{b}" for n, a, b in rows]
    else:
        lines = ["D2(n,k)   k=3        k=4"] + [f"n={n:<6} {a:<10} {b}" for n, a, b in rows]
    return EXIT_OK, "\n".join(lines) + "\n"


def random_boards(count: int, max_cells: int, seed: int) -> list[FerrersBoard]:
    """Seeded random partitions with at most ``max_cells`` cells."""
    rng = random.Random(seed)
    boards = []
    while len(boards) < count:
        target = rng.randint(2, max_cells)
        parts, left, cap = [], target, rng.randint(1, target)
        while left > 0:
            b = rng.randint(1, min(cap, left))
            parts.append(b)
            left -= b
            cap = b
        boards.append(FerrersBoard(tuple(sorted(parts, reverse=True))))
    return boards


def run_verify(n_max: int, k_max: int, boards: int = 50, board_cells: int = 300, board_k: int = 12,
               seed: int = 7) -> dict:
    """Containment sweep over the staircase theorems and random Ferrers boards."""
    checks = 0
    failures = []
    for n in range(3, n_max + 1):
        stair = FerrersBoard.staircase(n)
        for k in range(2, min(n, k_max) + 1):
            s1 = stirling1_unsigned_exact(n, n - k)
            s2 = stirling2_exact(n, n - k)
            t4 = bd.theorem4_bound(n, k)
            t5 = bd.theorem5_bound(n, k)
            t6 = bd.theorem6_bound(stair, k)
            for label, enc, value in (
                ("thm4-first", t4.enclosure_first, s1), ("thm4-second", t4.enclosure_second, s2),
                ("thm5-first", t5.enclosure_first, s1), ("thm5-second", t5.enclosure_second, s2),
                ("thm6-file", t6.enclosure_file, s1), ("thm6-rook", t6.enclosure_rook, s2),
            ):
                checks += 1
                if not enc.contains(value):
                    failures.append({"check": label, "n": n, "k": k})
    for board in random_boards(boards, board_cells, seed):
        for k in range(2, board_k + 1):
            t6 = bd.theorem6_bound(board, k)
            for label, enc, value in (
                ("ferrers-rook", t6.enclosure_rook, rook_number_exact(board, k)),
                ("ferrers-file", t6.enclosure_file, file_number_exact(board, k)),
            ):
                checks += 1
                if not enc.contains(value):
                    failures.append({"check": label, "board": str(board), "k": k})
    return {"n_max": n_max, "k_max": k_max, "random_boards": boards, "seed": seed,
            "checks": checks, "failures": failures, "passed": not failures}


def cmd_verify(args) -> tuple[int, dict]:
    if args.n_max < 3 or args.k_max < 2:
        raise UsageError("need --n-max >= 3 and --k-max >= 2")
    report = run_verify(args.n_max, args.k_max, boards=args.boards, seed=args.seed)
    return (EXIT_OK if report["passed"] else EXIT_VERIFY), report


def cmd_ferrers(args) -> tuple[int, dict]:
    if args.k < 2:
        raise UsageError("ferrers needs --k >= 2")
    report = bd.theorem6_bound(args.board, args.k, mode=args.mode, s2_form=args.s2_form, s4_form=args.s4_form)
    out = report.to_json()
    if args.check:
        r, f = rook_number_exact(args.board, args.k), file_number_exact(args.board, args.k)
        out["rook_number"], out["file_number"] = str(r), str(f)
        out["contains_rook"] = report.enclosure_rook.contains(r)
        out["contains_file"] = report.enclosure_file.contains(f)
        if not (out["contains_rook"] and out["contains_file"]):
            return EXIT_VERIFY, out
    return EXIT_OK, out


def outward_agrees(lo: str, hi: str, published_lo: str, published_hi: str) -> bool:
    """Lower endpoint rounded down and upper rounded up to the published digits."""
    qlo = Decimal(published_lo).as_tuple().exponent
    qhi = Decimal(published_hi).as_tuple().exponent
    r_lo = Decimal(lo).quantize(Decimal(1).scaleb(qlo), rounding=ROUND_FLOOR)
    r_hi = Decimal(hi).quantize(Decimal(1).scaleb(qhi), rounding=ROUND_CEILING)
    return r_lo == Decimal(published_lo) and r_hi == Decimal(published_hi)


def run_abstract(d_form: str = bd.D_FIGURE) -> dict:
    """Both large-n enclosures, the published intervals and the agreement verdicts."""
    report = bd.theorem4_bound(ABSTRACT_N, ABSTRACT_K, mode=bd.LOG, d_form=d_form)
    trunc1, trunc2 = bd.truncated_caps(ABSTRACT_N, ABSTRACT_K)
    pref = report.enclosure_first.prefactor
    out = {"n": str(ABSTRACT_N), "k": str(ABSTRACT_K), "d_form": d_form, "log10_binomial": pref.to_json()}
    agree_all = True
    for kind, enc, rate, trunc in (
        ("first", report.enclosure_first, report.mu, trunc1),
        ("second", report.enclosure_second, 2 * report.mu, trunc2),
    ):
        p_lo, p_hi, e10 = ABSTRACT_PUBLISHED[kind]
        m = enc.mantissa(e10)
        agree = outward_agrees(m["mantissa_lo"], m["mantissa_hi"], p_lo, p_hi)
        agree_all &= agree
        tm = bd.Enclosure.build(rate, trunc, prefactor=pref).mantissa(e10)
        out[kind] = {
            "exponent10": e10,
            "certified": [m["mantissa_lo"], m["mantissa_hi"]],
            "cap": bd.frac_json(enc.cap),
            "published": [p_lo, p_hi],
            "agrees": agree,
            "published_inside_certified": (
                Decimal(m["mantissa_lo"]) <= Decimal(p_lo) and Decimal(p_hi) <= Decimal(m["mantissa_hi"])
            ),
            "truncated_caps_not_certified": [tm["mantissa_lo"], tm["mantissa_hi"]],
            "truncated_agrees": outward_agrees(tm["mantissa_lo"], tm["mantissa_hi"], p_lo, p_hi),
        }
    out["agrees"] = agree_all
    return out


def cmd_abstract(args) -> tuple[int, dict]:
    out = run_abstract(args.d_form)
    return (EXIT_OK if out["agrees"] else EXIT_VERIFY), out


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stirling-bounds", description="Certified enclosures for Stirling, rook and file numbers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, choices=("json", "human"), default="json"):
        sp.add_argument("--format", choices=choices, default=default)

    b = sub.add_parser("bound", help="staircase enclosures of S(n,n-k) and |s(n,n-k)|")
    b.add_argument("--n", type=parse_int, required=True)
    b.add_argument("--k", type=parse_int, required=True)
    b.add_argument("--theorem", type=int, choices=(4, 5), default=4, help="4: k-subsets, 5: independent rooks")
    b.add_argument("--mode", choices=bd.MODES, default=None)
    b.add_argument("--d-form", choices=bd.D_FORMS, default=bd.D_FIGURE)
    b.add_argument("--cap-convention", choices=bd.CAP_CONVENTIONS, default=bd.CAP_RATE)
    b.add_argument("--d-source", choices=("printed", "symbolic"), default="printed")
    b.add_argument("--check", action="store_true", help="also test containment of the exact values")
    fmt(b)
    b.set_defaults(func=cmd_bound)

    e = sub.add_parser("exact", help="exact Stirling, rook or file numbers")
    e.add_argument("--n", type=parse_int)
    e.add_argument("--m", type=parse_int)
    e.add_argument("--kind", type=int, choices=(1, 2), default=2)
    e.add_argument("--board", type=parse_board)
    e.add_argument("--k", type=parse_int)
    fmt(e)
    e.set_defaults(func=cmd_exact)

    a = sub.add_parser("asymptotic", help="reference asymptotic estimates")
    a.add_argument("--regime", required=True,
                   choices=("moser-wyman", "implicit-r", "small-m", "sachkov", "prop24", "param", "louchard"))
    a.add_argument("--n", type=parse_int)
    a.add_argument("--m", type=parse_int)
    a.add_argument("--kind", type=int, choices=(1, 2), default=2)
    a.add_argument("--s", type=int, default=3)
    a.add_argument("--a", type=float, default=0.5)
    a.add_argument("--t", type=float, default=1.0)
    a.add_argument("--q-convention", choices=asy.Q_CONVENTIONS, default=asy.Q_M)
    fmt(a)
    a.set_defaults(func=cmd_asymptotic)

    s = sub.add_parser("simulate", help="seeded Monte Carlo of W and the swap coupling")
    s.add_argument("--board", type=parse_board, required=True)
    s.add_argument("--k", type=parse_int, required=True)
    s.add_argument("--model", choices=("subset", "independent"), default="subset")
    s.add_argument("--attacks", choices=tuple(_ATTACKS), default="both")
    s.add_argument("--replicas", type=parse_int, default=100_000)
    s.add_argument("--seed", type=parse_int, default=0)
    s.add_argument("--streams", type=parse_int, default=1)
    s.add_argument("--workers", type=int, default=1, help="threads; results do not depend on this")
    s.add_argument("--coupling", action="store_true", help="run the swap coupling instead of plain sampling")
    s.add_argument("--emit-histogram", choices=("tsv",), default=None)
    fmt(s)
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("table", help="the D2 table for n = 11..30, k = 3, 4")
    t.add_argument("--d-form", choices=bd.D_FORMS, default=bd.D_FIGURE)
    fmt(t, ("human", "tsv", "json"), "human")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="containment sweep against exact oracles")
    v.add_argument("--n-max", type=parse_int, default=40)
    v.add_argument("--k-max", type=parse_int, default=40)
    v.add_argument("--boards", type=int, default=50)
    v.add_argument("--seed", type=parse_int, default=7)
    fmt(v)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("ferrers", help="rook and file number enclosures on a Ferrers board")
    f.add_argument("--board", type=parse_board, required=True)
    f.add_argument("--k", type=parse_int, required=True)
    f.add_argument("--mode", choices=bd.MODES, default=bd.EXACT)
    f.add_argument("--s2-form", choices=(bd.FORM_DERIVED, bd.FORM_VERBATIM), default=bd.FORM_DERIVED)
    f.add_argument("--s4-form", choices=(bd.FORM_DERIVED, bd.FORM_VERBATIM), default=bd.FORM_DERIVED)
    f.add_argument("--check", action="store_true")
    fmt(f)
    f.set_defaults(func=cmd_ferrers)

    ab = sub.add_parser("abstract", help="the n = 1e12, k = 2e6 enclosures against the published intervals")
    ab.add_argument("--d-form", choices=bd.D_FORMS, default=bd.D_FIGURE)
    fmt(ab)
    ab.set_defaults(func=cmd_abstract)
    return p


def _human(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, dict) and set(v) == {"exact", "float"}:
                lines.append(f"{pad}{k}: {v['float']!r}  ({v['exact']})")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {x}" if not isinstance(x, (dict, list)) else _human(x, indent) for x in obj)
    return f"{pad}{obj}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "mode", "") is None:
        # exact prefactor when C(n,2) is small, log space otherwise
        args.mode = bd.EXACT if math.comb(args.n, 2) <= bd.EXACT_PREFACTOR_MAX_N else bd.LOG
    try:
        code, out = args.func(args)
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"stirling-bounds: error: {exc}\n")
    except PrecisionBudgetError as exc:
        sys.stderr.write(f"stirling-bounds: precision budget exceeded: {exc}\n")
        return EXIT_PRECISION
    if args.command == "simulate" and args.emit_histogram == "tsv":
        sys.stdout.write("w\tcount\n" + "".join(f"{j}\t{c}\n" for j, c in enumerate(out["w_histogram"])))
        return code
    if isinstance(out, str):
        sys.stdout.write(out)
    elif args.format == "human":
        sys.stdout.write(_human(out) + "\n")
    else:
        sys.stdout.write(dump_json(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
