"""Exact big-integer oracles: Stirling, Bell, rook and file numbers.

Python integers are arbitrary precision, so every value returned here is
exact. The band recurrences keep memory at O(min(m, n - m)) for the
``(n, n - k)`` queries the bound code makes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

ROWS_AND_COLUMNS = "rows-and-columns"
COLUMNS_ONLY = "columns-only"
ATTACK_MODES = (ROWS_AND_COLUMNS, COLUMNS_ONLY)


def _check_nm(n: int, m: int) -> None:
    if n < 0 or m < 0:
        raise ValueError(f"negative argument: n={n}, m={m}")
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")


def stirling2_exact(n: int, m: int) -> int:
    """Stirling number of the second kind S(n, m).

    Works on the lattice (d, j) with d = n - m, where the recurrence
    S(i, j) = j S(i-1, j) + S(i-1, j-1) becomes
    S[d][j] = j S[d-1][j] + S[d][j-1]. Only the shorter axis is stored.
    """
    _check_nm(n, m)
    r = n - m
    if m <= r:
        # vector over j, sweep d
        row = [1] * (m + 1)
        for _ in range(r):
            new = [0] * (m + 1)
            for j in range(1, m + 1):
                new[j] = j * row[j] + new[j - 1]
            row = new
        return row[m]
    # vector over d, sweep j
    col = [1] + [0] * r
    for j in range(1, m + 1):
        new = [1] + [0] * r
        for d in range(1, r + 1):
            new[d] = j * new[d - 1] + col[d]
        col = new
    return col[r]


def stirling1_unsigned_exact(n: int, m: int) -> int:
    """Unsigned Stirling number of the first kind |s(n, m)|.

    Same band layout as :func:`stirling2_exact`, with multiplier
    i - 1 = d + j - 1 in place of j.
    """
    _check_nm(n, m)
    r = n - m
    if m <= r:
        row = [1] * (m + 1)
        for d in range(1, r + 1):
            new = [0] * (m + 1)
            for j in range(1, m + 1):
                new[j] = (d + j - 1) * row[j] + new[j - 1]
            row = new
        return row[m]
    col = [1] + [0] * r
    for j in range(1, m + 1):
        new = [1] + [0] * r
        for d in range(1, r + 1):
            new[d] = (d + j - 1) * new[d - 1] + col[d]
        col = new
    return col[r]


def stirling2_table(n_max: int) -> list[list[int]]:
    """Full triangle S(n, m) for 0 <= m <= n <= n_max."""
    table = [[1]]
    for n in range(1, n_max + 1):
        prev = table[-1]
        row = [0] * (n + 1)
        for m in range(1, n + 1):
            row[m] = (m * prev[m] if m < n else 0) + prev[m - 1]
        table.append(row)
    return table


def stirling1_unsigned_table(n_max: int) -> list[list[int]]:
    """Full triangle |s(n, m)| for 0 <= m <= n <= n_max."""
    table = [[1]]
    for n in range(1, n_max + 1):
        prev = table[-1]
        row = [0] * (n + 1)
        for m in range(1, n + 1):
            row[m] = ((n - 1) * prev[m] if m < n else 0) + prev[m - 1]
        table.append(row)
    return table


def bell_number(n: int) -> int:
    """Bell number B_n via the Bell (Aitken) triangle."""
    if n < 0:
        raise ValueError(f"negative argument: n={n}")
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"negative argument: n={n}")
    return math.factorial(n)


def binomial_exact(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError(f"negative argument: a={a}, b={b}")
    if b > a:
        raise ValueError(f"b={b} exceeds a={a}")
    return math.comb(a, b)


@dataclass(frozen=True)
class FerrersBoard:
    """Left-justified board with non-increasing row lengths.

    Rows are indexed from 0 in partition order (longest first); cell
    ``(i, c)`` with ``0 <= c < rows[i]``. Column ``c`` then occupies rows
    ``0 .. cols[c] - 1``.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        rows = tuple(int(b) for b in self.rows)
        if not rows:
            raise ValueError("board must have at least one row")
        if any(b < 1 for b in rows):
            raise ValueError(f"row lengths must be positive: {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"row lengths must be non-increasing: {rows}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", conjugate_partition(rows))

    @classmethod
    def staircase(cls, n: int) -> "FerrersBoard":
        """Strictly lower triangular cells of an n x n board (rows n-1, ..., 1)."""
        if n < 2:
            raise ValueError(f"staircase needs n >= 2, got {n}")
        return cls(tuple(range(n - 1, 0, -1)))

    @classmethod
    def parse(cls, text: str) -> "FerrersBoard":
        """Parse ``"5,3,3,1"`` or ``"staircase:n"``."""
        text = text.strip()
        if text.startswith("staircase:"):
            return cls.staircase(int(text.split(":", 1)[1]))
        try:
            parts = [int(p) for p in text.split(",") if p.strip()]
        except ValueError as exc:
            raise ValueError(f"cannot parse board {text!r}") from exc
        return cls(tuple(parts))

    @property
    def N(self) -> int:
        return sum(self.rows)

    @property
    def L(self) -> int:
        """Unordered same-row cell pairs."""
        return sum(math.comb(b, 2) for b in self.rows)

    @property
    def L_prime(self) -> int:
        """Unordered same-column cell pairs."""
        return sum(math.comb(b, 2) for b in self.cols)

    def conjugate(self) -> "FerrersBoard":
        return FerrersBoard(self.cols)

    def cells(self) -> list[tuple[int, int]]:
        return [(i, c) for i, b in enumerate(self.rows) for c in range(b)]

    def contains(self, cell: tuple[int, int]) -> bool:
        i, c = cell
        return 0 <= i < len(self.rows) and 0 <= c < self.rows[i]

    def is_staircase(self) -> bool:
        return self.rows == tuple(range(len(self.rows), 0, -1))

    def __str__(self) -> str:
        return ",".join(map(str, self.rows))


def conjugate_partition(parts: Sequence[int]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for b in parts if b >= i) for i in range(1, max(parts) + 1))


@dataclass(frozen=True)
class Placement:
    """k rooks on a board. ``labeled`` keeps the rook order meaningful."""

    board: FerrersBoard
    cells: tuple[tuple[int, int], ...]
    labeled: bool = False
    allow_repeats: bool = False

    def __post_init__(self) -> None:
        for cell in self.cells:
            if not self.board.contains(cell):
                raise ValueError(f"cell {cell} is not on board {self.board}")
        if not self.allow_repeats and len(set(self.cells)) != len(self.cells):
            raise ValueError("repeated cells need allow_repeats=True (independence model)")

    @property
    def k(self) -> int:
        return len(self.cells)


def rook_polynomial(board: FerrersBoard) -> list[int]:
    """Coefficients r_B(0), r_B(1), ... of the rook polynomial.

    Columns are taken shortest first; a column of height h sees j - 1 of
    its rows already used by the earlier j - 1 rooks.
    """
    r = [1]
    for h in sorted(board.cols):
        r.append(0)
        for j in range(len(r) - 1, 0, -1):
            r[j] += max(h - (j - 1), 0) * r[j - 1]
    while len(r) > 1 and r[-1] == 0:
        r.pop()
    return r


def rook_number_exact(board: FerrersBoard, k: int) -> int:
    if k < 0:
        raise ValueError(f"negative rook count: {k}")
    poly = rook_polynomial(board)
    return poly[k] if k < len(poly) else 0


def elementary_symmetric(values: Sequence[int], k: int) -> int:
    if k < 0:
        raise ValueError(f"negative degree: {k}")
    e = [1] + [0] * k
    for x in values:
        for j in range(k, 0, -1):
            e[j] += x * e[j - 1]
    return e[k]


def file_number_exact(board: FerrersBoard, k: int) -> int:
    """f_B(k) = e_k(column heights): one rook per column, rows unrestricted."""
    if k < 0:
        raise ValueError(f"negative rook count: {k}")
    if k > len(board.cols):
        return 0
    return elementary_symmetric(board.cols, k)


def count_attacking_pairs(placement: Placement, mode: str = ROWS_AND_COLUMNS) -> int:
    """Unordered rook pairs sharing a row or a column (or a column only).

    Two rooks on the same cell (independence model) form one attacking pair.
    """
    if mode not in ATTACK_MODES:
        raise ValueError(f"unknown attack mode {mode!r}")
    cols = Counter(c for _, c in placement.cells)
    w = sum(math.comb(v, 2) for v in cols.values())
    if mode == COLUMNS_ONLY:
        return w
    rows = Counter(i for i, _ in placement.cells)
    same = Counter(placement.cells)
    w += sum(math.comb(v, 2) for v in rows.values())
    w -= sum(math.comb(v, 2) for v in same.values())
    return w


def iter_placements(board: FerrersBoard, k: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All k-subsets of cells. Brute force; keep N small."""
    from itertools import combinations

    yield from combinations(board.cells(), k)


def staircase_cell(n: int, row: int, col: int) -> tuple[int, int]:
    """Chess coordinates (row r in 2..n has r - 1 cells, col 1..r-1) to board coordinates."""
    if not (2 <= row <= n and 1 <= col < row):
        raise ValueError(f"({row}, {col}) is not strictly below the diagonal of a {n}x{n} board")
    return (n - row, col - 1)
