import math
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stirling_bounds.exact import (
    COLUMNS_ONLY,
    ROWS_AND_COLUMNS,
    FerrersBoard,
    Placement,
    bell_number,
    binomial_exact,
    count_attacking_pairs,
    factorial,
    file_number_exact,
    iter_placements,
    rook_number_exact,
    rook_polynomial,
    staircase_cell,
    stirling1_unsigned_exact,
    stirling1_unsigned_table,
    stirling2_exact,
    stirling2_table,
)

partitions = st.lists(st.integers(1, 7), min_size=1, max_size=6).map(lambda xs: tuple(sorted(xs, reverse=True)))


def brute_rooks(board, k, columns_only=False):
    count = 0
    for cells in iter_placements(board, k):
        w = count_attacking_pairs(Placement(board, cells), COLUMNS_ONLY if columns_only else ROWS_AND_COLUMNS)
        count += w == 0
    return count


# --- Stirling numbers -------------------------------------------------------


@pytest.mark.parametrize(
    "n, m, value", [(5, 2, 15), (7, 7, 1), (10, 8, 750), (0, 0, 1), (4, 0, 0), (6, 3, 90)]
)
def test_stirling2_examples(n, m, value):
    assert stirling2_exact(n, m) == value


@pytest.mark.parametrize("n, m, value", [(6, 1, 120), (4, 4, 1), (4, 2, 11), (5, 3, 35), (0, 0, 1)])
def test_stirling1_examples(n, m, value):
    assert stirling1_unsigned_exact(n, m) == value


@pytest.mark.parametrize("fn", [stirling2_exact, stirling1_unsigned_exact])
@pytest.mark.parametrize("n, m", [(3, 4), (-1, 0), (2, -1)])
def test_stirling_rejects_bad_input(fn, n, m):
    with pytest.raises(ValueError):
        fn(n, m)


def test_band_matches_full_table():
    s2, s1 = stirling2_table(45), stirling1_unsigned_table(45)
    for n in range(46):
        for m in range(n + 1):
            assert stirling2_exact(n, m) == s2[n][m]
            assert stirling1_unsigned_exact(n, m) == s1[n][m]


def test_row_sums():
    s2, s1 = stirling2_table(60), stirling1_unsigned_table(60)
    for n in range(1, 61):
        assert sum(s1[n]) == factorial(n)
        assert sum(s2[n]) == bell_number(n)


def test_closed_forms_small_m():
    for n in range(2, 40):
        assert stirling2_exact(n, 2) == 2 ** (n - 1) - 1
        assert stirling1_unsigned_exact(n, 1) == math.factorial(n - 1)
        # harmonic number H_{n-1}, not H_n
        h = sum(math.factorial(n - 1) // j for j in range(1, n))
        assert stirling1_unsigned_exact(n, 2) == h


def test_polynomial_identities():
    s2, s1 = stirling2_table(12), stirling1_unsigned_table(12)
    for n in range(13):
        for x in range(13):
            falling = math.prod(x - i for i in range(n))
            assert sum((-1) ** (n - m) * s1[n][m] * x**m for m in range(n + 1)) == falling
            assert sum(s2[n][m] * math.prod(x - i for i in range(m)) for m in range(n + 1)) == x**n


def test_bell_factorial_binomial():
    assert bell_number(0) == 1
    assert [bell_number(n) for n in range(1, 8)] == [1, 2, 5, 15, 52, 203, 877]
    assert factorial(5) == 120
    assert binomial_exact(6, 2) == 15
    with pytest.raises(ValueError):
        binomial_exact(2, 6)
    with pytest.raises(ValueError):
        factorial(-1)


@given(st.integers(0, 80), st.data())
def test_triangle_recurrences(n, data):
    m = data.draw(st.integers(1, n + 1))
    assert stirling2_exact(n + 1, m) == m * (stirling2_exact(n, m) if m <= n else 0) + stirling2_exact(n, m - 1)
    s1 = stirling1_unsigned_exact(n, m) if m <= n else 0
    assert stirling1_unsigned_exact(n + 1, m) == n * s1 + stirling1_unsigned_exact(n, m - 1)


# --- boards ---------------------------------------------------------------


def test_board_basics():
    b = FerrersBoard.parse("5,3,3,1")
    assert b.cols == (4, 3, 3, 1, 1)
    assert b.N == 12 == sum(b.cols)
    assert b.conjugate().conjugate() == b
    assert str(b) == "5,3,3,1"
    s = FerrersBoard.parse("staircase:6")
    assert s.rows == (5, 4, 3, 2, 1) and s.is_staircase()
    assert s.L == s.L_prime == math.comb(6, 3)
    for bad in ("3,5", "0", "", "a,b", "staircase:1"):
        with pytest.raises(ValueError):
            FerrersBoard.parse(bad)


@given(partitions)
def test_conjugate_involution(rows):
    b = FerrersBoard(rows)
    assert b.conjugate().conjugate() == b
    assert b.N == sum(b.cols)


def test_placement_validation():
    b = FerrersBoard((2, 1))
    with pytest.raises(ValueError):
        Placement(b, ((1, 1),))
    with pytest.raises(ValueError):
        Placement(b, ((0, 0), (0, 0)))
    Placement(b, ((0, 0), (0, 0)), labeled=True, allow_repeats=True)


# --- rook and file numbers --------------------------------------------------


def test_rook_examples():
    assert rook_number_exact(FerrersBoard.staircase(10), 2) == 750
    assert rook_number_exact(FerrersBoard((3,)), 2) == 0
    assert rook_number_exact(FerrersBoard((4, 2)), 0) == 1
    assert rook_number_exact(FerrersBoard((1,)), 5) == 0


def test_file_examples():
    assert file_number_exact(FerrersBoard.staircase(4), 2) == 11
    assert file_number_exact(FerrersBoard((2, 1)), 2) == 2
    assert file_number_exact(FerrersBoard((4, 2)), 0) == 1
    assert file_number_exact(FerrersBoard((3,)), 4) == 0


def test_staircase_gives_stirling_numbers():
    for n in range(2, 26):
        board = FerrersBoard.staircase(n)
        poly = rook_polynomial(board)
        for k in range(n):
            assert rook_number_exact(board, k) == stirling2_exact(n, n - k)
            assert file_number_exact(board, k) == stirling1_unsigned_exact(n, n - k)
        assert len(poly) == n


@settings(max_examples=60, deadline=None)
@given(partitions.filter(lambda r: sum(r) <= 14), st.integers(0, 5))
def test_dp_matches_brute_force(rows, k):
    board = FerrersBoard(rows)
    if k > board.N:
        assert rook_number_exact(board, k) == 0
        return
    assert rook_number_exact(board, k) == brute_rooks(board, k)
    assert file_number_exact(board, k) == brute_rooks(board, k, columns_only=True)


@given(partitions, st.integers(0, 6))
def test_rook_number_conjugation_invariant(rows, k):
    b = FerrersBoard(rows)
    assert rook_number_exact(b, k) == rook_number_exact(b.conjugate(), k)


@given(partitions, st.integers(0, 6), st.randoms())
def test_file_number_symmetric_in_heights(rows, k, rnd):
    from stirling_bounds.exact import elementary_symmetric

    b = FerrersBoard(rows)
    heights = list(b.cols)
    rnd.shuffle(heights)
    assert elementary_symmetric(heights, k) == file_number_exact(b, k)


# --- attack counts ----------------------------------------------------------


def test_attack_examples():
    b = FerrersBoard.staircase(8)
    cells = tuple(staircase_cell(8, r, c) for r, c in ((5, 1), (5, 3), (7, 3)))
    assert count_attacking_pairs(Placement(b, cells), ROWS_AND_COLUMNS) == 2
    col = FerrersBoard((3, 3, 3))
    three = Placement(col, ((0, 1), (1, 1), (2, 1)))
    assert count_attacking_pairs(three, COLUMNS_ONLY) == 3
    free = Placement(col, ((0, 0), (1, 1), (2, 2)))
    assert count_attacking_pairs(free, ROWS_AND_COLUMNS) == 0
    with pytest.raises(ValueError):
        staircase_cell(8, 5, 5)


def test_same_cell_counts_once():
    b = FerrersBoard((2, 2))
    p = Placement(b, ((0, 0), (0, 0)), labeled=True, allow_repeats=True)
    assert count_attacking_pairs(p, ROWS_AND_COLUMNS) == 1
    assert count_attacking_pairs(p, COLUMNS_ONLY) == 1


def test_staircase_pair_counts():
    # ordered same-row-or-column pairs, same cell included: n(n-1)(4n-5)/6
    for n in range(3, 9):
        board = FerrersBoard.staircase(n)
        cells = board.cells()
        both = cols = 0
        for a, b in product(cells, repeat=2):
            p = Placement(board, (a, b), labeled=True, allow_repeats=True)
            both += count_attacking_pairs(p, ROWS_AND_COLUMNS)
            cols += count_attacking_pairs(p, COLUMNS_ONLY)
        assert both == n * (n - 1) * (4 * n - 5) // 6
        assert cols == n * (n - 1) * (2 * n - 1) // 6
    unordered = sum(1 for a, b in combinations(FerrersBoard.staircase(4).cells(), 2) if a[1] == b[1])
    assert unordered == math.comb(4, 3)
