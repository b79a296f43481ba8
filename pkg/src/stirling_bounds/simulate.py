"""Seeded Monte Carlo for random rook placements and the swap coupling.

Every replica block is driven by its own Philox stream derived from
``SeedSequence(seed, spawn_key=(stream,))``. Replicas are split into
contiguous blocks, one per stream, and all accumulators are integers, so
the merged result does not depend on how streams are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .exact import ATTACK_MODES, COLUMNS_ONLY, ROWS_AND_COLUMNS, FerrersBoard, Placement

SUBSET = "subset"
INDEPENDENT = "independent"
MODELS = (SUBSET, INDEPENDENT)

RNG_NAME = "numpy Philox4x64-10, SeedSequence(seed, spawn_key=(stream,))"
CASES = ("1", "2a", "2b", "3a", "3b", "3c")
DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    board: FerrersBoard
    k: int
    model: str = SUBSET
    attacks: str = ROWS_AND_COLUMNS
    replicas: int = 10_000
    seed: int = 0
    streams: int = 1
    chunk: int = DEFAULT_CHUNK

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.attacks not in ATTACK_MODES:
            raise ValueError(f"unknown attack mode {self.attacks!r}")
        if self.k < 0:
            raise ValueError(f"negative k={self.k}")
        if self.model == SUBSET and self.k > self.board.N:
            raise ValueError(f"k={self.k} exceeds board size N={self.board.N}")
        if self.replicas < 1 or self.streams < 1 or self.chunk < 1:
            raise ValueError("replicas, streams and chunk must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_json(self) -> dict:
        return {
            "board": str(self.board), "k": self.k, "model": self.model, "attacks": self.attacks,
            "replicas": self.replicas, "seed": self.seed, "streams": self.streams, "chunk": self.chunk,
        }


@dataclass
class SimulationResult:
    config: SimConfig
    lam: Fraction
    histogram: list[int]
    abs_diff_sum: int = 0
    abs_diff_sq_sum: int = 0
    case_counts: dict = field(default_factory=dict)
    unit_case_violations: int = 0
    coupling: bool = False

    @property
    def replicas(self) -> int:
        return self.config.replicas

    @property
    def p_w0_hat(self) -> float:
        return self.histogram[0] / self.replicas

    @property
    def p_w0_se(self) -> float:
        p = self.p_w0_hat
        return math.sqrt(p * (1 - p) / self.replicas)

    @property
    def tv_hat(self) -> float:
        return empirical_tv_to_poisson(self.histogram, float(self.lam))

    @property
    def e_wv_hat(self) -> Optional[float]:
        return self.abs_diff_sum / self.replicas if self.coupling else None

    @property
    def e_wv_se(self) -> Optional[float]:
        if not self.coupling:
            return None
        r = self.replicas
        mean = self.abs_diff_sum / r
        var = max(self.abs_diff_sq_sum / r - mean * mean, 0.0)
        return math.sqrt(var / r)

    def case_frequency(self, case: str) -> float:
        return self.case_counts.get(case, 0) / self.replicas

    def case_se(self, case: str) -> float:
        p = self.case_frequency(case)
        return math.sqrt(p * (1 - p) / self.replicas)

    def to_json(self) -> dict:
        out = {
            "config": self.config.to_json(),
            "rng": RNG_NAME,
            "lambda": {"exact": f"{self.lam.numerator}/{self.lam.denominator}", "float": float(self.lam)},
            "p_w0_hat": self.p_w0_hat,
            "p_w0_se": self.p_w0_se,
            "w_histogram": list(self.histogram),
            "tv_hat": self.tv_hat,
        }
        if self.coupling:
            out["e_wv_hat"] = self.e_wv_hat
            out["e_wv_se"] = self.e_wv_se
            out["case_counts"] = {c: self.case_counts.get(c, 0) for c in CASES}
            out["case_frequencies"] = {c: self.case_frequency(c) for c in CASES}
            out["unit_case_violations"] = self.unit_case_violations
        return out


# ---------------------------------------------------------------------------
# Poisson law


def poisson_pmf(lam: float, j: int) -> float:
    """e^{-lam} lam^j / j!, evaluated through logs."""
    if lam <= 0:
        raise ValueError(f"rate must be positive, got {lam}")
    if j < 0:
        raise ValueError(f"negative index {j}")
    return math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1.0))


def poisson_tail(lam: float, start: int) -> float:
    """sum_{j >= start} p(j), summed term by term until negligible."""
    if start <= 0:
        return 1.0
    terms = []
    j = start
    while True:
        p = poisson_pmf(lam, j)
        terms.append(p)
        if j > lam and p < 1e-20:
            break
        j += 1
    return math.fsum(terms)


def empirical_tv_to_poisson(histogram, lam: float) -> float:
    """(1/2) sum_j |h(j) - p(j)|, with the Poisson mass past the support added."""
    if lam <= 0:
        raise ValueError(f"rate must be positive, got {lam}")
    counts = [int(c) for c in getattr(histogram, "histogram", histogram)]
    total = sum(counts)
    if total == 0:
        raise ValueError("empty histogram")
    diffs = [abs(c / total - poisson_pmf(lam, j)) for j, c in enumerate(counts)]
    diffs.append(poisson_tail(lam, len(counts)))
    return min(max(0.5 * math.fsum(diffs), 0.0), 1.0)


def poisson_rate(board: FerrersBoard, k: int, model: str, attacks: str) -> Fraction:
    """Exact E[W] for the chosen model."""
    pairs = math.comb(k, 2)
    N = board.N
    if model == SUBSET:
        if N < 2:
            return Fraction(0)
        lines = board.L_prime if attacks == COLUMNS_ONLY else board.L + board.L_prime
        return Fraction(pairs * lines, math.comb(N, 2))
    # two i.i.d. cells attack when they share a column (or row); same cell included
    ordered = N + 2 * board.L_prime + (0 if attacks == COLUMNS_ONLY else 2 * board.L)
    return Fraction(pairs * ordered, N * N)


# ---------------------------------------------------------------------------
# sampling


class _BoardArrays:
    """Cell index <-> (row, col) lookups and line tables for pair sampling."""

    def __init__(self, board: FerrersBoard):
        rows = np.asarray(board.rows, dtype=np.int64)
        cols = np.asarray(board.cols, dtype=np.int64)
        self.N = board.N
        self.row_start = np.concatenate([[0], np.cumsum(rows)[:-1]])
        self.row_of = np.repeat(np.arange(len(rows)), rows)
        self.col_of = np.concatenate([np.arange(b) for b in rows])
        self.rows, self.cols = rows, cols
        self.row_cum = np.cumsum(rows * (rows - 1) // 2)
        self.col_cum = np.cumsum(cols * (cols - 1) // 2)
        self.L = int(self.row_cum[-1])
        self.Lp = int(self.col_cum[-1]) if len(cols) else 0


def _streams(config: SimConfig) -> list[tuple[int, int]]:
    R, S = config.replicas, config.streams
    return [((s * R) // S, ((s + 1) * R) // S) for s in range(S)]


def _rng(config: SimConfig, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(config.seed, spawn_key=(stream,))))


def _draw_cells(rng: np.random.Generator, N: int, k: int, size: int, model: str, ordered: bool) -> np.ndarray:
    """(size, k) cell indices: uniform k-subsets (Floyd) or i.i.d. cells."""
    if model == INDEPENDENT:
        return rng.integers(0, N, size=(size, k))
    out = np.empty((size, k), dtype=np.int64)
    for i, j in enumerate(range(N - k, N)):
        t = rng.integers(0, j + 1, size=size)
        dup = (out[:, :i] == t[:, None]).any(axis=1) if i else np.zeros(size, dtype=bool)
        out[:, i] = np.where(dup, j, t)
    if ordered:
        out = rng.permuted(out, axis=1)
    return out


def _attack_matrix(cells: np.ndarray, arrays: _BoardArrays, attacks: str) -> np.ndarray:
    """(size, k, k) upper-triangular boolean attack indicator."""
    c = arrays.col_of[cells]
    hit = c[:, :, None] == c[:, None, :]
    if attacks == ROWS_AND_COLUMNS:
        r = arrays.row_of[cells]
        hit |= r[:, :, None] == r[:, None, :]
    k = cells.shape[1]
    return hit & np.triu(np.ones((k, k), dtype=bool), 1)


def _attack_counts(cells: np.ndarray, arrays: _BoardArrays, attacks: str) -> np.ndarray:
    return _attack_matrix(cells, arrays, attacks).sum(axis=(1, 2))


def sample_placements(config: SimConfig) -> Iterator[Placement]:
    """Yield one Placement per replica in stream order. Slow; for inspection and tests."""
    arrays = _BoardArrays(config.board)
    labeled = config.model == INDEPENDENT
    for s, (a, b) in enumerate(_streams(config)):
        rng = _rng(config, s)
        for start in range(a, b, config.chunk):
            size = min(config.chunk, b - start)
            cells = _draw_cells(rng, arrays.N, config.k, size, config.model, ordered=False)
            for row in cells:
                yield Placement(
                    config.board,
                    tuple((int(arrays.row_of[x]), int(arrays.col_of[x])) for x in row),
                    labeled=labeled,
                    allow_repeats=labeled,
                )


def _run_streams(config: SimConfig, worker, workers: int) -> list:
    blocks = list(enumerate(_streams(config)))
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda sb: worker(*sb), blocks))
    return [worker(*sb) for sb in blocks]


def _merge_hist(parts: list[np.ndarray]) -> list[int]:
    size = max(len(p) for p in parts)
    total = np.zeros(size, dtype=np.int64)
    for p in parts:
        total[: len(p)] += p
    return [int(x) for x in total]


def estimate_p_w0(config: SimConfig, workers: int = 1) -> SimulationResult:
    """Histogram of W and the empirical P(W = 0)."""
    arrays = _BoardArrays(config.board)
    lam = poisson_rate(config.board, config.k, config.model, config.attacks)

    def worker(stream: int, block: tuple[int, int]) -> np.ndarray:
        rng = _rng(config, stream)
        hist = np.zeros(1, dtype=np.int64)
        a, b = block
        for start in range(a, b, config.chunk):
            size = min(config.chunk, b - start)
            if config.k < 2:
                w = np.zeros(size, dtype=np.int64)
            else:
                cells = _draw_cells(rng, arrays.N, config.k, size, config.model, ordered=False)
                w = _attack_counts(cells, arrays, config.attacks)
            h = np.bincount(w)
            if len(h) > len(hist):
                hist = np.concatenate([hist, np.zeros(len(h) - len(hist), dtype=np.int64)])
            hist[: len(h)] += h
        return hist

    hist = _merge_hist(_run_streams(config, worker, workers))
    return SimulationResult(config=config, lam=lam, histogram=hist)


def _attacking_pairs(rng: np.random.Generator, arrays: _BoardArrays, size: int, attacks: str):
    """Ordered (I, J), uniform over attacking position pairs."""
    L = 0 if attacks == COLUMNS_ONLY else arrays.L
    total = L + arrays.Lp
    if total == 0:
        raise ValueError("board has no attacking position pairs")
    u = rng.integers(0, total, size=size)
    in_row = u < L
    I = np.empty(size, dtype=np.int64)
    J = np.empty(size, dtype=np.int64)
    if in_row.any():
        line = np.searchsorted(arrays.row_cum, u[in_row], side="right")
        width = arrays.rows[line]
        a = rng.integers(0, width)
        b = rng.integers(0, width - 1)
        b = b + (b >= a)
        base = arrays.row_start[line]
        I[in_row], J[in_row] = base + a, base + b
    col = ~in_row
    if col.any():
        line = np.searchsorted(arrays.col_cum, u[col] - L, side="right")
        height = arrays.cols[line]
        a = rng.integers(0, height)
        b = rng.integers(0, height - 1)
        b = b + (b >= a)
        I[col] = arrays.row_start[a] + line
        J[col] = arrays.row_start[b] + line
    return I, J


def _swap_into(pos: np.ndarray, label: int, target: np.ndarray) -> None:
    """Transposition (pos[label] target): whichever rook sits at target takes pos[label]."""
    old = pos[:, label].copy()
    hit = pos == target[:, None]
    rows, cols = np.nonzero(hit)
    pos[rows, cols] = old[rows]
    pos[:, label] = target


def _classify(pos: np.ndarray, I: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Case index into CASES for each replica, from the pre-swap positions."""
    p1, p2 = pos[:, 0], pos[:, 1]
    in1 = (p1 == I) | (p1 == J)
    in2 = (p2 == I) | (p2 == J)
    overlap = in1.astype(np.int64) + in2
    others = pos[:, 2:]
    vis_I = (others == I[:, None]).any(axis=1)
    vis_J = (others == J[:, None]).any(axis=1)
    visible = vis_I.astype(np.int64) + vis_J
    case = np.where(overlap == 2, 0, 0)
    case = np.where(overlap == 1, np.where(visible == 1, 1, 2), case)
    case = np.where(overlap == 0, np.select([visible == 2, visible == 1], [3, 4], 5), case)
    return case


def simulate_coupling(config: SimConfig, workers: int = 1) -> SimulationResult:
    """Run the swap coupling for alpha = {rook 1, rook 2}.

    Per replica: a uniform labelled arrangement of k rooks, an ordered
    attacking pair (I, J), the swap (pi_2 J) then (pi*_1 I), and
    |W(pi) - V_alpha(pi')| with the alpha term left out of V_alpha.
    """
    if config.model != SUBSET:
        raise ValueError("the swap coupling is defined for the subset model")
    if config.k < 2:
        raise ValueError(f"coupling needs k >= 2, got {config.k}")
    arrays = _BoardArrays(config.board)
    lam = poisson_rate(config.board, config.k, config.model, config.attacks)
    k = config.k

    def worker(stream: int, block: tuple[int, int]):
        rng = _rng(config, stream)
        hist = np.zeros(1, dtype=np.int64)
        cases = np.zeros(len(CASES), dtype=np.int64)
        s1 = s2 = bad = 0
        a, b = block
        for start in range(a, b, config.chunk):
            size = min(config.chunk, b - start)
            pos = _draw_cells(rng, arrays.N, k, size, SUBSET, ordered=True)
            I, J = _attacking_pairs(rng, arrays, size, config.attacks)
            case = _classify(pos, I, J)
            W = _attack_counts(pos, arrays, config.attacks)
            new = pos.copy()
            _swap_into(new, 1, J)
            _swap_into(new, 0, I)
            M = _attack_matrix(new, arrays, config.attacks)
            V = M.sum(axis=(1, 2)) - M[:, 0, 1]
            d = np.abs(W - V)
            h = np.bincount(W)
            if len(h) > len(hist):
                hist = np.concatenate([hist, np.zeros(len(h) - len(hist), dtype=np.int64)])
            hist[: len(h)] += h
            cases += np.bincount(case, minlength=len(CASES))
            s1 += int(d.sum())
            s2 += int((d * d).sum())
            unit = np.isin(case, (0, 1, 3))
            bad += int((d[unit] != 1).sum())
        return hist, cases, s1, s2, bad

    parts = _run_streams(config, worker, workers)
    hist = _merge_hist([p[0] for p in parts])
    cases = sum(p[1] for p in parts)
    return SimulationResult(
        config=config,
        lam=lam,
        histogram=hist,
        abs_diff_sum=sum(p[2] for p in parts),
        abs_diff_sq_sum=sum(p[3] for p in parts),
        case_counts={c: int(n) for c, n in zip(CASES, cases)},
        unit_case_violations=sum(p[4] for p in parts),
        coupling=True,
    )


def exact_case_probabilities(N: int, k: int) -> dict:
    """Probabilities of the unit cases under the uniform arrangement.

    A unit case occurs exactly when the two visible rooks that end up
    occupying {I, J} are named in advance: {1,2} (case 1), one of {1,2}
    with one of 3..k (case 2a), or two of 3..k (case 3a).
    """
    CN2 = math.comb(N, 2)
    return {
        "1": Fraction(1, CN2),
        "2a": Fraction(2 * (k - 2), CN2),
        "3a": Fraction(math.comb(k - 2, 2), CN2),
    }


def printed_case_probabilities(N: int, k: int) -> dict:
    CN2 = math.comb(N, 2)
    return {
        "1": Fraction(1, CN2),
        "2a": Fraction(3 * (k - 2), CN2),
        "3a": Fraction(3 * (k - 2) * (k - 3), CN2),
    }
