"""Certified enclosures for Stirling numbers and rook/file numbers of Ferrers boards."""

from .bounds import BoundReport, Enclosure, FerrersBoundReport, IndepBoundReport, mu, theorem4_bound, theorem5_bound, theorem6_bound
from .exact import (
    FerrersBoard,
    Placement,
    bell_number,
    binomial_exact,
    count_attacking_pairs,
    factorial,
    file_number_exact,
    rook_number_exact,
    stirling1_unsigned_exact,
    stirling2_exact,
)
from .intervals import LogInterval, PrecisionBudgetError, log_binomial

__all__ = [
    "BoundReport", "Enclosure", "FerrersBoard", "FerrersBoundReport", "IndepBoundReport", "LogInterval",
    "Placement", "PrecisionBudgetError", "bell_number", "binomial_exact", "count_attacking_pairs", "factorial",
    "file_number_exact", "log_binomial", "mu", "rook_number_exact", "stirling1_unsigned_exact",
    "stirling2_exact", "theorem4_bound", "theorem5_bound", "theorem6_bound",
]
