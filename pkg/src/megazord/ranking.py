"""Friedman mean ranks and Nemenyi critical-difference grouping.

Methods are ranked per series (1 = best, midranks on ties), ranks are
averaged across series, and methods whose mean ranks differ by less
than the critical difference CD = q_alpha(k) * sqrt(k(k+1) / (6n))
cannot be separated. The q table is embedded (alpha = 0.05, k = 2..20)
so ranking needs no statistical tables at runtime; the Friedman
omnibus statistic is computed alongside for reporting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from .errors import KOutOfTable, UnsupportedAlpha

# Studentized range upper 5% quantile at infinite df, divided by sqrt(2).
NEMENYI_Q_05 = {
    2: 1.960, 3: 2.343, 4: 2.569, 5: 2.728, 6: 2.850, 7: 2.949, 8: 3.031,
    9: 3.102, 10: 3.164, 11: 3.219, 12: 3.268, 13: 3.313, 14: 3.354,
    15: 3.391, 16: 3.426, 17: 3.458, 18: 3.489, 19: 3.517, 20: 3.544,
}

BETTER_DIRECTIONS = ("lower", "higher")


@dataclass(frozen=True)
class ScoreMatrix:
    """scores[i, j] is methods[i]'s score on series[j]."""

    methods: tuple
    series: tuple
    scores: np.ndarray
    better: str

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "series", tuple(self.series))
        scores = np.asarray(self.scores, dtype=np.float64)
        object.__setattr__(self, "scores", scores)
        if self.better not in BETTER_DIRECTIONS:
            raise ValueError(f"better must be one of {BETTER_DIRECTIONS}, got {self.better!r}")
        if scores.shape != (len(self.methods), len(self.series)):
            raise ValueError(f"scores shaped {scores.shape}, expected "
                             f"({len(self.methods)}, {len(self.series)})")
        if len(self.methods) < 2:
            raise ValueError("need at least 2 methods to rank")
        if len(self.series) < 1:
            raise ValueError("need at least 1 series to rank")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("duplicate method names")
        if not np.all(np.isfinite(scores)):
            raise ValueError("scores must be finite")


def friedman_ranks(matrix: ScoreMatrix) -> np.ndarray:
    """Mean rank per method; rank 1 is best, ties get midranks."""
    oriented = matrix.scores if matrix.better == "lower" else -matrix.scores
    per_series = stats.rankdata(oriented, method="average", axis=0)
    return per_series.mean(axis=1)


def friedman_statistic(matrix: ScoreMatrix):
    """Friedman omnibus chi-square and p-value (None, None when undefined)."""
    if len(matrix.methods) < 3:
        return None, None
    try:
        chi2, p = stats.friedmanchisquare(*matrix.scores)
    except ValueError:
        return None, None
    return float(chi2), float(p)


def nemenyi_cd(k: int, n: int, alpha: float = 0.05) -> float:
    """Critical difference for k methods compared over n series."""
    if alpha != 0.05:
        raise UnsupportedAlpha(f"embedded table covers alpha = 0.05 only, got {alpha}")
    if k not in NEMENYI_Q_05:
        raise KOutOfTable(f"k must lie in 2..20, got {k}")
    if n < 2:
        raise ValueError(f"need at least 2 series, got {n}")
    return NEMENYI_Q_05[k] * math.sqrt(k * (k + 1) / (6.0 * n))


def group_methods(methods, mean_ranks, cd: float) -> list:
    """Maximal contiguous runs of rank-sorted methods with spread < cd.

    Runs fully contained in a larger run are dropped; a method that
    groups with nothing forms a singleton.
    """
    if cd <= 0:
        raise ValueError(f"cd must be positive, got {cd}")
    methods = list(methods)
    ranks = np.asarray(mean_ranks, dtype=np.float64)
    if len(methods) != len(ranks):
        raise ValueError("methods and mean_ranks must have equal length")
    order = sorted(range(len(methods)), key=lambda i: (ranks[i], methods[i]))
    groups = []
    prev_end = -1
    for start in range(len(order)):
        end = start
        while end + 1 < len(order) and ranks[order[end + 1]] - ranks[order[start]] < cd:
            end += 1
        if end > prev_end:
            groups.append([methods[i] for i in order[start:end + 1]])
            prev_end = end
    return groups


@dataclass(frozen=True)
class RankResult:
    """Friedman mean ranks with Nemenyi grouping for one metric."""

    methods: tuple
    mean_ranks: np.ndarray
    cd: float
    groups: tuple
    friedman_chi2: Optional[float]
    friedman_p: Optional[float]


def rank_methods(matrix: ScoreMatrix, alpha: float = 0.05) -> RankResult:
    """Full ranking protocol over one score matrix."""
    mean_ranks = friedman_ranks(matrix)
    cd = nemenyi_cd(len(matrix.methods), len(matrix.series), alpha)
    groups = group_methods(matrix.methods, mean_ranks, cd)
    chi2, p = friedman_statistic(matrix)
    return RankResult(methods=matrix.methods, mean_ranks=mean_ranks, cd=cd,
                      groups=tuple(tuple(g) for g in groups),
                      friedman_chi2=chi2, friedman_p=p)
