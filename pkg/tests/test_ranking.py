"""Ranking protocol: midranks, critical difference, grouping."""
import numpy as np
import pytest
from scipy import stats

from megazord.errors import KOutOfTable, UnsupportedAlpha
from megazord.ranking import (
    NEMENYI_Q_05,
    RankResult,
    ScoreMatrix,
    friedman_ranks,
    friedman_statistic,
    group_methods,
    nemenyi_cd,
    rank_methods,
)


def matrix_of(scores, better="lower"):
    scores = np.asarray(scores, dtype=float)
    methods = tuple(f"m{i}" for i in range(scores.shape[0]))
    series = tuple(f"s{j}" for j in range(scores.shape[1]))
    return ScoreMatrix(methods=methods, series=series, scores=scores, better=better)


def test_embedded_q_values_match_studentized_range():
    # Oracle: q_alpha(k, inf) / sqrt(2) from scipy's studentized range.
    # Entries are published 3-decimal roundings, so allow 1e-3.
    for k, q in NEMENYI_Q_05.items():
        expected = stats.studentized_range.ppf(0.95, k, np.inf) / np.sqrt(2.0)
        assert q == pytest.approx(expected, abs=1e-3), k


def test_nemenyi_cd_twelve_methods():
    # 12 methods over 148 series: 3.268 * sqrt(12*13 / (6*148))
    cd = nemenyi_cd(12, 148)
    assert cd == pytest.approx(3.268 * np.sqrt(156.0 / 888.0), rel=1e-12)
    assert cd == pytest.approx(1.36974, abs=1e-4)


def test_nemenyi_cd_domain():
    with pytest.raises(UnsupportedAlpha):
        nemenyi_cd(5, 10, alpha=0.01)
    with pytest.raises(KOutOfTable):
        nemenyi_cd(21, 10)
    with pytest.raises(KOutOfTable):
        nemenyi_cd(1, 10)
    with pytest.raises(ValueError):
        nemenyi_cd(5, 1)


def test_friedman_midranks_hand_case():
    # series s0: scores 1,1,2 -> ranks 1.5, 1.5, 3
    # series s1: scores 2,3,1 -> ranks 2, 3, 1
    ranks = friedman_ranks(matrix_of([[1.0, 2.0], [1.0, 3.0], [2.0, 1.0]]))
    np.testing.assert_allclose(ranks, [1.75, 2.25, 2.0])


def test_friedman_higher_better_flips_order():
    lower = friedman_ranks(matrix_of([[1.0], [2.0]], better="lower"))
    higher = friedman_ranks(matrix_of([[1.0], [2.0]], better="higher"))
    np.testing.assert_allclose(lower, [1.0, 2.0])
    np.testing.assert_allclose(higher, [2.0, 1.0])


def test_rank_sum_conservation():
    rng = np.random.default_rng(4)
    for _ in range(20):
        k = rng.integers(2, 9)
        n = rng.integers(2, 15)
        ranks = friedman_ranks(matrix_of(rng.standard_normal((k, n))))
        assert ranks.sum() == pytest.approx(k * (k + 1) / 2.0, rel=1e-12)
        assert np.all(ranks >= 1.0) and np.all(ranks <= k)


def test_friedman_statistic_against_scipy():
    rng = np.random.default_rng(5)
    scores = rng.standard_normal((4, 12))
    chi2, p = friedman_statistic(matrix_of(scores))
    ref_chi2, ref_p = stats.friedmanchisquare(*scores)
    assert chi2 == pytest.approx(ref_chi2)
    assert p == pytest.approx(ref_p)


def test_friedman_statistic_undefined_below_three_methods():
    assert friedman_statistic(matrix_of([[1.0, 2.0], [2.0, 1.0]])) == (None, None)


def test_group_methods_frozen_cases():
    # spread 1.8-1.0 and 2.0-1.0 stay under cd=1.1; D is 1.5 beyond C
    groups = group_methods(["A", "B", "C", "D"], [1.0, 1.8, 2.0, 3.5], 1.1)
    assert groups == [["A", "B", "C"], ["D"]]
    # overlapping runs both survive: (A,B) spread .9 < 1, (B,C) spread .9 < 1
    groups = group_methods(["A", "B", "C"], [1.0, 1.9, 2.8], 1.0)
    assert groups == [["A", "B"], ["B", "C"]]
    # nested runs are dropped, singleton kept
    groups = group_methods(["A", "B"], [1.0, 5.0], 0.5)
    assert groups == [["A"], ["B"]]


def test_group_methods_validation():
    with pytest.raises(ValueError):
        group_methods(["A"], [1.0], 0.0)
    with pytest.raises(ValueError):
        group_methods(["A", "B"], [1.0], 1.0)


def test_rank_methods_end_to_end():
    rng = np.random.default_rng(6)
    # method 0 strictly dominates; method 2 strictly worst
    base = rng.standard_normal((1, 20))
    scores = np.vstack([base - 10.0, base, base + 10.0])
    result = rank_methods(matrix_of(scores))
    assert isinstance(result, RankResult)
    np.testing.assert_allclose(result.mean_ranks, [1.0, 2.0, 3.0])
    assert result.cd == pytest.approx(nemenyi_cd(3, 20))
    assert result.groups[0][0] == "m0"
    assert result.friedman_chi2 is not None and result.friedman_p < 1e-6


def test_score_matrix_validation():
    with pytest.raises(ValueError):
        matrix_of([[1.0, np.nan]])
    with pytest.raises(ValueError):
        ScoreMatrix(methods=("a",), series=("s",), scores=[[1.0]], better="lower")
    with pytest.raises(ValueError):
        ScoreMatrix(methods=("a", "a"), series=("s",),
                    scores=[[1.0], [2.0]], better="lower")
    with pytest.raises(ValueError):
        ScoreMatrix(methods=("a", "b"), series=("s",),
                    scores=[[1.0], [2.0]], better="down")
