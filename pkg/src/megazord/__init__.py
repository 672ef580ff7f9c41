"""Hybrid decomposition forecasting for univariate price series.

The pipeline splits a series into trend, seasonal and residual parts
with a trailing moving average, forecasts trend and seasonal components
with small convolutional or recurrent networks, and adds the component
forecasts back together. Classical one-step baselines and nonparametric
rank comparisons ship alongside so the hybrid can be benchmarked end to
end from the command line.
"""

__version__ = "0.1.0"

from .baselines import BASELINE_LABELS, BaselineConfig, rolling_one_step_forecasts
from .data import (
    ObservationRecord,
    SplitSeries,
    UnivariateSeries,
    corpus_symbols,
    extract_close_series,
    holdout_split,
    parse_ohlcv_csv,
)
from .decomposition import (
    DifferencedSeries,
    Decomposition,
    classical_decompose,
    first_difference,
    recompose_forecast,
    trailing_moving_average,
)
from .errors import MegazordError
from .harness import ExperimentConfig, run_and_emit, run_experiment
from .metrics import ForecastRun, MetricReport, compute_report, mse, pocid, theils_u
from .pipeline import (
    VARIANT_LABELS,
    MegazordModel,
    VariantSpec,
    all_variants,
    fit,
    forecast_test,
)
from .ranking import RankResult, ScoreMatrix, nemenyi_cd, rank_methods
from .seeding import stable_seed
from .synthetic import synth_close_series, write_corpus

__all__ = [
    "BASELINE_LABELS",
    "BaselineConfig",
    "Decomposition",
    "DifferencedSeries",
    "ExperimentConfig",
    "ForecastRun",
    "MegazordError",
    "MegazordModel",
    "MetricReport",
    "ObservationRecord",
    "RankResult",
    "ScoreMatrix",
    "SplitSeries",
    "UnivariateSeries",
    "VARIANT_LABELS",
    "VariantSpec",
    "all_variants",
    "classical_decompose",
    "compute_report",
    "corpus_symbols",
    "extract_close_series",
    "first_difference",
    "fit",
    "forecast_test",
    "holdout_split",
    "mse",
    "nemenyi_cd",
    "parse_ohlcv_csv",
    "pocid",
    "rank_methods",
    "recompose_forecast",
    "rolling_one_step_forecasts",
    "run_and_emit",
    "run_experiment",
    "stable_seed",
    "synth_close_series",
    "theils_u",
    "trailing_moving_average",
    "write_corpus",
    "__version__",
]
