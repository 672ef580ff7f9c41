"""Forecast accuracy metrics over a fixed test horizon.

All three metrics share the t = 1 convention: the value before the
first test step is the last training observation, used both as the
previous actual and the previous prediction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateSeries


@dataclass(frozen=True)
class ForecastRun:
    """One method's one-step-ahead predictions over one test horizon."""

    symbol: str
    method: str
    actuals: np.ndarray
    predictions: np.ndarray
    pre_test_actual: float

    def __post_init__(self):
        actuals = np.asarray(self.actuals, dtype=np.float64)
        predictions = np.asarray(self.predictions, dtype=np.float64)
        object.__setattr__(self, "actuals", actuals)
        object.__setattr__(self, "predictions", predictions)
        if actuals.shape != predictions.shape or actuals.ndim != 1:
            raise ValueError(
                f"actuals {actuals.shape} and predictions {predictions.shape} "
                "must be equal-length vectors")
        if len(actuals) < 1:
            raise ValueError("empty test horizon")
        if not np.all(np.isfinite(predictions)):
            raise ValueError("predictions must be finite")
        if not np.all(np.isfinite(actuals)) or not np.isfinite(self.pre_test_actual):
            raise ValueError("actuals must be finite")

    def horizon(self) -> int:
        return len(self.actuals)


def mse(run: ForecastRun) -> float:
    """Mean squared error over the horizon."""
    err = run.actuals - run.predictions
    return float(np.mean(err * err))


def theils_u(run: ForecastRun) -> float:
    """Squared error relative to the naive last-value forecast.

    TU = sum (z_t - zhat_t)^2 / sum (z_t - z_{t-1})^2 with z_0 the last
    training observation. Below 1 means better than naive.
    """
    prev = np.concatenate(([run.pre_test_actual], run.actuals[:-1]))
    denom = float(np.sum((run.actuals - prev) ** 2))
    if denom == 0.0:
        raise DegenerateSeries(
            f"{run.symbol}: constant test actuals, naive denominator is zero")
    num = float(np.sum((run.actuals - run.predictions) ** 2))
    return num / denom


def pocid(run: ForecastRun) -> float:
    """Percentage of correct direction changes, strict sign agreement.

    D_t = 1 iff (zhat_t - zhat_{t-1}) (z_t - z_{t-1}) > 0, with both
    the previous prediction and previous actual at t = 1 being the last
    training observation. Zero moves never count.
    """
    prev_actual = np.concatenate(([run.pre_test_actual], run.actuals[:-1]))
    prev_pred = np.concatenate(([run.pre_test_actual], run.predictions[:-1]))
    agree = (run.predictions - prev_pred) * (run.actuals - prev_actual) > 0.0
    return 100.0 * float(np.mean(agree))


@dataclass(frozen=True)
class MetricReport:
    """All three metrics for one run; theils_u is None when degenerate."""

    mse: float
    theils_u: Optional[float]
    pocid: float


def compute_report(run: ForecastRun) -> MetricReport:
    try:
        tu = theils_u(run)
    except DegenerateSeries:
        tu = None
    return MetricReport(mse=mse(run), theils_u=tu, pocid=pocid(run))
