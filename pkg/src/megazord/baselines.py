"""Classical one-step forecasters and the expanding-window runner.

Each forecaster maps an observed history to a single next-value
forecast. The runner refits every method from scratch on the expanding
actual history at each test step, so baselines see exactly the same
information as the neural pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import SplitSeries
from .errors import NotEnoughCandidates, SeriesTooShort, WindowTooLarge
from .metrics import ForecastRun


@dataclass(frozen=True)
class BaselineConfig:
    ses_alpha: float = 0.95
    ma_window: int = 10
    knn_window: int = 5
    knn_k: int = 3
    rw_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.ses_alpha <= 1.0:
            raise ValueError(f"ses_alpha must lie in (0, 1], got {self.ses_alpha}")
        if self.ma_window < 1 or self.knn_window < 1 or self.knn_k < 1:
            raise ValueError("window and neighbor counts must be positive")


def fit_ar1(values) -> np.ndarray:
    """Least-squares (c, phi) for z_t = c + phi * z_{t-1}.

    Solved via lstsq, so a constant history degenerates gracefully to
    predicting that constant.
    """
    values = np.asarray(values, dtype=np.float64)
    if len(values) < 3:
        raise SeriesTooShort(f"AR(1) needs at least 3 observations, got {len(values)}")
    design = np.column_stack([np.ones(len(values) - 1), values[:-1]])
    coef, _, _, _ = np.linalg.lstsq(design, values[1:], rcond=None)
    return coef


def forecast_ar1(history) -> float:
    """ARIMA(1,0,0): intercept-plus-lag regression on levels."""
    history = np.asarray(history, dtype=np.float64)
    c, phi = fit_ar1(history)
    return float(c + phi * history[-1])


def forecast_arima110(history) -> float:
    """ARIMA(1,1,0): AR(1) with intercept on first differences."""
    history = np.asarray(history, dtype=np.float64)
    if len(history) < 4:
        raise SeriesTooShort(f"ARIMA(1,1,0) needs at least 4 observations, got {len(history)}")
    diffs = np.diff(history)
    c, phi = fit_ar1(diffs)
    return float(history[-1] + c + phi * diffs[-1])


def forecast_rw(history, rng) -> float:
    """ARIMA(0,1,0) with drift noise: last value plus a seeded Gaussian
    innovation scaled by the sample std of historical differences."""
    history = np.asarray(history, dtype=np.float64)
    if len(history) < 2:
        raise SeriesTooShort(f"random walk needs at least 2 observations, got {len(history)}")
    diffs = np.diff(history)
    sigma = float(np.std(diffs, ddof=1)) if len(diffs) >= 2 else 0.0
    return float(history[-1] + rng.normal(0.0, sigma))


def forecast_ses(history, alpha: float = 0.95) -> float:
    """Simple exponential smoothing: s_1 = z_1, s_t = alpha z_t + (1-alpha) s_{t-1}."""
    history = np.asarray(history, dtype=np.float64)
    if len(history) < 1:
        raise SeriesTooShort("SES needs at least 1 observation")
    s = history[0]
    for v in history[1:]:
        s = alpha * v + (1.0 - alpha) * s
    return float(s)


def forecast_ma(history, window: int = 10) -> float:
    """Mean of the last ``window`` observations."""
    history = np.asarray(history, dtype=np.float64)
    if len(history) < window:
        raise WindowTooLarge(f"MA window {window} exceeds history length {len(history)}")
    return float(history[-window:].mean())


def forecast_knn_tsp(history, window: int = 5, k: int = 3) -> float:
    """Nearest past windows vote on the next value.

    Candidates are all windows with an observed successor (the query
    window itself has none, so it is excluded by construction);
    distance is Euclidean on raw values, ties go to the earlier window,
    and the forecast is the mean of the k successors.
    """
    history = np.asarray(history, dtype=np.float64)
    n = len(history)
    if n < window + k:
        raise NotEnoughCandidates(
            f"kNN-TSP needs at least window + k = {window + k} observations, got {n}")
    all_windows = np.lib.stride_tricks.sliding_window_view(history, window)
    candidates = all_windows[:-1]
    query = history[-window:]
    d2 = ((candidates - query) ** 2).sum(axis=1)
    nearest = np.argsort(d2, kind="stable")[:k]
    return float(history[nearest + window].mean())


BASELINE_LABELS = ("arima", "ar", "rw", "ses", "ma", "knn_tsp")


def _step(method: str, history, config: BaselineConfig, rng) -> float:
    if method == "arima":
        return forecast_arima110(history)
    if method == "ar":
        return forecast_ar1(history)
    if method == "rw":
        return forecast_rw(history, rng)
    if method == "ses":
        return forecast_ses(history, config.ses_alpha)
    if method == "ma":
        return forecast_ma(history, config.ma_window)
    if method == "knn_tsp":
        return forecast_knn_tsp(history, config.knn_window, config.knn_k)
    raise ValueError(f"unknown baseline {method!r}")


def rolling_one_step_forecasts(split: SplitSeries, method: str,
                               config: BaselineConfig = BaselineConfig()) -> ForecastRun:
    """Refit on the expanding actual history at every test step."""
    if method not in BASELINE_LABELS:
        raise ValueError(f"unknown baseline {method!r}; choose from {BASELINE_LABELS}")
    train_values = split.train.values
    test_values = split.test.values
    full = np.concatenate([train_values, test_values])
    n_train = len(train_values)
    rng = np.random.default_rng(config.rw_seed) if method == "rw" else None
    predictions = np.empty(len(test_values))
    for j in range(len(test_values)):
        predictions[j] = _step(method, full[:n_train + j], config, rng)
    return ForecastRun(symbol=split.train.symbol, method=method,
                       actuals=test_values, predictions=predictions,
                       pre_test_actual=float(train_values[-1]))
