"""Additive decomposition of a series into trend, seasonal and residual.

The trend is a trailing (causal) moving average, so no future value
leaks into any component. The seasonal component is the per-phase mean
of the detrended series (phase = position mod window), recentered to
sum to zero over one period, hence exactly periodic. The residual is
whatever remains; the three components add back to the input exactly
on the range where they are defined.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import UnivariateSeries
from .errors import NonFiniteInput, SeriesTooShort, WindowTooLarge

DEFAULT_WINDOW = 10


def trailing_moving_average(values, window: int) -> np.ndarray:
    """Mean over each trailing window: out[t] = mean(values[t-window+1 .. t]).

    Output has length n - window + 1 and aligns with source positions
    window-1 .. n-1.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ValueError("values must be one-dimensional")
    if window < 1:
        raise ValueError(f"window must be positive, got {window}")
    if window > len(values):
        raise WindowTooLarge(f"window {window} exceeds series length {len(values)}")
    windows = np.lib.stride_tricks.sliding_window_view(values, window)
    return windows.mean(axis=1)


@dataclass(frozen=True)
class Decomposition:
    """Components aligned to source positions; NaN before valid_from.

    pattern holds the period-``window`` phase values, pattern[p % window]
    being the seasonal value at source position p.
    """

    trend: np.ndarray
    seasonal: np.ndarray
    residual: np.ndarray
    pattern: np.ndarray
    window: int
    valid_from: int


def classical_decompose(series, window: int = DEFAULT_WINDOW) -> Decomposition:
    """Decompose a series (UnivariateSeries or 1-d array) additively.

    Requires at least 2*window observations so every phase is averaged
    from at least one full period of detrended values.
    """
    values = series.values if isinstance(series, UnivariateSeries) else series
    values = np.asarray(values, dtype=np.float64)
    if window < 2:
        raise ValueError(f"window must be at least 2, got {window}")
    n = len(values)
    if n < 2 * window:
        raise SeriesTooShort(f"need at least {2 * window} observations, got {n}")

    valid_from = window - 1
    trend = np.full(n, np.nan)
    trend[valid_from:] = trailing_moving_average(values, window)

    detrended = values[valid_from:] - trend[valid_from:]
    phases = (np.arange(valid_from, n)) % window
    pattern = np.zeros(window)
    for phase in range(window):
        pattern[phase] = detrended[phases == phase].mean()
    pattern -= pattern.mean()

    seasonal = np.full(n, np.nan)
    seasonal[valid_from:] = pattern[np.arange(valid_from, n) % window]
    residual = np.full(n, np.nan)
    residual[valid_from:] = detrended - seasonal[valid_from:]
    return Decomposition(trend=trend, seasonal=seasonal, residual=residual,
                         pattern=pattern, window=window, valid_from=valid_from)


@dataclass(frozen=True)
class DifferencedSeries:
    """First differences plus the anchor needed to undo them."""

    deltas: np.ndarray
    anchor: float

    def reconstruct(self) -> np.ndarray:
        """Running sum from the anchor; inverts first_difference."""
        return np.cumsum(np.concatenate(([self.anchor], self.deltas)))


def first_difference(values) -> DifferencedSeries:
    """deltas[t] = values[t+1] - values[t]; anchor is the first value."""
    values = np.asarray(values, dtype=np.float64)
    if len(values) < 2:
        raise SeriesTooShort(f"need at least 2 values to difference, got {len(values)}")
    return DifferencedSeries(deltas=np.diff(values), anchor=float(values[0]))


def recompose_forecast(prev_trend: float, trend_delta_hat: float,
                       seasonal_hat: float) -> float:
    """Next-step forecast: (previous trend + predicted delta) + seasonal."""
    parts = (prev_trend, trend_delta_hat, seasonal_hat)
    if not all(np.isfinite(p) for p in parts):
        raise NonFiniteInput(f"non-finite recomposition inputs {parts}")
    return (prev_trend + trend_delta_hat) + seasonal_hat
