"""MegazordNet: decomposition-driven component forecasting.

fit() decomposes the training series, first-differences the trend,
min-max scales each modeled component to [0, 1], and trains one neural
forecaster per component (CNN or LSTM by variant). The residual is
never modeled. forecast_test() walks the test horizon one step ahead
under teacher forcing: the causal trend is recomputed from actual
observations only, the frozen seasonal pattern is tiled forward, and
the forecast is (previous trend + predicted trend delta) + predicted
seasonal.
"""
from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .data import SplitSeries, UnivariateSeries
from .decomposition import (
    DEFAULT_WINDOW,
    classical_decompose,
    recompose_forecast,
    trailing_moving_average,
)
from .errors import ConstantComponent, ModelSeriesMismatch, SeriesTooShort
from .metrics import ForecastRun
from .nn import TrainConfig, build_cnn_forecaster, build_lstm_forecaster, train
from .nn.network import Network
from .nn.training import make_supervised_windows
from .seeding import stable_seed

DEFAULT_LOOKBACK = 10

COMPONENT_MODELS = ("lstm", "cnn")
SEASONAL_MODELS = ("lstm", "cnn", "none")
_CODE = {"lstm": "l", "cnn": "c", "none": "0"}
_FROM_CODE = {v: k for k, v in _CODE.items()}


@dataclass(frozen=True)
class VariantSpec:
    """Which forecaster handles each modeled component."""

    trend_model: str
    seasonal_model: str

    def __post_init__(self):
        if self.trend_model not in COMPONENT_MODELS:
            raise ValueError(f"trend_model must be one of {COMPONENT_MODELS}, "
                             f"got {self.trend_model!r}")
        if self.seasonal_model not in SEASONAL_MODELS:
            raise ValueError(f"seasonal_model must be one of {SEASONAL_MODELS}, "
                             f"got {self.seasonal_model!r}")

    @property
    def label(self) -> str:
        return f"megazord_{_CODE[self.trend_model]}{_CODE[self.seasonal_model]}"

    @classmethod
    def parse(cls, text: str) -> "VariantSpec":
        """Accepts 'megazord_cc', 'cc', 'C,C', 'L0' and similar."""
        code = text.strip().lower().removeprefix("megazord_").replace(",", "")
        if len(code) != 2 or code[0] not in "lc" or code[1] not in "lc0":
            raise ValueError(f"unrecognized variant {text!r}")
        return cls(_FROM_CODE[code[0]], _FROM_CODE[code[1]])


def all_variants() -> tuple:
    """The six variants: trend in {lstm, cnn} x seasonal in {lstm, cnn, none}."""
    return tuple(VariantSpec(t, s)
                 for t in COMPONENT_MODELS for s in SEASONAL_MODELS)


VARIANT_LABELS = tuple(v.label for v in all_variants())

_RANGE_FLOOR = 1e-12


@dataclass(frozen=True)
class AffineScaler:
    """Min-max map fitted on training data, applied unclipped thereafter."""

    lo: float
    hi: float

    @classmethod
    def fit(cls, values) -> "AffineScaler":
        values = np.asarray(values, dtype=np.float64)
        return cls(lo=float(values.min()), hi=float(values.max()))

    @property
    def degenerate(self) -> bool:
        scale = max(1.0, abs(self.lo), abs(self.hi))
        return (self.hi - self.lo) <= _RANGE_FLOOR * scale

    def transform(self, x):
        return (np.asarray(x, dtype=np.float64) - self.lo) / (self.hi - self.lo)

    def inverse(self, y):
        return self.lo + np.asarray(y, dtype=np.float64) * (self.hi - self.lo)


_BUILDERS = {"cnn": build_cnn_forecaster, "lstm": build_lstm_forecaster}


@dataclass
class ComponentForecaster:
    """A trained network plus its scaler, or a constant fallback."""

    scaler: AffineScaler
    network: Optional[Network] = None
    constant: Optional[float] = None
    loss_history: list = field(default_factory=list)

    def predict(self, windows: np.ndarray) -> np.ndarray:
        """One unscaled next-value prediction per lookback row."""
        windows = np.atleast_2d(np.asarray(windows, dtype=np.float64))
        if self.constant is not None:
            return np.full(windows.shape[0], self.constant)
        scaled = self.scaler.transform(windows)
        out = self.network.forward(scaled[:, :, None])
        return np.asarray(self.scaler.inverse(out))


def _fit_component(values, kind, lookback, seed, config) -> ComponentForecaster:
    values = np.asarray(values, dtype=np.float64)
    scaler = AffineScaler.fit(values)
    if scaler.degenerate:
        warnings.warn(
            f"{kind} component has zero range; falling back to a constant",
            ConstantComponent)
        return ComponentForecaster(scaler=scaler, constant=float(values.mean()))
    scaled = scaler.transform(values)
    windows, targets = make_supervised_windows(scaled, lookback)
    network = _BUILDERS[kind](lookback, seed=seed)
    history = train(network, windows, targets, config)
    return ComponentForecaster(scaler=scaler, network=network, loss_history=history)


def _series_digest(series: UnivariateSeries) -> str:
    payload = series.symbol.encode() + b"\x00" + series.values.tobytes()
    return hashlib.sha256(payload).hexdigest()


@dataclass
class MegazordModel:
    """Frozen training artifacts for one (series, variant) pair."""

    variant: VariantSpec
    symbol: str
    lookback: int
    window: int
    pattern: np.ndarray
    trend: ComponentForecaster
    seasonal: Optional[ComponentForecaster]
    train_digest: str


def fit(train_series: UnivariateSeries, variant: VariantSpec, *,
        lookback: int = DEFAULT_LOOKBACK, window: int = DEFAULT_WINDOW,
        config: Optional[TrainConfig] = None, seed: int = 0) -> MegazordModel:
    """Train the variant's component forecasters on one training series."""
    if config is None:
        config = TrainConfig()
    n = len(train_series)
    if n < window + lookback + 2:
        raise SeriesTooShort(
            f"{train_series.symbol}: need at least {window + lookback + 2} "
            f"training observations for window {window} and lookback {lookback}, got {n}")

    decomp = classical_decompose(train_series.values, window)
    trend_path = decomp.trend[decomp.valid_from:]
    trend_deltas = np.diff(trend_path)
    trend = _fit_component(trend_deltas, variant.trend_model, lookback,
                           stable_seed(seed, "trend"), config)
    seasonal = None
    if variant.seasonal_model != "none":
        seasonal_path = decomp.seasonal[decomp.valid_from:]
        seasonal = _fit_component(seasonal_path, variant.seasonal_model, lookback,
                                  stable_seed(seed, "seasonal"), config)
    return MegazordModel(
        variant=variant,
        symbol=train_series.symbol,
        lookback=lookback,
        window=window,
        pattern=decomp.pattern.copy(),
        trend=trend,
        seasonal=seasonal,
        train_digest=_series_digest(train_series),
    )


def forecast_test(model: MegazordModel, split: SplitSeries,
                  with_components: bool = False):
    """One-step-ahead forecasts over the whole test horizon.

    Teacher forcing: inputs are always built from actual observations,
    never from earlier predictions, and no parameter updates happen.
    """
    if _series_digest(split.train) != model.train_digest:
        raise ModelSeriesMismatch(
            f"model fitted on {model.symbol!r} asked to forecast a different split")
    lookback, window = model.lookback, model.window
    train_values = split.train.values
    test_values = split.test.values
    n_train = len(train_values)
    h = len(test_values)
    full = np.concatenate([train_values, test_values])

    # Trailing averages are causal, so position p-1 of this path equals
    # the value computed from observations up to p-1 only.
    trend_path = trailing_moving_average(full, window)
    trend_at = np.full(len(full), np.nan)
    trend_at[window - 1:] = trend_path
    delta_at = np.full(len(full), np.nan)
    delta_at[window:] = np.diff(trend_path)

    targets = np.arange(n_train, n_train + h)
    prev_trend = trend_at[targets - 1]
    offsets = np.arange(-lookback, 0)
    trend_windows = delta_at[targets[:, None] + offsets]
    delta_hat = model.trend.predict(trend_windows)

    if model.seasonal is not None:
        seasonal_windows = model.pattern[(targets[:, None] + offsets) % window]
        seasonal_hat = model.seasonal.predict(seasonal_windows)
    else:
        seasonal_hat = np.zeros(h)

    predictions = np.array([
        recompose_forecast(prev_trend[t], delta_hat[t], seasonal_hat[t])
        for t in range(h)
    ])
    run = ForecastRun(symbol=split.train.symbol, method=model.variant.label,
                      actuals=test_values, predictions=predictions,
                      pre_test_actual=float(train_values[-1]))
    if with_components:
        return run, {"prev_trend": prev_trend, "trend_delta": delta_hat,
                     "seasonal": seasonal_hat}
    return run
