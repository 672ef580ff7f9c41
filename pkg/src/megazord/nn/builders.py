"""Forecaster architectures: one value out of a lookback window."""
from __future__ import annotations

from ..errors import LookbackTooSmall
from .layers import LSTM, Conv1D, Dense, Flatten, MaxPool1D
from .network import Network

MIN_CNN_LOOKBACK = 4


def build_cnn_forecaster(lookback: int, seed: int = 0) -> Network:
    """conv(64 filters, width 3) -> maxpool(2) -> flatten -> dense(50) -> dense(1)."""
    if lookback < MIN_CNN_LOOKBACK:
        raise LookbackTooSmall(
            f"CNN forecaster needs lookback >= {MIN_CNN_LOOKBACK}, got {lookback}")
    return Network(
        [
            Conv1D(64, 3, activation="relu"),
            MaxPool1D(2),
            Flatten(),
            Dense(50, activation="relu"),
            Dense(1, activation="linear"),
        ],
        input_shape=(lookback, 1),
        seed=seed,
    )


def build_lstm_forecaster(lookback: int, seed: int = 0) -> Network:
    """lstm(50, all states) -> lstm(50, last state) -> dense(1)."""
    if lookback < 1:
        raise LookbackTooSmall(f"LSTM forecaster needs lookback >= 1, got {lookback}")
    return Network(
        [
            LSTM(50, return_sequences=True),
            LSTM(50, return_sequences=False),
            Dense(1, activation="linear"),
        ],
        input_shape=(lookback, 1),
        seed=seed,
    )
