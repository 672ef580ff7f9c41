"""Supervised window construction and the training loop.

Training walks the samples in chronological order, no shuffling, so a
run is a pure function of (network seed, data, config).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SeriesTooShort, TrainingDiverged
from .network import Network
from .optim import Adam


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    learning_rate: float = 0.001
    batch_size: int = 32
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be positive, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be non-negative, got {self.learning_rate}")


def make_supervised_windows(values, lookback: int):
    """Slide a window over the series: X[i] = values[i:i+lookback], y[i] = next value."""
    values = np.asarray(values, dtype=np.float64)
    if lookback < 1:
        raise ValueError(f"lookback must be positive, got {lookback}")
    if len(values) < lookback + 1:
        raise SeriesTooShort(
            f"need at least {lookback + 1} values for lookback {lookback}, got {len(values)}")
    windows = np.lib.stride_tricks.sliding_window_view(values, lookback)[:-1]
    targets = values[lookback:]
    return np.ascontiguousarray(windows), np.ascontiguousarray(targets)


def train(network: Network, inputs, targets, config: TrainConfig) -> list:
    """Fit in place; returns the per-epoch mean training loss."""
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if inputs.ndim == 2 and network.input_shape == (inputs.shape[1], 1):
        inputs = inputs[:, :, None]
    n = inputs.shape[0]
    if n != targets.shape[0]:
        raise ValueError(f"{n} inputs but {targets.shape[0]} targets")
    optimizer = Adam(network.parameters(), learning_rate=config.learning_rate,
                     beta1=config.beta1, beta2=config.beta2, epsilon=config.epsilon)
    history = []
    for _ in range(config.epochs):
        total = 0.0
        for start in range(0, n, config.batch_size):
            stop = min(start + config.batch_size, n)
            loss = network.backward(inputs[start:stop], targets[start:stop])
            optimizer.step(network.gradients())
            total += loss * (stop - start)
        epoch_loss = total / n
        if not np.isfinite(epoch_loss):
            raise TrainingDiverged(f"epoch {len(history) + 1} loss is {epoch_loss}")
        history.append(epoch_loss)
    return history
