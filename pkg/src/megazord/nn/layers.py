"""Layers with hand-derived backward passes.

Every layer owns its parameters and, after a backward call, gradients
aligned one-to-one with them. Shapes exclude the batch axis. Weights
are drawn from a fan-based uniform (Glorot) range; biases start at
zero, except the LSTM forget gate which starts at one for gradient
flow over the lookback.
"""
from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch
from . import kernels

ACTIVATIONS = ("relu", "linear")


def _glorot(rng, shape, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def _check_activation(name):
    if name not in ACTIVATIONS:
        raise ValueError(f"unknown activation {name!r}; choose from {ACTIVATIONS}")


class Layer:
    """Base class; subclasses fill params/grads and the passes."""

    def __init__(self):
        self.params = []
        self.grads = []
        self.input_shape = None
        self.output_shape = None

    def initialize(self, input_shape, rng):
        raise NotImplementedError

    def forward(self, x):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError

    def _check_input(self, x):
        if x.shape[1:] != self.input_shape:
            raise ShapeMismatch(
                f"{type(self).__name__}: expected input {self.input_shape}, "
                f"got {x.shape[1:]}")


class Dense(Layer):
    def __init__(self, units, activation="linear"):
        super().__init__()
        _check_activation(activation)
        self.units = units
        self.activation = activation

    def initialize(self, input_shape, rng):
        if len(input_shape) != 1:
            raise ShapeMismatch(f"Dense expects a flat input, got {input_shape}")
        n_in = input_shape[0]
        self.input_shape = input_shape
        self.output_shape = (self.units,)
        self.w = _glorot(rng, (n_in, self.units), n_in, self.units)
        self.b = np.zeros(self.units)
        self.params = [self.w, self.b]
        self.grads = [np.zeros_like(self.w), np.zeros_like(self.b)]
        return self.output_shape

    def forward(self, x):
        self._check_input(x)
        self._x = x
        z = x @ self.w + self.b
        if self.activation == "relu":
            self._mask = z > 0
            return np.where(self._mask, z, 0.0)
        return z

    def backward(self, dy):
        if self.activation == "relu":
            dy = dy * self._mask
        self.grads[0][...] = self._x.T @ dy
        self.grads[1][...] = dy.sum(axis=0)
        return dy @ self.w.T

    def spec(self):
        return {"kind": "dense", "units": self.units, "activation": self.activation}


class Conv1D(Layer):
    def __init__(self, filters, kernel_size, activation="relu"):
        super().__init__()
        _check_activation(activation)
        self.filters = filters
        self.kernel_size = kernel_size
        self.activation = activation

    def initialize(self, input_shape, rng):
        if len(input_shape) != 2:
            raise ShapeMismatch(f"Conv1D expects (length, channels), got {input_shape}")
        length, channels = input_shape
        if length < self.kernel_size:
            raise ShapeMismatch(
                f"Conv1D kernel {self.kernel_size} exceeds input length {length}")
        self.input_shape = input_shape
        self.output_shape = (length - self.kernel_size + 1, self.filters)
        fan_in = self.kernel_size * channels
        fan_out = self.kernel_size * self.filters
        self.w = _glorot(rng, (self.kernel_size, channels, self.filters), fan_in, fan_out)
        self.b = np.zeros(self.filters)
        self.params = [self.w, self.b]
        self.grads = [np.zeros_like(self.w), np.zeros_like(self.b)]
        return self.output_shape

    def forward(self, x):
        self._check_input(x)
        self._x = x
        z = kernels.conv1d_forward(x, self.w, self.b)
        if self.activation == "relu":
            self._mask = z > 0
            return np.where(self._mask, z, 0.0)
        return z

    def backward(self, dy):
        if self.activation == "relu":
            dy = dy * self._mask
        dy = np.ascontiguousarray(dy)
        dx, dw, db = kernels.conv1d_backward(self._x, self.w, dy)
        self.grads[0][...] = dw
        self.grads[1][...] = db
        return dx

    def spec(self):
        return {"kind": "conv1d", "filters": self.filters,
                "kernel_size": self.kernel_size, "activation": self.activation}


class MaxPool1D(Layer):
    def __init__(self, pool=2):
        super().__init__()
        self.pool = pool

    def initialize(self, input_shape, rng):
        if len(input_shape) != 2:
            raise ShapeMismatch(f"MaxPool1D expects (length, channels), got {input_shape}")
        length, channels = input_shape
        if length < self.pool:
            raise ShapeMismatch(f"pool {self.pool} exceeds input length {length}")
        self.input_shape = input_shape
        self.output_shape = (length // self.pool, channels)
        return self.output_shape

    def forward(self, x):
        self._check_input(x)
        y, self._idx = kernels.maxpool1d_forward(x, self.pool)
        return y

    def backward(self, dy):
        dy = np.ascontiguousarray(dy)
        return kernels.maxpool1d_backward(dy, self._idx, self.input_shape[0])

    def spec(self):
        return {"kind": "maxpool1d", "pool": self.pool}


class Flatten(Layer):
    def initialize(self, input_shape, rng):
        self.input_shape = input_shape
        self.output_shape = (int(np.prod(input_shape)),)
        return self.output_shape

    def forward(self, x):
        self._check_input(x)
        return x.reshape(x.shape[0], -1)

    def backward(self, dy):
        return dy.reshape((dy.shape[0],) + self.input_shape)

    def spec(self):
        return {"kind": "flatten"}


class LSTM(Layer):
    def __init__(self, units, return_sequences=False):
        super().__init__()
        self.units = units
        self.return_sequences = return_sequences

    def initialize(self, input_shape, rng):
        if len(input_shape) != 2:
            raise ShapeMismatch(f"LSTM expects (steps, channels), got {input_shape}")
        steps, channels = input_shape
        self.input_shape = input_shape
        self.output_shape = (steps, self.units) if self.return_sequences else (self.units,)
        h = self.units
        self.wx = _glorot(rng, (channels, 4 * h), channels, 4 * h)
        self.wh = _glorot(rng, (h, 4 * h), h, 4 * h)
        self.b = np.zeros(4 * h)
        self.b[h:2 * h] = 1.0
        self.params = [self.wx, self.wh, self.b]
        self.grads = [np.zeros_like(p) for p in self.params]
        return self.output_shape

    def forward(self, x):
        self._check_input(x)
        x = np.ascontiguousarray(x)
        self._x = x
        self._h, self._c, self._gates = kernels.lstm_forward(x, self.wx, self.wh, self.b)
        if self.return_sequences:
            return self._h
        return self._h[:, -1]

    def backward(self, dy):
        if self.return_sequences:
            dh_out = np.ascontiguousarray(dy)
        else:
            dh_out = np.zeros_like(self._h)
            dh_out[:, -1] = dy
        dx, dwx, dwh, db = kernels.lstm_backward(
            self._x, self.wx, self.wh, self._h, self._c, self._gates, dh_out)
        self.grads[0][...] = dwx
        self.grads[1][...] = dwh
        self.grads[2][...] = db
        return dx

    def spec(self):
        return {"kind": "lstm", "units": self.units,
                "return_sequences": self.return_sequences}


_LAYER_KINDS = {
    "dense": lambda s: Dense(s["units"], s["activation"]),
    "conv1d": lambda s: Conv1D(s["filters"], s["kernel_size"], s["activation"]),
    "maxpool1d": lambda s: MaxPool1D(s["pool"]),
    "flatten": lambda s: Flatten(),
    "lstm": lambda s: LSTM(s["units"], s["return_sequences"]),
}


def layer_from_spec(spec: dict) -> Layer:
    kind = spec.get("kind")
    if kind not in _LAYER_KINDS:
        raise ValueError(f"unknown layer kind {kind!r}")
    return _LAYER_KINDS[kind](spec)
