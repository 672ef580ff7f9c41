"""Sequential network producing one scalar forecast per sample."""
from __future__ import annotations

import json

import numpy as np

from ..errors import ShapeMismatch
from .layers import layer_from_spec

CHECKPOINT_VERSION = 1


class Network:
    """A stack of layers ending in a single output unit.

    The constructor wires layer shapes from ``input_shape`` (without
    the batch axis) and initializes parameters from the given seed, so
    two networks built with the same seed are bit-identical.
    """

    def __init__(self, layers, input_shape, seed=0):
        self.layers = list(layers)
        self.input_shape = tuple(input_shape)
        self.seed = seed
        rng = np.random.default_rng(seed)
        shape = self.input_shape
        for layer in self.layers:
            shape = layer.initialize(shape, rng)
        if shape != (1,):
            raise ShapeMismatch(f"network must end in one output unit, got {shape}")

    def parameters(self):
        return [p for layer in self.layers for p in layer.params]

    def gradients(self):
        return [g for layer in self.layers for g in layer.grads]

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def _coerce(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape == self.input_shape:
            x = x[None, ...]
        if x.ndim != len(self.input_shape) + 1 or x.shape[1:] != self.input_shape:
            raise ShapeMismatch(
                f"expected input shaped (batch,)+{self.input_shape}, got {x.shape}")
        return np.ascontiguousarray(x)

    def forward(self, x) -> np.ndarray:
        """Predictions for a batch, shaped (batch,)."""
        out = self._coerce(x)
        for layer in self.layers:
            out = layer.forward(out)
        return out[:, 0]

    def predict(self, x) -> float:
        """Scalar prediction for a single sample."""
        return float(self.forward(np.asarray(x, dtype=np.float64)[None, ...]
                                  if np.asarray(x).shape == self.input_shape
                                  else x)[0])

    def backward(self, x, targets) -> float:
        """Mean squared error over the batch; fills layer gradients."""
        x = self._coerce(x)
        targets = np.asarray(targets, dtype=np.float64).reshape(-1)
        if targets.shape[0] != x.shape[0]:
            raise ShapeMismatch(
                f"{x.shape[0]} inputs but {targets.shape[0]} targets")
        out = x
        for layer in self.layers:
            out = layer.forward(out)
        pred = out[:, 0]
        err = pred - targets
        loss = float(np.mean(err * err))
        dy = (2.0 * err / err.shape[0])[:, None]
        for layer in reversed(self.layers):
            dy = layer.backward(dy)
        return loss

    def get_flat(self) -> np.ndarray:
        params = self.parameters()
        if not params:
            return np.zeros(0)
        return np.concatenate([p.ravel() for p in params])

    def set_flat(self, flat):
        flat = np.asarray(flat, dtype=np.float64)
        needed = sum(p.size for p in self.parameters())
        if flat.size != needed:
            raise ShapeMismatch(f"flat vector has {flat.size} values, network needs {needed}")
        offset = 0
        for p in self.parameters():
            p[...] = flat[offset:offset + p.size].reshape(p.shape)
            offset += p.size

    def save(self, path):
        """Versioned checkpoint: layer specs plus parameter arrays."""
        header = {
            "version": CHECKPOINT_VERSION,
            "input_shape": list(self.input_shape),
            "seed": self.seed,
            "layers": [layer.spec() for layer in self.layers],
        }
        arrays = {f"p{i}": p for i, p in enumerate(self.parameters())}
        np.savez(path, header=json.dumps(header, sort_keys=True), **arrays)

    @classmethod
    def load(cls, path) -> "Network":
        with np.load(path, allow_pickle=False) as blob:
            header = json.loads(str(blob["header"]))
            if header["version"] != CHECKPOINT_VERSION:
                raise ValueError(f"unsupported checkpoint version {header['version']}")
            net = cls([layer_from_spec(s) for s in header["layers"]],
                      tuple(header["input_shape"]), seed=header["seed"])
            for i, p in enumerate(net.parameters()):
                p[...] = blob[f"p{i}"]
        return net


def forward(network: Network, x):
    return network.forward(x)


def backward(network: Network, x, targets):
    loss = network.backward(x, targets)
    return loss, network.gradients()
