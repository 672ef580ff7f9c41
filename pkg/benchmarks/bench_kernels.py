"""Compare the python and cython kernel backends at training shapes.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times each hot kernel on the shapes the default forecasters actually
use (batch 32, lookback 10) plus one short end-to-end training loop per
network kind. Prints a table with the speedup of the compiled backend
over the numpy one, or notes when the compiled backend is unavailable.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from megazord.nn import TrainConfig, builders, make_supervised_windows, train
from megazord.nn import kernels


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _kernel_cases(rng: np.random.Generator) -> list:
    batch, length, lookback = 32, 10, 10
    x_conv = rng.standard_normal((batch, lookback, 1))
    w_conv = rng.standard_normal((3, 1, 64))
    b_conv = rng.standard_normal(64)
    y_conv = rng.standard_normal((batch, lookback - 2, 64))
    pooled, idx = kernels.maxpool1d_forward(y_conv, 2)
    x_lstm = rng.standard_normal((batch, length, 1))
    wx = rng.standard_normal((1, 200))
    wh = rng.standard_normal((50, 200))
    b_lstm = rng.standard_normal(200)
    h, c, gates = kernels.lstm_forward(x_lstm, wx, wh, b_lstm)
    dh = rng.standard_normal(h.shape)
    return [
        ("conv1d forward", lambda: kernels.conv1d_forward(x_conv, w_conv, b_conv)),
        ("conv1d backward", lambda: kernels.conv1d_backward(x_conv, w_conv, y_conv)),
        ("maxpool forward", lambda: kernels.maxpool1d_forward(y_conv, 2)),
        ("maxpool backward", lambda: kernels.maxpool1d_backward(
            pooled, idx, y_conv.shape[1])),
        ("lstm forward", lambda: kernels.lstm_forward(x_lstm, wx, wh, b_lstm)),
        ("lstm backward", lambda: kernels.lstm_backward(
            x_lstm, wx, wh, h, c, gates, dh)),
    ]


def _training_cases(rng: np.random.Generator) -> list:
    values = np.sin(np.linspace(0.0, 12.0, 160)) * 0.4 + 0.5
    inputs, targets = make_supervised_windows(values, 10)
    config = TrainConfig(epochs=5)

    def run(build):
        net = build(10, seed=0)
        train(net, inputs, targets, config)

    return [
        ("cnn train 5 epochs", lambda: run(builders.build_cnn_forecaster)),
        ("lstm train 5 epochs", lambda: run(builders.build_lstm_forecaster)),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="repeats per case; the best time wins (default 5)")
    args = parser.parse_args()

    backends = kernels.available_backends()
    rng = np.random.default_rng(0)
    cases = _kernel_cases(rng) + _training_cases(rng)

    results = {}
    for backend in backends:
        kernels.use_backend(backend)
        for name, fn in cases:
            fn()  # warm up
            results[(backend, name)] = _time(fn, args.repeats)
    kernels.use_backend("auto")

    width = max(len(name) for name, _ in cases)
    if "cython" in backends:
        print(f"{'case':<{width}}  {'python':>10}  {'cython':>10}  speedup")
        for name, _ in cases:
            py = results[("python", name)]
            cy = results[("cython", name)]
            print(f"{name:<{width}}  {py * 1e3:>8.3f}ms  {cy * 1e3:>8.3f}ms  "
                  f"{py / cy:>6.2f}x")
    else:
        print("cython backend unavailable; python timings only")
        for name, _ in cases:
            print(f"{name:<{width}}  {results[('python', name)] * 1e3:>8.3f}ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
