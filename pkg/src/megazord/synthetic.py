"""Seeded synthetic OHLCV corpus: linear trend + sinusoid + noise.

The cycle period (5) divides the decomposition window (10), so the
phase-averaged seasonal extraction can capture it exactly. The noise is
mildly persistent (AR(1)), which keeps first differences close to
unpredictable for autoregressive baselines while window matching still
drowns in it. Amplitude, slope and noise are drawn per series within
fixed ratios around that regime.
"""
from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass

import numpy as np

from .seeding import stable_seed

PERIOD = 5
START_DATE = datetime.date(2014, 1, 2)
HEADER = ("date", "open", "high", "low", "close", "volume", "Name")


@dataclass(frozen=True)
class SynthParams:
    base: float
    slope: float
    amplitude: float
    noise_sigma: float
    noise_rho: float
    phase: float


def _draw_params(rng) -> SynthParams:
    amplitude = rng.uniform(3.2, 4.8)
    return SynthParams(
        base=rng.uniform(80.0, 160.0),
        slope=amplitude * rng.uniform(0.06, 0.08),
        amplitude=amplitude,
        noise_sigma=amplitude * rng.uniform(0.78, 0.86),
        noise_rho=rng.uniform(0.25, 0.35),
        phase=rng.uniform(0.0, 2.0 * np.pi),
    )


def synth_close_series(length: int, seed: int) -> np.ndarray:
    """Close prices for one synthetic series."""
    rng = np.random.default_rng(seed)
    p = _draw_params(rng)
    t = np.arange(length)
    cycle = p.amplitude * np.sin(2.0 * np.pi * t / PERIOD + p.phase)
    # AR(1) noise at stationary standard deviation noise_sigma
    innovations = rng.normal(0.0, p.noise_sigma * np.sqrt(1.0 - p.noise_rho ** 2), length)
    noise = np.empty(length)
    noise[0] = rng.normal(0.0, p.noise_sigma)
    for i in range(1, length):
        noise[i] = p.noise_rho * noise[i - 1] + innovations[i]
    return p.base + p.slope * t + cycle + noise


def generate_rows(n_series: int, length: int, seed: int) -> list:
    """All corpus rows, ready for csv.writer, header excluded."""
    if n_series < 1 or length < 1:
        raise ValueError("n_series and length must be positive")
    rows = []
    for i in range(n_series):
        symbol = f"SYN{i:03d}"
        series_seed = stable_seed(seed, "synth", symbol)
        close = synth_close_series(length, series_seed)
        bar_rng = np.random.default_rng(stable_seed(series_seed, "bars"))
        spread = np.abs(bar_rng.normal(0.0, 0.3, length)) + 0.05
        opens = close + bar_rng.normal(0.0, 0.2, length)
        highs = np.maximum(opens, close) + spread
        lows = np.minimum(opens, close) - spread
        volumes = bar_rng.integers(100_000, 5_000_000, length)
        for t in range(length):
            date = START_DATE + datetime.timedelta(days=t)
            rows.append((date.isoformat(), repr(float(opens[t])),
                         repr(float(highs[t])), repr(float(lows[t])),
                         repr(float(close[t])), int(volumes[t]), symbol))
    return rows


def write_corpus(path, n_series: int, length: int, seed: int) -> int:
    """Write a synthetic corpus CSV; returns the number of data rows."""
    rows = generate_rows(n_series, length, seed)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(HEADER)
        writer.writerows(rows)
    return len(rows)
