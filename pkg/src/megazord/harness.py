"""Benchmark harness: every method against every series, then ranks.

A cell is one (series, method) pair. Cells run independently on a
shared train/test split per series, each with a seed derived from the
root seed, the symbol and the method name, so results are identical
regardless of parallelism degree or scheduling order. Failed cells
become diagnostics; rank matrices drop a symbol entirely for a metric
when any of its cells lacks that metric, because rank tests need
complete rows.
"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import json
import os
import platform
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy

from . import __version__
from .baselines import BASELINE_LABELS, BaselineConfig, rolling_one_step_forecasts
from .data import (
    corpus_symbols,
    extract_close_series,
    holdout_split,
    parse_ohlcv_csv,
)
from .errors import AllCellsFailed, ConfigInvalid, MegazordError
from .metrics import MetricReport, compute_report
from .nn import TrainConfig
from .nn.kernels import active_backend
from .pipeline import VARIANT_LABELS, VariantSpec, fit, forecast_test
from .ranking import ScoreMatrix, rank_methods
from .seeding import stable_seed

METRIC_DIRECTIONS = {"mse": "lower", "theils_u": "lower", "pocid": "higher"}


@dataclass(frozen=True)
class ExperimentConfig:
    data_path: str
    out_dir: str = "results"
    symbols: Optional[tuple] = None
    sample: Optional[int] = None
    variants: tuple = VARIANT_LABELS
    baselines: tuple = BASELINE_LABELS
    split_fraction: float = 0.8
    lookback: int = 10
    window: int = 10
    seed: int = 0
    jobs: int = 1
    epochs: int = 100
    batch_size: int = 32


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    """Normalize method names and reject unusable configs."""
    if config.symbols is not None and config.sample is not None:
        raise ConfigInvalid("give either an explicit symbol list or a sample size, not both")
    if config.sample is not None and config.sample < 1:
        raise ConfigInvalid(f"sample must be positive, got {config.sample}")
    if not 0.0 < config.split_fraction < 1.0:
        raise ConfigInvalid(f"split_fraction must lie in (0, 1), got {config.split_fraction}")
    if config.lookback < 1:
        raise ConfigInvalid(f"lookback must be positive, got {config.lookback}")
    if config.window < 2:
        raise ConfigInvalid(f"window must be at least 2, got {config.window}")
    if config.jobs < 1:
        raise ConfigInvalid(f"jobs must be positive, got {config.jobs}")
    if config.epochs < 1 or config.batch_size < 1:
        raise ConfigInvalid("epochs and batch_size must be positive")
    try:
        variants = tuple(VariantSpec.parse(v).label for v in config.variants)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc
    baselines = tuple(config.baselines)
    for b in baselines:
        if b not in BASELINE_LABELS:
            raise ConfigInvalid(f"unknown baseline {b!r}; choose from {BASELINE_LABELS}")
    if len(set(variants)) != len(variants) or len(set(baselines)) != len(baselines):
        raise ConfigInvalid("duplicate method names")
    if not variants and not baselines:
        raise ConfigInvalid("no methods selected; need at least one variant or baseline")
    return dataclasses.replace(config, variants=variants, baselines=baselines,
                               symbols=tuple(config.symbols) if config.symbols else None)


@dataclass(frozen=True)
class CellResult:
    symbol: str
    method: str
    run: Optional[object]
    report: Optional[MetricReport]
    error: Optional[str]


@dataclass(frozen=True)
class EvaluationReport:
    config: ExperimentConfig
    symbols: tuple
    methods: tuple
    cells: tuple
    score_matrices: dict
    rank_results: dict
    best_competitor: dict
    split_info: dict
    diagnostics: tuple


def _run_cell(config: ExperimentConfig, split, method: str):
    symbol = split.train.symbol
    cell_seed = stable_seed(config.seed, symbol, method)
    if method in config.variants:
        model = fit(split.train, VariantSpec.parse(method),
                    lookback=config.lookback, window=config.window,
                    config=TrainConfig(epochs=config.epochs, batch_size=config.batch_size),
                    seed=cell_seed)
        return forecast_test(model, split)
    baseline_config = BaselineConfig(ma_window=config.window, rw_seed=cell_seed)
    return rolling_one_step_forecasts(split, method, baseline_config)


def _resolve_symbols(config: ExperimentConfig, available: list) -> tuple:
    if config.symbols is not None:
        missing = [s for s in config.symbols if s not in available]
        if missing:
            raise ConfigInvalid(f"symbols not in corpus: {', '.join(missing)}")
        return tuple(config.symbols)
    if config.sample is not None:
        if config.sample > len(available):
            raise ConfigInvalid(
                f"sample {config.sample} exceeds {len(available)} available symbols")
        rng = np.random.default_rng(stable_seed(config.seed, "sample"))
        picked = rng.choice(len(available), size=config.sample, replace=False)
        return tuple(sorted(available[i] for i in picked))
    return tuple(available)


def run_experiment(config: ExperimentConfig) -> EvaluationReport:
    """Execute every cell, compute metrics and per-metric rankings."""
    config = validate_config(config)
    methods = config.variants + config.baselines
    records = parse_ohlcv_csv(config.data_path)
    symbols = _resolve_symbols(config, corpus_symbols(records))

    diagnostics = []
    splits = {}
    for symbol in symbols:
        try:
            series = extract_close_series(records, symbol)
            splits[symbol] = holdout_split(series, config.split_fraction)
        except MegazordError as exc:
            diagnostics.append(f"series {symbol}: {type(exc).__name__}: {exc}")
    usable = tuple(s for s in symbols if s in splits)

    cells = {}
    jobs = [(symbol, method) for symbol in usable for method in methods]

    def execute(job):
        symbol, method = job
        try:
            run = _run_cell(config, splits[symbol], method)
            return CellResult(symbol, method, run, compute_report(run), None)
        except MegazordError as exc:
            return CellResult(symbol, method, None, None,
                              f"{type(exc).__name__}: {exc}")

    if config.jobs == 1 or len(jobs) <= 1:
        results = map(execute, jobs)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(execute, jobs))
    for cell in results:
        cells[(cell.symbol, cell.method)] = cell
        if cell.error is not None:
            diagnostics.append(f"cell {cell.symbol}/{cell.method}: {cell.error}")
        elif cell.report.theils_u is None:
            diagnostics.append(
                f"cell {cell.symbol}/{cell.method}: theils_u undefined (constant actuals)")

    if not cells or all(cells[key].error is not None for key in cells):
        detail = "; ".join(diagnostics) or "no usable series"
        raise AllCellsFailed(f"every (series, method) cell failed: {detail}")

    score_matrices = {}
    rank_results = {}
    best_competitor = {}
    for metric, better in METRIC_DIRECTIONS.items():
        complete = []
        for symbol in usable:
            values = [_metric_value(cells.get((symbol, m)), metric) for m in methods]
            if all(v is not None for v in values):
                complete.append((symbol, values))
        if not complete or len(methods) < 2:
            diagnostics.append(f"rank {metric}: skipped "
                               f"({len(complete)} complete series, {len(methods)} methods)")
            score_matrices[metric] = None
            rank_results[metric] = None
            best_competitor[metric] = _best_competitor_rows(config, methods, complete, better)
            continue
        matrix = ScoreMatrix(
            methods=methods,
            series=tuple(s for s, _ in complete),
            scores=np.array([vals for _, vals in complete]).T,
            better=better,
        )
        score_matrices[metric] = matrix
        try:
            rank_results[metric] = rank_methods(matrix)
        except MegazordError as exc:
            diagnostics.append(f"rank {metric}: {type(exc).__name__}: {exc}")
            rank_results[metric] = None
        except ValueError as exc:
            diagnostics.append(f"rank {metric}: {exc}")
            rank_results[metric] = None
        best_competitor[metric] = _best_competitor_rows(config, methods, complete, better)

    split_info = {
        symbol: {
            "train_length": len(split.train),
            "test_length": len(split.test),
            "train_first": float(split.train.values[0]),
            "train_last": float(split.train.values[-1]),
        }
        for symbol, split in splits.items()
    }
    return EvaluationReport(
        config=config,
        symbols=usable,
        methods=methods,
        cells=tuple(cells[key] for key in sorted(cells)),
        score_matrices=score_matrices,
        rank_results=rank_results,
        best_competitor=best_competitor,
        split_info=split_info,
        diagnostics=tuple(diagnostics),
    )


def _metric_value(cell: Optional[CellResult], metric: str):
    if cell is None or cell.report is None:
        return None
    return getattr(cell.report, metric)


def _best_competitor_rows(config, methods, complete, better):
    """Per series: mean over variants vs the single best baseline."""
    variant_idx = [i for i, m in enumerate(methods) if m in config.variants]
    baseline_idx = [i for i, m in enumerate(methods) if m in config.baselines]
    if not variant_idx or not baseline_idx:
        return ()
    rows = []
    for symbol, values in complete:
        variant_mean = float(np.mean([values[i] for i in variant_idx]))
        baseline_scores = [(values[i], methods[i]) for i in baseline_idx]
        pick = min if better == "lower" else max
        best_score, best_method = pick(baseline_scores, key=lambda t: t[0])
        rows.append((symbol, variant_mean, float(best_score), best_method))
    return tuple(rows)


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_reports(report: EvaluationReport, out_dir: Optional[str] = None) -> list:
    """Write all result files atomically; returns the paths written."""
    out_dir = out_dir or report.config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    written = []

    lines = ["symbol,method,mse,theils_u,pocid"]
    for cell in report.cells:
        if cell.report is None:
            continue
        lines.append(",".join([cell.symbol, cell.method, _fmt(cell.report.mse),
                               _fmt(cell.report.theils_u), _fmt(cell.report.pocid)]))
    path = os.path.join(out_dir, "metrics.csv")
    _atomic_write(path, "\n".join(lines) + "\n")
    written.append(path)

    lines = ["symbol,method,index,actual,predicted"]
    for cell in report.cells:
        if cell.run is None:
            continue
        for i in range(cell.run.horizon()):
            lines.append(",".join([cell.symbol, cell.method, str(i + 1),
                                   _fmt(float(cell.run.actuals[i])),
                                   _fmt(float(cell.run.predictions[i]))]))
    path = os.path.join(out_dir, "forecasts.csv")
    _atomic_write(path, "\n".join(lines) + "\n")
    written.append(path)

    for metric in METRIC_DIRECTIONS:
        result = report.rank_results.get(metric)
        if result is not None:
            order = sorted(range(len(result.methods)),
                           key=lambda i: (result.mean_ranks[i], result.methods[i]))
            lines = ["method,mean_rank"]
            lines += [f"{result.methods[i]},{_fmt(float(result.mean_ranks[i]))}"
                      for i in order]
            path = os.path.join(out_dir, f"ranks_{metric}.csv")
            _atomic_write(path, "\n".join(lines) + "\n")
            written.append(path)

            matrix = report.score_matrices[metric]
            diagram = {
                "metric": metric,
                "better": matrix.better,
                "k": len(result.methods),
                "n": len(matrix.series),
                "alpha": 0.05,
                "cd": result.cd,
                "mean_ranks": {m: float(r) for m, r in
                               zip(result.methods, result.mean_ranks)},
                "groups": [list(g) for g in result.groups],
                "friedman_chi2": result.friedman_chi2,
                "friedman_p": result.friedman_p,
            }
            path = os.path.join(out_dir, f"cd_diagram_{metric}.json")
            _atomic_write(path, json.dumps(diagram, indent=2, sort_keys=True) + "\n")
            written.append(path)

        rows = report.best_competitor.get(metric, ())
        if rows:
            lines = ["symbol,megazord_mean,best_baseline,best_baseline_method"]
            lines += [",".join([s, _fmt(vm), _fmt(bb), bm]) for s, vm, bb, bm in rows]
            path = os.path.join(out_dir, f"best_competitor_{metric}.csv")
            _atomic_write(path, "\n".join(lines) + "\n")
            written.append(path)

    summary = {
        "config": {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in dataclasses.asdict(report.config).items()},
        "symbols": list(report.symbols),
        "methods": list(report.methods),
        "cells_total": len(report.cells),
        "cells_failed": sum(1 for c in report.cells if c.error is not None),
        "split_info": report.split_info,
        "diagnostics": list(report.diagnostics),
        "rank_metrics": {m: report.rank_results.get(m) is not None
                         for m in METRIC_DIRECTIONS},
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "megazord": __version__,
            "kernel_backend": active_backend(),
        },
    }
    path = os.path.join(out_dir, "summary.json")
    _atomic_write(path, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def run_and_emit(config: ExperimentConfig) -> tuple:
    """Validate, run, then write reports; nothing is written on failure."""
    report = run_experiment(config)
    return report, emit_reports(report)
