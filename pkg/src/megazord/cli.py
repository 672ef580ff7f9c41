"""Command line entry points.

Three subcommands: ``run`` executes the full benchmark on a corpus,
``synth`` writes a synthetic corpus to experiment against, and
``decompose`` dumps the additive components of one series. Failures
surface as one JSON object on stderr and exit status 2 so callers can
parse them.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .data import extract_close_series, parse_ohlcv_csv
from .decomposition import classical_decompose
from .errors import ConfigInvalid, MegazordError
from .harness import ExperimentConfig, run_and_emit
from .synthetic import write_corpus

_RUN_FIELDS = {
    "data": "data_path",
    "out": "out_dir",
    "symbols": "symbols",
    "sample": "sample",
    "variants": "variants",
    "baselines": "baselines",
    "split_fraction": "split_fraction",
    "lookback": "lookback",
    "window": "window",
    "seed": "seed",
    "jobs": "jobs",
    "epochs": "epochs",
    "batch_size": "batch_size",
}


def _split_list(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="megazord",
        description="Hybrid decomposition forecasting benchmark for price series.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run every method on every series and rank them")
    run.add_argument("--data", help="path to the OHLCV csv corpus")
    run.add_argument("--out", help="directory for result files (default: results)")
    run.add_argument("--symbols", help="comma separated symbols to evaluate")
    run.add_argument("--sample", type=int, help="evaluate a seeded random sample of symbols")
    run.add_argument("--variants", help="comma separated hybrid variants (default: all six)")
    run.add_argument("--baselines", help="comma separated baselines (default: all six)")
    run.add_argument("--split-fraction", type=float, dest="split_fraction",
                     help="train fraction of each series (default 0.8)")
    run.add_argument("--lookback", type=int, help="input window length for the networks")
    run.add_argument("--window", type=int, help="moving average window (default 10)")
    run.add_argument("--seed", type=int, help="root seed (default 0)")
    run.add_argument("--jobs", type=int, help="parallel cells (default 1)")
    run.add_argument("--epochs", type=int, help="training epochs per component")
    run.add_argument("--batch-size", type=int, dest="batch_size", help="training batch size")
    run.add_argument("--config", help="JSON file with the same keys; flags override it")

    synth = sub.add_parser("synth", help="write a synthetic OHLCV corpus")
    synth.add_argument("--series", type=int, default=10, help="number of series")
    synth.add_argument("--length", type=int, default=1258, help="observations per series")
    synth.add_argument("--seed", type=int, default=0, help="generator seed")
    synth.add_argument("--out", required=True, help="csv path to write")

    dec = sub.add_parser("decompose", help="dump trend/seasonal/residual for one series")
    dec.add_argument("--data", required=True, help="path to the OHLCV csv corpus")
    dec.add_argument("--symbol", required=True, help="symbol to decompose")
    dec.add_argument("--window", type=int, default=10, help="moving average window")
    dec.add_argument("--out", required=True, help="csv path to write")
    return parser


def _load_run_config(args: argparse.Namespace) -> ExperimentConfig:
    values = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                loaded = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigInvalid("config file must hold a JSON object")
        for key, value in loaded.items():
            if key not in _RUN_FIELDS:
                raise ConfigInvalid(f"unknown config key {key!r}; "
                                    f"valid keys: {', '.join(sorted(_RUN_FIELDS))}")
            values[_RUN_FIELDS[key]] = tuple(value) if isinstance(value, list) else value
    for flag, field_name in _RUN_FIELDS.items():
        flag_value = getattr(args, flag, None)
        if flag_value is not None:
            if flag in ("symbols", "variants", "baselines"):
                flag_value = _split_list(flag_value)
            values[field_name] = flag_value
    if "data_path" not in values:
        raise ConfigInvalid("no corpus given; pass --data or put data in the config file")
    return ExperimentConfig(**values)


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_run_config(args)
    report, written = run_and_emit(config)
    print(f"evaluated {len(report.symbols)} series x {len(report.methods)} methods "
          f"({sum(1 for c in report.cells if c.error is None)} cells ok)")
    for metric, result in sorted(report.rank_results.items()):
        if result is None:
            continue
        best = min(zip(result.mean_ranks, result.methods))
        print(f"{metric}: best mean rank {best[0]:.3f} ({best[1]}), cd {result.cd:.4f}")
    for path in written:
        print(f"wrote {path}")
    for note in report.diagnostics:
        print(f"note: {note}", file=sys.stderr)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    if args.series < 1 or args.length < 1:
        raise ConfigInvalid("--series and --length must be positive")
    rows = write_corpus(args.out, n_series=args.series, length=args.length, seed=args.seed)
    print(f"wrote {rows} rows ({args.series} series) to {args.out}")
    return 0


def _cmd_decompose(args: argparse.Namespace) -> int:
    if args.window < 2:
        raise ConfigInvalid(f"window must be at least 2, got {args.window}")
    records = parse_ohlcv_csv(args.data)
    series = extract_close_series(records, args.symbol)
    parts = classical_decompose(series, window=args.window)

    def cell(value: float) -> str:
        return "" if value != value else repr(float(value))

    lines = ["index,z,trend,seasonal,residual"]
    for i, z in enumerate(series.values):
        lines.append(",".join([str(i), repr(float(z)), cell(parts.trend[i]),
                               cell(parts.seasonal[i]), cell(parts.residual[i])]))
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"wrote {len(series)} rows to {args.out} (components defined from "
          f"index {parts.valid_from})")
    return 0


def main(argv: Optional[list] = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "synth": _cmd_synth, "decompose": _cmd_decompose}
    try:
        return handlers[args.command](args)
    except MegazordError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
