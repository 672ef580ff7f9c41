"""OHLCV corpus ingestion: CSV parsing, per-symbol close series, holdout split.

Input files are daily bars with a header naming date, open, high, low,
close, volume and a symbol column (``Name`` and ``symbol`` are accepted
interchangeably), in any column order, case-insensitive. Numeric cells
that are empty or unparsable are kept as missing values; rows missing
any OHLCV field are dropped when a close series is extracted, never
zero-filled.
"""
from __future__ import annotations

import csv
import datetime
import io
import math
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DataUnreadable,
    DuplicateDate,
    MalformedRow,
    MissingHeader,
    SeriesTooShort,
    UnknownSymbol,
)

REQUIRED_COLUMNS = ("date", "open", "high", "low", "close", "volume", "name")
SYMBOL_ALIASES = ("name", "symbol")
MIN_SERIES_LENGTH = 25


@dataclass(frozen=True)
class ObservationRecord:
    """One daily bar; numeric fields are None when the cell was missing."""

    date: datetime.date
    open: Optional[float]
    high: Optional[float]
    low: Optional[float]
    close: Optional[float]
    volume: Optional[float]
    symbol: str

    def is_complete(self) -> bool:
        fields = (self.open, self.high, self.low, self.close, self.volume)
        return all(v is not None for v in fields)


@dataclass(frozen=True)
class UnivariateSeries:
    """Close prices for one symbol in strict date order."""

    symbol: str
    dates: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != len(values):
            raise ValueError("dates and values must have equal length")
        if not np.all(np.isfinite(values)):
            raise ValueError("series values must be finite")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SplitSeries:
    """Chronological train/test partition of one series."""

    train: UnivariateSeries
    test: UnivariateSeries
    fraction: float

    def __post_init__(self):
        if self.train.symbol != self.test.symbol:
            raise ValueError("train and test must come from one symbol")


def _parse_numeric(cell: str) -> Optional[float]:
    text = cell.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    if not math.isfinite(value):
        return None
    return value


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        try:
            return open(source, "r", encoding="utf-8-sig", newline="")
        except OSError as exc:
            raise DataUnreadable(str(exc)) from exc
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8-sig"))
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8-sig")
        return io.StringIO(data)
    raise DataUnreadable(f"unsupported source type {type(source)!r}")


def parse_ohlcv_csv(source) -> list:
    """Parse an OHLCV CSV from a path, bytes, or file object.

    Every row yields a record or raises MalformedRow with its line
    number; nothing is silently skipped.
    """
    handle = _open_text(source)
    try:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingHeader("empty file, required columns absent: "
                                + ", ".join(REQUIRED_COLUMNS))
        normalized = [h.strip().lower() for h in header]
        positions = {}
        for idx, name in enumerate(normalized):
            key = "name" if name in SYMBOL_ALIASES else name
            if key in REQUIRED_COLUMNS and key not in positions:
                positions[key] = idx
        missing = [c for c in REQUIRED_COLUMNS if c not in positions]
        if missing:
            raise MissingHeader("missing required columns: " + ", ".join(missing))

        records = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise MalformedRow(line_no, f"expected {len(header)} fields, got {len(row)}")
            raw_date = row[positions["date"]].strip()
            try:
                date = datetime.date.fromisoformat(raw_date)
            except ValueError:
                raise MalformedRow(line_no, f"undecodable date {raw_date!r}")
            symbol = row[positions["name"]].strip()
            if not symbol:
                raise MalformedRow(line_no, "empty symbol")
            records.append(ObservationRecord(
                date=date,
                open=_parse_numeric(row[positions["open"]]),
                high=_parse_numeric(row[positions["high"]]),
                low=_parse_numeric(row[positions["low"]]),
                close=_parse_numeric(row[positions["close"]]),
                volume=_parse_numeric(row[positions["volume"]]),
                symbol=symbol,
            ))
        return records
    finally:
        handle.close()


def corpus_symbols(records: Iterable[ObservationRecord]) -> list:
    """Sorted unique symbols present in the record list."""
    return sorted({r.symbol for r in records})


def extract_close_series(records: Sequence[ObservationRecord], symbol: str) -> UnivariateSeries:
    """Close series for one symbol, date-sorted, incomplete rows dropped.

    A row missing any OHLCV field, or with a non-positive close, is
    dropped entirely. Duplicate dates among the kept rows are an error.
    """
    kept = [r for r in records
            if r.symbol == symbol and r.is_complete() and r.close > 0]
    if not kept:
        raise UnknownSymbol(f"no usable rows for symbol {symbol!r}")
    kept.sort(key=lambda r: r.date)
    for prev, cur in zip(kept, kept[1:]):
        if prev.date == cur.date:
            raise DuplicateDate(f"{symbol}: duplicate date {cur.date.isoformat()}")
    dates = tuple(r.date for r in kept)
    values = np.array([r.close for r in kept], dtype=np.float64)
    return UnivariateSeries(symbol=symbol, dates=dates, values=values)


def holdout_split(series: UnivariateSeries, fraction: float = 0.8) -> SplitSeries:
    """Chronological split at floor(fraction * n); no shuffling, no gap."""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    n = len(series)
    if n < MIN_SERIES_LENGTH:
        raise SeriesTooShort(f"{series.symbol}: {n} observations, need {MIN_SERIES_LENGTH}")
    n_train = int(math.floor(fraction * n))
    if n_train < 1 or n_train >= n:
        raise SeriesTooShort(f"{series.symbol}: fraction {fraction} leaves an empty partition")
    train = UnivariateSeries(series.symbol, series.dates[:n_train], series.values[:n_train])
    test = UnivariateSeries(series.symbol, series.dates[n_train:], series.values[n_train:])
    return SplitSeries(train=train, test=test, fraction=fraction)
