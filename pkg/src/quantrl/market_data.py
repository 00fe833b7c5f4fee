"""Daily OHLCV ingestion: CSV loading, validation, date slicing.

The canonical file format is a CSV with the exact header
``Date,Open,High,Low,Close,Volume``, ISO-8601 dates, ``.`` decimal point
and no thousands separators. ``Close`` is authoritative; adjusted-close
columns, if present in source exports, are not part of this format.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import EmptySeries, InvariantViolation, MalformedRow

CSV_HEADER = ["Date", "Open", "High", "Low", "Close", "Volume"]


@dataclass(frozen=True)
class Bar:
    """One daily bar. Prices strictly positive, volume >= 0."""

    timestamp: date
    open: float
    high: float
    low: float
    close: float
    volume: float


def bar_rule_violation(bar: Bar) -> str | None:
    """Return the violated invariant rule for ``bar``, or None if valid."""
    values = (bar.open, bar.high, bar.low, bar.close, bar.volume)
    if not all(math.isfinite(v) for v in values):
        return "non-finite field"
    if min(bar.open, bar.high, bar.low, bar.close) <= 0:
        return "price not strictly positive"
    if bar.volume < 0:
        return "negative volume"
    if bar.low > min(bar.open, bar.close):
        return "low above min(open, close)"
    if bar.high < max(bar.open, bar.close):
        return "high below max(open, close)"
    if bar.low > bar.high:
        return "low above high"
    return None


@dataclass(frozen=True)
class OhlcvSeries:
    """Time-ordered daily bars for one symbol.

    Invariants checked on construction: timestamps strictly increasing
    (hence no duplicates), every bar valid, length >= 2.
    """

    symbol: str
    bars: tuple[Bar, ...]

    def __post_init__(self):
        if len(self.bars) < 2:
            raise EmptySeries(f"{self.symbol}: need at least 2 bars, got {len(self.bars)}")
        for i, bar in enumerate(self.bars):
            rule = bar_rule_violation(bar)
            if rule is not None:
                raise InvariantViolation(None, f"bar {i} ({bar.timestamp}): {rule}")
            if i > 0 and bar.timestamp <= self.bars[i - 1].timestamp:
                raise InvariantViolation(None, f"bar {i}: timestamps not strictly increasing")

    def __len__(self) -> int:
        return len(self.bars)

    def closes(self) -> np.ndarray:
        return np.array([b.close for b in self.bars], dtype=float)

    def opens(self) -> np.ndarray:
        return np.array([b.open for b in self.bars], dtype=float)

    def highs(self) -> np.ndarray:
        return np.array([b.high for b in self.bars], dtype=float)

    def lows(self) -> np.ndarray:
        return np.array([b.low for b in self.bars], dtype=float)

    def volumes(self) -> np.ndarray:
        return np.array([b.volume for b in self.bars], dtype=float)

    def dates(self) -> list[date]:
        return [b.timestamp for b in self.bars]


def _parse_row(line_no: int, row: list[str]) -> Bar:
    if len(row) != 6:
        raise MalformedRow(line_no, f"expected 6 fields, got {len(row)}")
    try:
        ts = date.fromisoformat(row[0].strip())
    except ValueError as exc:
        raise MalformedRow(line_no, f"bad date {row[0]!r}: {exc}") from exc
    numbers = []
    for field_name, text in zip(CSV_HEADER[1:], row[1:]):
        try:
            numbers.append(float(text))
        except ValueError as exc:
            raise MalformedRow(line_no, f"bad {field_name} {text!r}") from exc
    return Bar(ts, numbers[0], numbers[1], numbers[2], numbers[3], numbers[4])


def load_csv(path: str | Path, symbol: str | None = None) -> OhlcvSeries:
    """Load and validate an OHLCV CSV file.

    Rows are sorted by date if not already sorted. Raises MalformedRow for
    unparsable fields, InvariantViolation (with the source line number) for
    bar-level violations or duplicate dates, EmptySeries for < 2 data rows.
    """
    path = Path(path)
    if symbol is None:
        symbol = path.stem
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptySeries(f"{path}: empty file") from None
        if [h.strip() for h in header] != CSV_HEADER:
            raise MalformedRow(1, f"expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}")
        rows: list[tuple[int, Bar]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not field.strip() for field in row):
                continue
            bar = _parse_row(line_no, row)
            rule = bar_rule_violation(bar)
            if rule is not None:
                raise InvariantViolation(line_no, rule)
            rows.append((line_no, bar))
    if len(rows) < 2:
        raise EmptySeries(f"{path}: {len(rows)} valid rows, need at least 2")
    rows.sort(key=lambda item: item[1].timestamp)
    for (_, prev), (line_no, cur) in zip(rows, rows[1:]):
        if cur.timestamp == prev.timestamp:
            raise InvariantViolation(line_no, f"duplicate date {cur.timestamp}")
    return OhlcvSeries(symbol=symbol, bars=tuple(bar for _, bar in rows))


def save_csv(series: OhlcvSeries, path: str | Path) -> None:
    """Write the canonical CSV format. load_csv(save_csv(s)) == s."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for bar in series.bars:
            writer.writerow(
                [bar.timestamp.isoformat(), repr(bar.open), repr(bar.high), repr(bar.low), repr(bar.close), repr(bar.volume)]
            )


def slice_by_date(series: OhlcvSeries, start: date, end: date) -> OhlcvSeries:
    """Bars with start <= timestamp < end, order preserved."""
    if start > end:
        raise ValueError(f"start {start} after end {end}")
    kept = tuple(b for b in series.bars if start <= b.timestamp < end)
    if len(kept) < 2:
        raise EmptySeries(f"{series.symbol}: {len(kept)} bars in [{start}, {end})")
    return OhlcvSeries(symbol=series.symbol, bars=kept)
