"""Shared fixtures: synthetic OHLCV series builders."""

from datetime import date, timedelta

import numpy as np
import pytest

from quantrl import Bar, OhlcvSeries


def make_bars(closes, opens=None, highs=None, lows=None, volumes=None, start=date(2020, 1, 2)):
    """Bars from arrays; defaults derive a consistent OHLC envelope."""
    closes = np.asarray(closes, dtype=float)
    n = len(closes)
    if opens is None:
        opens = np.concatenate([[closes[0]], closes[:-1]])
    if highs is None:
        highs = np.maximum(opens, closes) * 1.001
    if lows is None:
        lows = np.minimum(opens, closes) * 0.999
    if volumes is None:
        volumes = np.full(n, 1000.0)
    day = start
    bars = []
    for i in range(n):
        bars.append(Bar(day, float(opens[i]), float(highs[i]), float(lows[i]), float(closes[i]), float(volumes[i])))
        day += timedelta(days=1)
    return tuple(bars)


def make_series(closes, symbol="TEST", **kwargs) -> OhlcvSeries:
    return OhlcvSeries(symbol=symbol, bars=make_bars(closes, **kwargs))


def random_walk_series(n=500, seed=7, symbol="WALK") -> OhlcvSeries:
    """Seeded geometric random walk with irregular ranges and volumes."""
    rng = np.random.default_rng(seed)
    closes = 100.0 * np.exp(np.cumsum(rng.normal(0.0, 0.01, n)))
    opens = np.concatenate([[closes[0]], closes[:-1]]) * (1.0 + rng.normal(0.0, 0.002, n))
    highs = np.maximum(opens, closes) * (1.0 + np.abs(rng.normal(0.0, 0.004, n)))
    lows = np.minimum(opens, closes) * (1.0 - np.abs(rng.normal(0.0, 0.004, n)))
    volumes = rng.integers(10_000, 1_000_000, n).astype(float)
    return make_series(closes, symbol=symbol, opens=opens, highs=highs, lows=lows, volumes=volumes)


@pytest.fixture(scope="session")
def walk500() -> OhlcvSeries:
    return random_walk_series(500, seed=7)


@pytest.fixture(scope="session")
def walk505() -> OhlcvSeries:
    """Roughly two years of daily bars."""
    return random_walk_series(505, seed=11)
