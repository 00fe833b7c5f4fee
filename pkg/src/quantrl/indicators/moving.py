"""Moving-average family: SMA, EMA, WMA, TRIMA, DEMA, TEMA, TRIX, MACD."""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import PeriodTooLong
from .base import FeatureColumn


def _as_close(close) -> np.ndarray:
    arr = np.asarray(close, dtype=float)
    if arr.ndim != 1:
        raise ValueError("close must be 1-D")
    return arr


def _check_period(n: int, length: int, first_defined: int, kind: str) -> None:
    if n < 1:
        raise ValueError(f"{kind}: period must be >= 1, got {n}")
    if first_defined >= length:
        raise PeriodTooLong(f"{kind}({n}): needs {first_defined + 1} bars, series has {length}")


def _sma_array(x: np.ndarray, n: int) -> np.ndarray:
    """Trailing n-mean, NaN for the first n-1 entries."""
    out = np.full(x.shape, np.nan)
    if n <= len(x):
        out[n - 1 :] = sliding_window_view(x, n).mean(axis=1)
    return out


def _wma_array(x: np.ndarray, n: int) -> np.ndarray:
    out = np.full(x.shape, np.nan)
    if n <= len(x):
        weights = np.arange(1, n + 1, dtype=float)
        out[n - 1 :] = sliding_window_view(x, n) @ weights / weights.sum()
    return out


def _ema_array(x: np.ndarray, n: int) -> np.ndarray:
    """EMA with k = 2/(n+1), seeded by the SMA of the first n values."""
    out = np.full(x.shape, np.nan)
    if n > len(x):
        return out
    k = 2.0 / (n + 1.0)
    value = x[:n].mean()
    out[n - 1] = value
    for t in range(n, len(x)):
        value = k * x[t] + (1.0 - k) * value
        out[t] = value
    return out


def sma(close, n: int, name: str | None = None) -> FeatureColumn:
    close = _as_close(close)
    _check_period(n, len(close), n - 1, "SMA")
    return FeatureColumn(name or f"SMA_{n}", _sma_array(close, n), n - 1, "SMA")


def wma(close, n: int, name: str | None = None) -> FeatureColumn:
    """Weighted moving average, weights 1..n with the newest bar weighted n."""
    close = _as_close(close)
    _check_period(n, len(close), n - 1, "WMA")
    return FeatureColumn(name or f"WMA_{n}", _wma_array(close, n), n - 1, "WMA")


def ema(close, n: int, name: str | None = None) -> FeatureColumn:
    """Building block for the MACD/DEMA/TEMA/TRIX family."""
    close = _as_close(close)
    _check_period(n, len(close), n - 1, "EMA")
    return FeatureColumn(name or f"EMA_{n}", _ema_array(close, n), n - 1, "EMA")


def trima(close, n: int, name: str | None = None) -> FeatureColumn:
    """Triangular MA: SMA(ceil((n+1)/2)) smoothed by SMA(floor((n+1)/2))."""
    close = _as_close(close)
    _check_period(n, len(close), n - 1, "TRIMA")
    n1 = math.ceil((n + 1) / 2)
    n2 = math.floor((n + 1) / 2)
    first = _sma_array(close, n1)
    out = np.full(close.shape, np.nan)
    out[n - 1 :] = _sma_array(first[n1 - 1 :], n2)[n2 - 1 :]
    return FeatureColumn(name or f"TRIMA_{n}", out, n - 1, "TRIMA")


def dema(close, n: int, name: str | None = None) -> FeatureColumn:
    """2*EMA - EMA(EMA); first defined after 2n-1 bars."""
    close = _as_close(close)
    _check_period(n, len(close), 2 * (n - 1), "DEMA")
    e1 = _ema_array(close, n)
    e2 = np.full(close.shape, np.nan)
    e2[2 * (n - 1) :] = _ema_array(e1[n - 1 :], n)[n - 1 :]
    out = np.full(close.shape, np.nan)
    lo = 2 * (n - 1)
    out[lo:] = 2.0 * e1[lo:] - e2[lo:]
    return FeatureColumn(name or f"DEMA_{n}", out, lo, "DEMA")


def _triple_ema(close: np.ndarray, n: int) -> tuple[np.ndarray, int]:
    e1 = _ema_array(close, n)
    e2 = np.full(close.shape, np.nan)
    e2[2 * (n - 1) :] = _ema_array(e1[n - 1 :], n)[n - 1 :]
    e3 = np.full(close.shape, np.nan)
    e3[3 * (n - 1) :] = _ema_array(e2[2 * (n - 1) :], n)[n - 1 :]
    return e3, 3 * (n - 1)


def tema(close, n: int, name: str | None = None) -> FeatureColumn:
    """3*EMA - 3*EMA(EMA) + EMA(EMA(EMA)); first defined after 3n-2 bars."""
    close = _as_close(close)
    _check_period(n, len(close), 3 * (n - 1), "TEMA")
    e1 = _ema_array(close, n)
    e2 = np.full(close.shape, np.nan)
    e2[2 * (n - 1) :] = _ema_array(e1[n - 1 :], n)[n - 1 :]
    e3, lo = _triple_ema(close, n)
    out = np.full(close.shape, np.nan)
    out[lo:] = 3.0 * e1[lo:] - 3.0 * e2[lo:] + e3[lo:]
    return FeatureColumn(name or f"TEMA_{n}", out, lo, "TEMA")


def trix(close, n: int, name: str | None = None) -> FeatureColumn:
    """One-period percent rate of change of the triple EMA."""
    close = _as_close(close)
    _check_period(n, len(close), 3 * (n - 1) + 1, "TRIX")
    e3, lo = _triple_ema(close, n)
    out = np.full(close.shape, np.nan)
    out[lo + 1 :] = 100.0 * (e3[lo + 1 :] - e3[lo:-1]) / e3[lo:-1]
    return FeatureColumn(name or f"TRIX_{n}", out, lo + 1, "TRIX")


def macd(close, fast: int = 12, slow: int = 26, signal: int = 9,
         names: tuple[str, str] | None = None) -> tuple[FeatureColumn, FeatureColumn]:
    """MACD line = EMA(fast) - EMA(slow); signal = EMA(MACD, signal)."""
    close = _as_close(close)
    if fast >= slow:
        raise ValueError(f"MACD: fast {fast} must be < slow {slow}")
    _check_period(signal, len(close), slow + signal - 2, "MACD_SIGNAL")
    _check_period(slow, len(close), slow - 1, "MACD")
    line = _ema_array(close, fast) - _ema_array(close, slow)
    sig = np.full(close.shape, np.nan)
    sig[slow + signal - 2 :] = _ema_array(line[slow - 1 :], signal)[signal - 1 :]
    line_name, sig_name = names or (f"MACD_{fast}_{slow}", f"MACD_SIGNAL_{fast}_{slow}_{signal}")
    return (
        FeatureColumn(line_name, line, slow - 1, "MACD"),
        FeatureColumn(sig_name, sig, slow + signal - 2, "MACD_SIGNAL"),
    )
