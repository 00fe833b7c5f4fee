"""Trend/volatility family: ATR, BOP, CCI, ADX, UO, SAR.

ATR and ADX use the Wilder recurrence avg_t = (avg_{t-1}*(n-1) + x_t)/n,
seeded by the simple mean of the first n inputs. Degenerate denominators
(flat windows, high == low) yield 0.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .base import FeatureColumn
from .moving import _as_close, _check_period


def _true_range(high: np.ndarray, low: np.ndarray, close: np.ndarray) -> np.ndarray:
    """TR_t = max(h-l, |h - prev close|, |l - prev close|), defined from t=1."""
    prev_close = close[:-1]
    return np.maximum(
        high[1:] - low[1:],
        np.maximum(np.abs(high[1:] - prev_close), np.abs(low[1:] - prev_close)),
    )


def _wilder_smooth(x: np.ndarray, n: int) -> np.ndarray:
    """Wilder average of x, seeded by mean(x[:n]); output aligned to x with
    the first n-1 entries NaN."""
    out = np.full(x.shape, np.nan)
    value = x[:n].mean()
    out[n - 1] = value
    for t in range(n, len(x)):
        value = (value * (n - 1) + x[t]) / n
        out[t] = value
    return out


def atr(high, low, close, n: int, name: str | None = None) -> FeatureColumn:
    high, low, close = _as_close(high), _as_close(low), _as_close(close)
    _check_period(n, len(close), n, "ATR")
    tr = _true_range(high, low, close)
    out = np.full(close.shape, np.nan)
    out[n:] = _wilder_smooth(tr, n)[n - 1 :]
    return FeatureColumn(name or f"ATR_{n}", out, n, "ATR")


def bop(opens, high, low, close, name: str | None = None) -> FeatureColumn:
    """(close - open) / (high - low), 0 when high == low."""
    opens, high, low, close = _as_close(opens), _as_close(high), _as_close(low), _as_close(close)
    span = high - low
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(span > 0.0, (close - opens) / np.where(span > 0.0, span, 1.0), 0.0)
    return FeatureColumn(name or "BOP", out, 0, "BOP")


def cci(high, low, close, n: int, name: str | None = None) -> FeatureColumn:
    """(TP - SMA(TP, n)) / (0.015 * mean absolute deviation of the window)."""
    high, low, close = _as_close(high), _as_close(low), _as_close(close)
    _check_period(n, len(close), n - 1, "CCI")
    tp = (high + low + close) / 3.0
    windows = sliding_window_view(tp, n)
    means = windows.mean(axis=1)
    mad = np.abs(windows - means[:, None]).mean(axis=1)
    out = np.full(close.shape, np.nan)
    with np.errstate(invalid="ignore", divide="ignore"):
        out[n - 1 :] = np.where(mad > 0.0, (tp[n - 1 :] - means) / (0.015 * np.where(mad > 0.0, mad, 1.0)), 0.0)
    return FeatureColumn(name or f"CCI_{n}", out, n - 1, "CCI")


def adx(high, low, close, n: int, name: str | None = None) -> FeatureColumn:
    """Wilder-smoothed DX = 100 * |DI+ - DI-| / (DI+ + DI-).

    DI+/- are Wilder averages of the directional movements over the Wilder
    average true range; the final ADX is a second Wilder pass over DX, so
    the first defined index is 2n-1.
    """
    high, low, close = _as_close(high), _as_close(low), _as_close(close)
    _check_period(n, len(close), 2 * n - 1, "ADX")
    up_move = np.diff(high)
    down_move = -np.diff(low)
    plus_dm = np.where((up_move > down_move) & (up_move > 0.0), up_move, 0.0)
    minus_dm = np.where((down_move > up_move) & (down_move > 0.0), down_move, 0.0)
    tr = _true_range(high, low, close)
    avg_plus = _wilder_smooth(plus_dm, n)[n - 1 :]
    avg_minus = _wilder_smooth(minus_dm, n)[n - 1 :]
    avg_tr = _wilder_smooth(tr, n)[n - 1 :]
    with np.errstate(invalid="ignore", divide="ignore"):
        di_plus = np.where(avg_tr > 0.0, 100.0 * avg_plus / np.where(avg_tr > 0.0, avg_tr, 1.0), 0.0)
        di_minus = np.where(avg_tr > 0.0, 100.0 * avg_minus / np.where(avg_tr > 0.0, avg_tr, 1.0), 0.0)
        di_sum = di_plus + di_minus
        dx = np.where(di_sum > 0.0, 100.0 * np.abs(di_plus - di_minus) / np.where(di_sum > 0.0, di_sum, 1.0), 0.0)
    out = np.full(close.shape, np.nan)
    out[2 * n - 1 :] = _wilder_smooth(dx, n)[n - 1 :]
    return FeatureColumn(name or f"ADX_{n}", out, 2 * n - 1, "ADX")


def uo(high, low, close, periods: tuple[int, int, int] = (7, 14, 28), name: str | None = None) -> FeatureColumn:
    """Ultimate oscillator: (4, 2, 1)-weighted buying-pressure ratios."""
    high, low, close = _as_close(high), _as_close(low), _as_close(close)
    p1, p2, p3 = periods
    if not (1 <= p1 < p2 < p3):
        raise ValueError(f"UO: periods must be strictly increasing and >= 1, got {periods}")
    _check_period(p3, len(close), p3, "UO")
    prev_close = close[:-1]
    bp = close[1:] - np.minimum(low[1:], prev_close)
    tr = np.maximum(high[1:], prev_close) - np.minimum(low[1:], prev_close)

    def ratio(p: int) -> np.ndarray:
        bp_sum = sliding_window_view(bp, p).sum(axis=1)[p3 - p :]
        tr_sum = sliding_window_view(tr, p).sum(axis=1)[p3 - p :]
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(tr_sum > 0.0, bp_sum / np.where(tr_sum > 0.0, tr_sum, 1.0), 0.0)

    out = np.full(close.shape, np.nan)
    out[p3:] = 100.0 * (4.0 * ratio(p1) + 2.0 * ratio(p2) + ratio(p3)) / 7.0
    return FeatureColumn(name or "UO_{}_{}_{}".format(*periods), out, p3, "UO")


def sar(high, low, close, accel_start: float = 0.02, accel_step: float = 0.02,
        accel_max: float = 0.2, name: str | None = None) -> FeatureColumn:
    """Parabolic stop-and-reverse.

    Recurrence (pinned convention, asserted by the test-side oracle):
      * initial trend long iff close[1] >= close[0];
      * SAR_1 = low[0] (long) or high[0] (short), EP = extreme of bars 0-1;
      * SAR_t = SAR_{t-1} + af * (EP - SAR_{t-1}), clamped to not enter the
        prior two bars' range (min of the two lows while long, max of the
        two highs while short);
      * penetration reverses the trend: SAR becomes the old EP, EP restarts
        at the penetrating bar's extreme and af at accel_start;
      * otherwise a new extreme advances EP and af by accel_step up to
        accel_max.
    First defined index is 1.
    """
    high, low, close = _as_close(high), _as_close(low), _as_close(close)
    if not (0.0 < accel_start <= accel_max) or accel_step <= 0.0:
        raise ValueError("SAR: need 0 < accel_start <= accel_max and accel_step > 0")
    if len(close) < 2:
        raise ValueError("SAR: needs at least 2 bars")
    out = np.full(close.shape, np.nan)
    long = close[1] >= close[0]
    if long:
        value, ep = low[0], max(high[0], high[1])
    else:
        value, ep = high[0], min(low[0], low[1])
    af = accel_start
    out[1] = value
    for t in range(2, len(close)):
        value = value + af * (ep - value)
        if long:
            value = min(value, low[t - 1], low[t - 2])
            if low[t] < value:
                long, value, ep, af = False, ep, low[t], accel_start
            elif high[t] > ep:
                ep, af = high[t], min(af + accel_step, accel_max)
        else:
            value = max(value, high[t - 1], high[t - 2])
            if high[t] > value:
                long, value, ep, af = True, ep, high[t], accel_start
            elif low[t] < ep:
                ep, af = low[t], min(af + accel_step, accel_max)
        out[t] = value
    return FeatureColumn(name or "SAR", out, 1, "SAR")
