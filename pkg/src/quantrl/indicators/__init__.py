"""Technical-indicator feature columns with explicit warm-up handling."""

from __future__ import annotations

from ..errors import QuantrlError
from ..market_data import OhlcvSeries
from .base import DEFAULT_PERIODS, KINDS, FeatureColumn, FeatureMatrix, IndicatorSpec
from .moving import dema, ema, macd, sma, tema, trima, trix, wma
from .momentum import cmo, mom, roc, rsi, stochastic, stochrsi
from .trend import adx, atr, bop, cci, sar, uo
from .volume import mfi, obv

__all__ = [
    "DEFAULT_PERIODS", "KINDS", "FeatureColumn", "FeatureMatrix", "IndicatorSpec",
    "adx", "atr", "bop", "cci", "cmo", "compute_feature_matrix", "default_specs",
    "dema", "ema", "macd", "mfi", "mom", "obv", "roc", "rsi", "sar", "sma",
    "stochastic", "stochrsi", "tema", "trima", "trix", "uo", "wma",
]


def default_specs() -> list[IndicatorSpec]:
    """The 20-indicator feature set used as the default RL input block."""
    return [
        IndicatorSpec("SMA"),
        IndicatorSpec("OBV"),
        IndicatorSpec("MOM"),
        IndicatorSpec("STOCH_K"),
        IndicatorSpec("MACD"),
        IndicatorSpec("CCI"),
        IndicatorSpec("ADX"),
        IndicatorSpec("TRIX"),
        IndicatorSpec("ROC"),
        IndicatorSpec("SAR"),
        IndicatorSpec("TEMA"),
        IndicatorSpec("TRIMA"),
        IndicatorSpec("WMA"),
        IndicatorSpec("DEMA"),
        IndicatorSpec("MFI"),
        IndicatorSpec("CMO"),
        IndicatorSpec("STOCHRSI"),
        IndicatorSpec("UO"),
        IndicatorSpec("BOP"),
        IndicatorSpec("ATR"),
    ]


def compute_column(series: OhlcvSeries, spec: IndicatorSpec) -> FeatureColumn:
    """Compute one indicator column from a validated series."""
    close = series.closes()
    name = spec.column_name
    kind = spec.kind
    if kind == "SMA":
        return sma(close, spec.period, name)
    if kind == "WMA":
        return wma(close, spec.period, name)
    if kind == "TRIMA":
        return trima(close, spec.period, name)
    if kind == "DEMA":
        return dema(close, spec.period, name)
    if kind == "TEMA":
        return tema(close, spec.period, name)
    if kind == "TRIX":
        return trix(close, spec.period, name)
    if kind == "MOM":
        return mom(close, spec.period, name)
    if kind == "ROC":
        return roc(close, spec.period, name)
    if kind == "RSI":
        return rsi(close, spec.period, name)
    if kind == "CMO":
        return cmo(close, spec.period, name)
    if kind == "STOCHRSI":
        return stochrsi(close, spec.period, name)
    if kind in ("STOCH_K", "STOCH_D"):
        k_col, d_col = stochastic(
            series.highs(), series.lows(), close, spec.period, spec.d_period,
            names=(name, name),
        )
        return k_col if kind == "STOCH_K" else d_col
    if kind in ("MACD", "MACD_SIGNAL"):
        line, signal_col = macd(
            close, spec.fast, spec.slow, spec.signal,
            names=(name, name),
        )
        return line if kind == "MACD" else signal_col
    if kind == "OBV":
        return obv(close, series.volumes(), name)
    if kind == "MFI":
        return mfi(series.highs(), series.lows(), close, series.volumes(), spec.period, name)
    if kind == "ATR":
        return atr(series.highs(), series.lows(), close, spec.period, name)
    if kind == "BOP":
        return bop(series.opens(), series.highs(), series.lows(), close, name)
    if kind == "CCI":
        return cci(series.highs(), series.lows(), close, spec.period, name)
    if kind == "ADX":
        return adx(series.highs(), series.lows(), close, spec.period, name)
    if kind == "UO":
        return uo(series.highs(), series.lows(), close, spec.periods, name)
    if kind == "SAR":
        return sar(series.highs(), series.lows(), close,
                   spec.accel_start, spec.accel_step, spec.accel_max, name)
    raise ValueError(f"unknown indicator kind {kind!r}")


def compute_feature_matrix(series: OhlcvSeries, specs: list[IndicatorSpec]) -> FeatureMatrix:
    """One column per spec on a shared time axis.

    Per-indicator errors are re-raised with the offending spec named;
    duplicate column names are rejected by the matrix constructor.
    """
    if not specs:
        raise ValueError("specs must be non-empty")
    columns = []
    for spec in specs:
        try:
            columns.append(compute_column(series, spec))
        except QuantrlError as exc:
            raise type(exc)(f"{spec.column_name}: {exc}") from exc
    return FeatureMatrix(tuple(columns))
