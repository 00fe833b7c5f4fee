"""Feature normalization schemes and the indicator correlation analysis.

Five schemes: min-max, z-score (population standard deviation), sigmoid,
L2 and the windowed log transform log(s_ij / s_00) * 10 (natural log).
Degenerate inputs follow the documented rules: zero-range min-max and
zero-sigma z-score map to 0, zero-sigma sigmoid maps to 0.5.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import EmptyInput, NonPositiveValue, ZeroVector
from .indicators import FeatureMatrix


class NormalizationKind(str, Enum):
    MIN_MAX = "MinMax"
    Z_SCORE = "ZScore"
    SIGMOID = "Sigmoid"
    L2 = "L2"
    WINDOW_LOG = "WindowLog"


@dataclass(frozen=True)
class NormalizationStats:
    """Mean/std/min/max of the fitted segment (population std)."""

    mean: float
    std: float
    min: float
    max: float


def fit(values) -> NormalizationStats:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyInput("cannot fit on an empty sequence")
    if not np.isfinite(values).all():
        raise ValueError("fit input contains NaN/inf; exclude warm-up first")
    return NormalizationStats(
        mean=float(values.mean()),
        std=float(values.std()),
        min=float(values.min()),
        max=float(values.max()),
    )


def min_max(x, stats: NormalizationStats):
    """(x - min) / (max - min); constant fitted column maps to 0."""
    x = np.asarray(x, dtype=float)
    span = stats.max - stats.min
    if span == 0.0:
        result = np.zeros_like(x)
    else:
        result = (x - stats.min) / span
    return float(result) if result.ndim == 0 else result


def z_score(x, stats: NormalizationStats):
    """(x - mean) / std; zero-sigma column maps to 0."""
    x = np.asarray(x, dtype=float)
    if stats.std == 0.0:
        result = np.zeros_like(x)
    else:
        result = (x - stats.mean) / stats.std
    return float(result) if result.ndim == 0 else result


def sigmoid_norm(x, stats: NormalizationStats):
    """1 / (1 + exp(-(x - mean)/std)); zero-sigma column maps to 0.5.

    The exact value never reaches 0 or 1; outputs are kept strictly inside
    (0, 1) at float resolution even where exp() saturates.
    """
    x = np.asarray(x, dtype=float)
    if stats.std == 0.0:
        result = np.full_like(x, 0.5)
    else:
        z = np.clip((x - stats.mean) / stats.std, -700.0, 700.0)
        result = np.clip(
            1.0 / (1.0 + np.exp(-z)),
            np.nextafter(0.0, 1.0),
            np.nextafter(1.0, 0.0),
        )
    return float(result) if result.ndim == 0 else result


def l2_normalize(values) -> np.ndarray:
    """values / sqrt(sum(values^2)); output has unit Euclidean norm."""
    values = np.asarray(values, dtype=float)
    norm = float(np.sqrt(np.sum(values * values)))
    if norm == 0.0:
        raise ZeroVector("cannot L2-normalize an all-zero vector")
    return values / norm


def window_log(window) -> np.ndarray:
    """log(s_ij / s_00) * 10 with s_00 the window's first cell (natural log)."""
    window = np.asarray(window, dtype=float)
    if window.size == 0:
        raise EmptyInput("empty window")
    if np.any(window <= 0.0):
        cell = np.argwhere(window <= 0.0)[0]
        raise NonPositiveValue(f"cell {tuple(int(i) for i in cell)}: value {window[tuple(cell)]} <= 0")
    return np.log(window / window.flat[0]) * 10.0


def apply_kind(kind: NormalizationKind, values, stats: NormalizationStats | None = None):
    """Apply one elementwise scheme to a column; fits stats when not given.

    WindowLog is per-window, not per-column, and is rejected here.
    """
    values = np.asarray(values, dtype=float)
    if kind == NormalizationKind.L2:
        return l2_normalize(values)
    if kind == NormalizationKind.WINDOW_LOG:
        raise ValueError("WindowLog applies to observation windows, not columns")
    if stats is None:
        stats = fit(values)
    if kind == NormalizationKind.MIN_MAX:
        return min_max(values, stats)
    if kind == NormalizationKind.Z_SCORE:
        return z_score(values, stats)
    if kind == NormalizationKind.SIGMOID:
        return sigmoid_norm(values, stats)
    raise ValueError(f"unknown normalization kind {kind!r}")


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric Pearson matrix with unit diagonal.

    Columns with zero variance are reported in ``degenerate`` and carry 0
    off-diagonal.
    """

    names: tuple[str, ...]
    values: np.ndarray
    degenerate: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degenerate", tuple(self.degenerate))
        k = len(self.names)
        if values.shape != (k, k):
            raise ValueError(f"matrix shape {values.shape} for {k} names")
        if not np.allclose(values, values.T, atol=1e-12):
            raise ValueError("matrix not symmetric")
        if not np.allclose(np.diag(values), 1.0, atol=1e-12):
            raise ValueError("diagonal not 1")
        if values.min() < -1.0 or values.max() > 1.0:
            raise ValueError("entries outside [-1, 1]")

    def entry(self, a: str, b: str) -> float:
        return float(self.values[self.names.index(a), self.names.index(b)])

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow([""] + list(self.names))
            for name, row in zip(self.names, self.values):
                writer.writerow([name] + [repr(float(v)) for v in row])

    @classmethod
    def read_csv(cls, path: str | Path) -> "CorrelationMatrix":
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
        names = tuple(rows[0][1:])
        values = np.array([[float(cell) for cell in row[1:]] for row in rows[1:]])
        return cls(names=names, values=values)


def pearson_corr_matrix(
    features: FeatureMatrix,
    kind: NormalizationKind = NormalizationKind.MIN_MAX,
    overrides: dict[str, NormalizationKind] | None = None,
) -> CorrelationMatrix:
    """Pearson matrix on the commonly defined rows after per-column scaling.

    ``overrides`` maps indicator kinds to a different scheme (the per-family
    mode); unlisted columns use ``kind``. WindowLog columns use the first
    common-region value as the log reference.
    """
    start = features.warmup
    raw = features.to_array()[start:]
    if raw.shape[0] < 2:
        raise EmptyInput(f"only {raw.shape[0]} commonly defined rows, need >= 2")
    names = tuple(features.names)
    k = len(names)
    transformed = np.empty_like(raw)
    degenerate = []
    for j, col in enumerate(features.columns):
        col_kind = (overrides or {}).get(col.kind, kind)
        values = raw[:, j]
        if np.ptp(values) == 0.0:
            degenerate.append(col.name)
            transformed[:, j] = 0.0
            continue
        if col_kind == NormalizationKind.WINDOW_LOG:
            transformed[:, j] = window_log(values)
        elif col_kind == NormalizationKind.L2:
            transformed[:, j] = l2_normalize(values)
        else:
            transformed[:, j] = apply_kind(col_kind, values)
    matrix = np.eye(k)
    live = [j for j in range(k) if names[j] not in degenerate]
    # a nonlinear transform can flatten a non-constant column; recheck
    for j in live[:]:
        if np.ptp(transformed[:, j]) == 0.0:
            live.remove(j)
            degenerate.append(names[j])
    if len(live) >= 2:
        sub = np.corrcoef(transformed[:, live], rowvar=False)
        sub = np.clip((sub + sub.T) / 2.0, -1.0, 1.0)
        np.fill_diagonal(sub, 1.0)
        for a, ja in enumerate(live):
            for b, jb in enumerate(live):
                matrix[ja, jb] = sub[a, b]
        # identical (or exactly negated) columns must correlate at exactly +-1,
        # not at corrcoef's rounding of it, so the duplicate-drop rule holds
        for a, ja in enumerate(live):
            za = transformed[:, ja] - transformed[:, ja].mean()
            for jb in live[a + 1 :]:
                zb = transformed[:, jb] - transformed[:, jb].mean()
                if np.array_equal(za, zb):
                    matrix[ja, jb] = matrix[jb, ja] = 1.0
                elif np.array_equal(za, -zb):
                    matrix[ja, jb] = matrix[jb, ja] = -1.0
    return CorrelationMatrix(names=names, values=matrix, degenerate=tuple(degenerate))


def select_uncorrelated(matrix: CorrelationMatrix, threshold: float) -> list[str]:
    """Greedy pass in column order: keep a column iff |corr| with every
    already-kept column is strictly below the threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    kept: list[int] = []
    for j in range(len(matrix.names)):
        if all(abs(matrix.values[i, j]) < threshold for i in kept):
            kept.append(j)
    return [matrix.names[j] for j in kept]
