"""Distance and correlation matrices, and the threshold graphs built from them."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import MissingValues, TooFewObjects, TooFewObservations, ZeroVarianceColumn
from .graph import Graph

CORRELATION_TOL = 1e-9


@dataclass(frozen=True)
class DistanceMatrix:
    entries: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.all(np.isfinite(a)):
            raise ValueError("distance matrix entries must be finite")
        if np.any(a < 0):
            raise ValueError("distances must be nonnegative")
        if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(a) != 0):
            raise ValueError("distance matrix must have a zero diagonal")
        a.setflags(write=False)
        labels = tuple(self.labels) if len(self.labels) else tuple(range(a.shape[0]))
        if len(labels) != a.shape[0]:
            raise ValueError("one label per object required")
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "entries": self.entries.tolist()}


@dataclass(frozen=True)
class CorrelationMatrix:
    entries: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("correlation matrix must be square")
        if not np.all(np.isfinite(a)):
            raise ValueError("correlation entries must be finite")
        if np.any(np.abs(a) > 1 + CORRELATION_TOL):
            raise ValueError("correlation entries must lie in [-1, 1]")
        if not np.allclose(a, a.T, rtol=0, atol=CORRELATION_TOL):
            raise ValueError("correlation matrix must be symmetric")
        if not np.allclose(np.diag(a), 1.0, rtol=0, atol=CORRELATION_TOL):
            raise ValueError("correlation matrix must have a unit diagonal")
        a = np.clip(a, -1.0, 1.0)
        a.setflags(write=False)
        labels = tuple(self.labels) if len(self.labels) else tuple(range(a.shape[0]))
        if len(labels) != a.shape[0]:
            raise ValueError("one label per variable required")
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "entries": self.entries.tolist()}


@dataclass(frozen=True)
class ThresholdConfig:
    """Threshold level and which rule to apply.

    Distance mode joins pairs with ``d <= delta``; correlation mode joins pairs
    with ``|r| > delta``.
    """

    delta: float
    mode: Literal["distance", "correlation"] = "distance"

    def __post_init__(self):
        if self.mode not in ("distance", "correlation"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if not np.isfinite(self.delta) or self.delta < 0:
            raise ValueError("delta must be a finite nonnegative number")
        if self.mode == "correlation" and self.delta >= 1:
            raise ValueError("correlation thresholds must be below 1")


def _as_table(data) -> np.ndarray:
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[1] < 1:
        raise ValueError("observation table must be two-dimensional with at least one column")
    if np.isnan(x).any():
        rows, cols = np.nonzero(np.isnan(x))
        raise MissingValues(f"missing value at row {rows[0]}, column {cols[0]}")
    return x


def distance_matrix(
    data, metric: Literal["euclidean", "manhattan"] = "euclidean", labels: Sequence | None = None
) -> DistanceMatrix:
    """Pairwise distances between rows."""
    x = _as_table(data)
    if x.shape[0] < 2:
        raise TooFewObjects("at least two objects (rows) are required")
    scipy_metric = {"euclidean": "euclidean", "manhattan": "cityblock"}.get(metric)
    if scipy_metric is None:
        raise ValueError(f"unsupported metric {metric!r}")
    d = squareform(pdist(x, metric=scipy_metric))
    return DistanceMatrix(d, tuple(labels) if labels is not None else ())


def correlation_matrix(data, labels: Sequence | None = None) -> CorrelationMatrix:
    """Pearson correlations between columns."""
    x = _as_table(data)
    if x.shape[0] < 3:
        raise TooFewObservations("at least three observations are required")
    names = tuple(labels) if labels is not None else tuple(range(x.shape[1]))
    centred = x - x.mean(axis=0)
    ss = np.einsum("ij,ij->j", centred, centred)
    scale = np.maximum(np.abs(x).max(axis=0), 1.0)
    for j in range(x.shape[1]):
        if ss[j] <= (1e-13 * scale[j]) ** 2 * x.shape[0]:
            raise ZeroVarianceColumn(names[j])
    z = centred / np.sqrt(ss)
    r = z.T @ z
    r = (r + r.T) / 2
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrix(np.clip(r, -1.0, 1.0), names)


def threshold_distance(d: DistanceMatrix, cfg: ThresholdConfig) -> Graph:
    if cfg.mode != "distance":
        raise ValueError("threshold_distance needs a distance-mode config")
    iu, ju = np.triu_indices(d.size, k=1)
    keep = d.entries[iu, ju] <= cfg.delta
    return Graph(d.labels, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def threshold_correlation(r: CorrelationMatrix, cfg: ThresholdConfig) -> Graph:
    if cfg.mode != "correlation":
        raise ValueError("threshold_correlation needs a correlation-mode config")
    iu, ju = np.triu_indices(r.size, k=1)
    keep = np.abs(r.entries[iu, ju]) > cfg.delta
    return Graph(r.labels, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


# -- CSV ingestion ----------------------------------------------------------


def read_observations(text: str) -> tuple[list[str], np.ndarray]:
    """Header row of column names, then numeric rows. Empty cells become NaN."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise ValueError("CSV input is empty")
    header = [c.strip() for c in rows[0]]
    values = []
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} cells, got {len(row)}")
        try:
            values.append([float(c) if c.strip() else np.nan for c in row])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return header, np.array(values, dtype=float).reshape(len(values), len(header))


def read_matrix(text: str) -> tuple[list, np.ndarray]:
    """Square numeric table; a non-numeric first row is taken as labels."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ValueError("matrix CSV is empty")
    labels: list = []
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        labels = [c.strip() for c in rows[0]]
        rows = rows[1:]
    try:
        a = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"matrix CSV: {exc}") from None
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix CSV must be square")
    if not labels:
        labels = list(range(a.shape[0]))
    return labels, a
