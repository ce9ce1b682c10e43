"""Linear regression without intercept, multicollinearity diagnostics, and
variable selection through correlation clique covers.

The model is ``y = sum_i a_i x_i + noise``; no constant column is added. Add
one to ``X`` explicitly if an intercept is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np
import scipy.linalg

from .cover import DEFAULT_EDGE_CAP, Cover, WeightFunction, best_cover, partition_from_cover
from .errors import Multicollinear
from .graph import Graph
from .matrices import ThresholdConfig, correlation_matrix, threshold_correlation

DEFAULT_COND_CAP = 1e12
EXACT_WITNESS_LIMIT = 12


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = np.array(self.y, dtype=float).reshape(-1)
        if X.ndim != 2:
            raise ValueError("X must be two-dimensional")
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} values")
        if X.shape[0] < 2:
            raise ValueError("at least two observations are required")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("dataset contains missing or non-finite values")
        labels = tuple(self.labels) if len(self.labels) else tuple(f"x{i + 1}" for i in range(X.shape[1]))
        if len(labels) != X.shape[1]:
            raise ValueError("one label per column required")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_table(cls, header: Sequence[str], table: np.ndarray, response: str | None) -> "Dataset":
        header = list(header)
        if response is None:
            return cls(table, np.zeros(table.shape[0]), tuple(header))
        if response not in header:
            raise ValueError(f"response column {response!r} not in header")
        j = header.index(response)
        keep = [i for i in range(len(header)) if i != j]
        return cls(table[:, keep], table[:, j], tuple(header[i] for i in keep))

    @property
    def n_obs(self) -> int:
        return self.X.shape[0]

    @property
    def n_vars(self) -> int:
        return self.X.shape[1]

    def subset(self, columns: Sequence[int]) -> "Dataset":
        columns = list(columns)
        return Dataset(self.X[:, columns], self.y, tuple(self.labels[i] for i in columns))


@dataclass(frozen=True)
class RegressionModel:
    coefficients: np.ndarray
    residual_variance: float
    method: str
    alpha: float
    condition_number: float
    labels: tuple
    rss: float
    flags: tuple = ()

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "alpha": self.alpha,
            "coefficients": dict(zip(self.labels, self.coefficients.tolist())),
            "residual_variance": self.residual_variance,
            "condition_number": self.condition_number,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class CollinearityReport:
    rank: int
    condition_number: float
    multicollinear: bool
    witnesses: dict  # dependent column label -> labels of a spanning subset
    exact_search: bool

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "condition_number": self.condition_number,
            "multicollinear": self.multicollinear,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
            "witness_search": "exact" if self.exact_search else "greedy",
        }


@dataclass(frozen=True)
class SignificanceReport:
    scores: dict
    ranking: tuple
    fallbacks: tuple = ()
    convention: str = "score = (RSS without variable - RSS full) / N"

    @property
    def most_significant(self):
        return self.ranking[0] if self.ranking else None

    def to_json(self) -> dict:
        return {
            "scores": dict(self.scores),
            "ranking": list(self.ranking),
            "most_significant": self.most_significant,
            "ridge_fallbacks": list(self.fallbacks),
            "convention": self.convention,
            "note": "per-variable ranking extends the single most-significant-variable definition",
        }


@dataclass(frozen=True)
class RepresentativeSet:
    groups: tuple
    representatives: tuple
    labels: tuple
    cross_correlation: float | None
    cover: Cover = field(repr=False)
    graph: Graph = field(repr=False)

    def representative_labels(self) -> list:
        return [self.labels[i] for i in self.representatives]

    def to_json(self) -> dict:
        return {
            "groups": [
                {"members": [self.labels[i] for i in grp], "representative": self.labels[rep]}
                for grp, rep in zip(self.groups, self.representatives)
            ],
            "representatives": self.representative_labels(),
            "max_cross_correlation": self.cross_correlation,
            "J": self.cover.value,
            "cover_method": self.cover.method,
        }


def _singular_values(X: np.ndarray) -> np.ndarray:
    if X.shape[1] == 0:
        return np.zeros(0)
    return np.linalg.svd(X, compute_uv=False)


def gram_condition_number(X: np.ndarray, alpha: float = 0.0) -> float:
    """Condition number of ``X^T X + alpha I`` from the singular values of X."""
    s = _singular_values(X)
    if s.size == 0:
        return 1.0
    eig = np.zeros(X.shape[1])
    eig[: s.size] = s**2
    lo, hi = eig.min() + alpha, eig.max() + alpha
    return math.inf if lo <= 0 else float(hi / lo)


def _residual_variance(rss: float, n_obs: int, n_vars: int) -> tuple[float, tuple]:
    if n_obs > n_vars:
        return rss / (n_obs - n_vars), ()
    return rss, ("degenerate-dof",)


def ols_fit(ds: Dataset, cond_cap: float = DEFAULT_COND_CAP) -> RegressionModel:
    """Least-squares coefficients via SVD; refuses numerically singular designs."""
    X, y = ds.X, ds.y
    rank = int(np.linalg.matrix_rank(X)) if ds.n_vars else 0
    cond = gram_condition_number(X)
    if rank < ds.n_vars or cond > cond_cap:
        raise Multicollinear(rank, cond, ds.n_vars)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    rss = float(np.sum((y - X @ coef) ** 2))
    var, flags = _residual_variance(rss, ds.n_obs, ds.n_vars)
    return RegressionModel(coef, var, "ols", 0.0, cond, ds.labels, rss, flags)


def ridge_fit(ds: Dataset, alpha: float) -> RegressionModel:
    """Solve ``(X^T X + alpha I) a = X^T y``; biased but always well posed for alpha > 0."""
    if not alpha > 0:
        raise ValueError("ridge requires alpha > 0")
    X, y = ds.X, ds.y
    gram = X.T @ X + alpha * np.eye(ds.n_vars)
    coef = scipy.linalg.solve(gram, X.T @ y, assume_a="pos")
    rss = float(np.sum((y - X @ coef) ** 2))
    var, flags = _residual_variance(rss, ds.n_obs, ds.n_vars)
    return RegressionModel(
        coef, var, "ridge", float(alpha), gram_condition_number(X, alpha), ds.labels, rss, ("biased",) + flags
    )


def default_ridge_alpha(X: np.ndarray) -> float:
    n = X.shape[1]
    tr = float(np.einsum("ij,ij->", X, X))
    return 1e-6 * tr / n if tr > 0 else 1e-6


# -- multicollinearity ------------------------------------------------------


def _in_span(X: np.ndarray, cols: Sequence[int], j: int, rtol: float) -> bool:
    x = X[:, j]
    norm = np.linalg.norm(x)
    if norm == 0:
        return True
    if not cols:
        return False
    A = X[:, list(cols)]
    coef, *_ = np.linalg.lstsq(A, x, rcond=None)
    return np.linalg.norm(x - A @ coef) <= rtol * norm


def multicollinearity_check(
    ds: Dataset, cond_cap: float = DEFAULT_COND_CAP, exact_limit: int = EXACT_WITNESS_LIMIT
) -> CollinearityReport:
    """Rank, conditioning and, for every column lying in the span of the columns
    before it, a smallest such spanning subset (greedy pruning above ``exact_limit``).
    """
    X = ds.X
    n = ds.n_vars
    rank = int(np.linalg.matrix_rank(X)) if n else 0
    cond = gram_condition_number(X)
    rtol = 1.0 / math.sqrt(cond_cap)
    exact = n <= exact_limit
    witnesses = {}
    basis: list[int] = []
    for j in range(n):
        if not _in_span(X, basis, j, rtol):
            basis.append(j)
            continue
        found: tuple | None = None
        if exact:
            for size in range(0, j + 1):
                found = next((c for c in combinations(range(j), size) if _in_span(X, c, j, rtol)), None)
                if found is not None:
                    break
        else:
            keep = list(basis)
            for c in list(keep):
                trial = [k for k in keep if k != c]
                if _in_span(X, trial, j, rtol):
                    keep = trial
            found = tuple(keep)
        witnesses[ds.labels[j]] = tuple(ds.labels[k] for k in found)
    flag = rank < n or cond > cond_cap or bool(witnesses)
    return CollinearityReport(rank, cond, flag, witnesses, exact)


# -- significance -------------------------------------------------------------


def _fit_rss(ds: Dataset, alpha: float | None, cond_cap: float) -> tuple[float, bool]:
    if ds.n_vars == 0:
        return float(np.sum(ds.y**2)), False
    try:
        return ols_fit(ds, cond_cap).rss, False
    except Multicollinear:
        a = alpha if alpha is not None else default_ridge_alpha(ds.X)
        return ridge_fit(ds, a).rss, True


def significance_scores(
    ds: Dataset, alpha: float | None = None, cond_cap: float = DEFAULT_COND_CAP
) -> SignificanceReport:
    """Increase in residual sum of squares per observation when each variable is dropped.

    Fits that OLS refuses fall back to ridge and are listed in ``fallbacks``.
    """
    N = ds.n_obs
    full, full_fallback = _fit_rss(ds, alpha, cond_cap)
    scores = {}
    fallbacks = ["<full model>"] if full_fallback else []
    for i, label in enumerate(ds.labels):
        rest = [k for k in range(ds.n_vars) if k != i]
        rss, fb = _fit_rss(ds.subset(rest), alpha, cond_cap)
        scores[label] = (rss - full) / N
        if fb:
            fallbacks.append(label)
    order = sorted(range(ds.n_vars), key=lambda i: (-scores[ds.labels[i]], i))
    return SignificanceReport(scores, tuple(ds.labels[i] for i in order), tuple(fallbacks))


# -- representatives ----------------------------------------------------------


def _central_member(group: Sequence[int], r: np.ndarray) -> int:
    if len(group) == 1:
        return group[0]
    sub = np.abs(r[np.ix_(group, group)])
    means = (sub.sum(axis=1) - np.diag(sub)) / (len(group) - 1)
    top = means.max()
    return next(v for v, m in zip(group, means) if m >= top - 1e-12)


def select_representatives(
    ds: Dataset,
    delta: float,
    w: WeightFunction | None = None,
    edge_cap: int = DEFAULT_EDGE_CAP,
) -> RepresentativeSet:
    """Group strongly correlated variables and pick one central variable per group.

    Groups come from the best vertex-disjoint clique cover of the graph joining
    variables with ``|r| > delta``; within a group the representative has the
    largest mean ``|r|`` to the other members.
    """
    r = correlation_matrix(ds.X, ds.labels)
    cfg = ThresholdConfig(delta, "correlation")
    g = threshold_correlation(r, cfg)
    w = (w or WeightFunction()).bind(r, cfg)
    cover = best_cover(g, w, "vertex-disjoint", edge_cap)
    groups = partition_from_cover(g.n, cover)
    reps = tuple(_central_member(grp, r.entries) for grp in groups)
    cross = None
    if len(reps) > 1:
        sub = np.abs(r.entries[np.ix_(reps, reps)])
        cross = float(sub[np.triu_indices(len(reps), k=1)].max())
    return RepresentativeSet(tuple(groups), reps, ds.labels, cross, cover, g)


def reduced_fit(ds: Dataset, reps: RepresentativeSet, cond_cap: float = DEFAULT_COND_CAP) -> RegressionModel:
    """OLS on the representative columns only. Multicollinearity is still reported if present."""
    if not reps.representatives:
        raise ValueError("no representatives to fit")
    return ols_fit(ds.subset(sorted(reps.representatives)), cond_cap)
