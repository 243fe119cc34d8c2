"""Structured low-rank approximation of a series.

``extract_signal`` is the one-shot projection pipeline: embed, truncate the
spectrum to rank r, project back onto Hankel matrices, read off the series.
``cadzow`` repeats that pair of projections until the series stabilises on a
(numerically) rank-r trajectory matrix; its first sweep reproduces
``extract_signal`` exactly.  ``select_rank`` scores every candidate rank
with an information criterion of the residual sum of squares.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .decomposition import SSA
from .hankel import antidiagonal_weights
from .validation import as_series, check_rank, check_window_length, default_window_length

__all__ = [
    "extract_signal",
    "cadzow",
    "CadzowResult",
    "select_rank",
    "RankSelection",
    "CadzowFilter",
    "information_criteria",
]


def _leading_svd(x, window_length, n_triples):
    est = SSA(window_length=window_length, n_components=n_triples).fit(x)
    return est.sigma_, est.left_vectors_, est.right_vectors_, est


def extract_signal(x, window_length, rank):
    """Rank-``rank`` signal estimate: reconstruction of the leading triples."""
    x = as_series(x)
    L, K = check_window_length(x.size, window_length)
    rank = check_rank(rank, L, K)
    if rank == 0:
        return np.zeros(x.size)
    _, _, _, est = _leading_svd(x, L, rank)
    return est.reconstruct(range(1, est.n_components_ + 1))


@dataclass
class CadzowResult:
    """Output of the alternating rank/Hankel projections."""

    series: np.ndarray
    iterations: int
    converged: bool
    objective: np.ndarray  # distance of each iterate's trajectory matrix to the rank-r set
    change: np.ndarray  # relative trajectory-space change per sweep
    rank_gap: float  # sigma_{r+1} / sigma_r of the final trajectory matrix


def cadzow(x, window_length, rank, max_iter=50, tol=1e-8):
    """Alternating projections onto rank-``rank`` and Hankel matrices.

    Stops when the relative trajectory-space change of a sweep drops below
    ``tol`` or after ``max_iter`` sweeps (the partial result is returned
    with ``converged=False``).  The recorded objective - the distance from
    the current trajectory matrix to the rank-r set - is nonincreasing.
    """
    x = as_series(x)
    L, K = check_window_length(x.size, window_length)
    rank = check_rank(rank, L, K)
    weights = antidiagonal_weights(x.size, L)
    if rank == 0:
        return CadzowResult(series=np.zeros(x.size), iterations=1, converged=True,
                            objective=np.array([float(np.sqrt(np.sum(weights * x**2)))]),
                            change=np.array([0.0]), rank_gap=float("nan"))

    current = x
    objective = []
    change = []
    converged = False
    iterations = 0
    for iterations in range(1, int(max_iter) + 1):
        sigma, U, V, est = _leading_svd(current, L, rank)
        energy = float(np.sum(weights * current**2))
        tail = max(energy - float(np.sum(sigma**2)), 0.0)
        objective.append(np.sqrt(tail))
        nxt = est.reconstruct(range(1, est.n_components_ + 1))
        denom = np.sqrt(energy) if energy > 0 else 1.0
        step = float(np.sqrt(np.sum(weights * (nxt - current) ** 2)) / denom)
        change.append(step)
        current = nxt
        if step < tol:
            converged = True
            break

    gap_sigma = SSA(window_length=L, n_components=min(rank + 1, min(L, K))).fit(current).sigma_
    if gap_sigma.size >= rank and gap_sigma[rank - 1] > 0:
        rank_gap = float(gap_sigma[rank] / gap_sigma[rank - 1]) if gap_sigma.size > rank else 0.0
    else:
        rank_gap = float("nan")
    return CadzowResult(series=current, iterations=iterations, converged=converged,
                        objective=np.asarray(objective), change=np.asarray(change),
                        rank_gap=rank_gap)


def information_criteria(rss, n_samples, rank):
    """(AIC, BIC) for a rank-``rank`` signal model with 2*rank parameters:
    ``N ln(RSS / N) + 4 d`` and ``N ln(RSS / N) + 2 d ln N``."""
    n = float(n_samples)
    base = n * np.log(max(rss / n, 1e-300))
    return base + 4.0 * rank, base + 2.0 * rank * np.log(n)


@dataclass
class RankSelection:
    """Per-rank residuals and criteria with the chosen minimiser."""

    candidates: np.ndarray
    rss: np.ndarray
    aic: np.ndarray
    bic: np.ndarray
    criterion: str
    selected: int

    def to_dict(self):
        return {
            "candidates": self.candidates.tolist(),
            "rss": self.rss.tolist(),
            "aic": self.aic.tolist(),
            "bic": self.bic.tolist(),
            "criterion": self.criterion,
            "selected": self.selected,
        }


def select_rank(x, window_length, max_rank, criterion="bic", estimator="cadzow",
                max_iter=25, tol=1e-8):
    """Choose the signal rank minimising AIC or BIC over 0..``max_rank``.

    The residual sum of squares at each rank comes from the Cadzow estimate
    (default) or the plain one-shot SSA estimate (``estimator="ssa"``),
    measured against the observed series in the unweighted norm.
    """
    x = as_series(x)
    L, K = check_window_length(x.size, window_length)
    if criterion not in ("aic", "bic"):
        raise ValueError(f"criterion must be 'aic' or 'bic', got {criterion!r}")
    if estimator not in ("cadzow", "ssa"):
        raise ValueError(f"estimator must be 'cadzow' or 'ssa', got {estimator!r}")
    max_rank = check_rank(max_rank, L, K)
    candidates = np.arange(max_rank + 1)
    rss = np.empty(candidates.size)
    aic = np.empty(candidates.size)
    bic = np.empty(candidates.size)
    for d in candidates:
        if estimator == "cadzow":
            estimate = cadzow(x, L, int(d), max_iter=max_iter, tol=tol).series
        else:
            estimate = extract_signal(x, L, int(d))
        rss[d] = float(np.sum((x - estimate) ** 2))
        aic[d], bic[d] = information_criteria(rss[d], x.size, int(d))
    scores = bic if criterion == "bic" else aic
    return RankSelection(candidates=candidates, rss=rss, aic=aic, bic=bic,
                         criterion=criterion, selected=int(candidates[np.argmin(scores)]))


class CadzowFilter(BaseEstimator, TransformerMixin):
    """Transformer running Cadzow iterations at a fixed window and rank."""

    def __init__(self, window_length=None, rank=2, max_iter=50, tol=1e-8):
        self.window_length = window_length
        self.rank = rank
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        as_series(X)
        return self

    def transform(self, X):
        x = as_series(X)
        L = self.window_length if self.window_length is not None else default_window_length(x.size)
        result = cadzow(x, L, self.rank, max_iter=self.max_iter, tol=self.tol)
        self.iterations_ = result.iterations
        self.converged_ = result.converged
        self.objective_ = result.objective
        self.rank_gap_ = result.rank_gap
        return result.series
