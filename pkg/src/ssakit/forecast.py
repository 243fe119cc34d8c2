"""Forecasting on top of a fitted decomposition.

Recurrent forecasting continues the reconstructed component with its
minimum-norm governing recurrence.  Vector forecasting instead extends the
sequence of lagged vectors: each new vector is the projection of the shifted
previous one onto the component subspace, its final coordinate completed by
the same recurrence, and the extended matrix is diagonal-averaged.  On exact
finite-rank signals the two coincide.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from .decomposition import SSA
from .hankel import antidiagonal_weights, triple_antidiagonal_sums
from .model import min_norm_lrr
from .validation import as_series, check_rank

__all__ = [
    "ForecastResult",
    "forecast_recurrent",
    "forecast_vector",
    "bootstrap_forecast",
    "SSAForecaster",
]


@dataclass
class ForecastResult:
    """Fitted (reconstructed) signal plus values beyond the series end."""

    fitted: np.ndarray
    values: np.ndarray
    method: str
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    level: Optional[float] = None
    degenerate_intervals: bool = False

    @property
    def horizon(self):
        return self.values.size

    def to_dict(self):
        doc = {"method": self.method, "fitted": self.fitted.tolist(), "values": self.values.tolist()}
        if self.lower is not None:
            doc["lower"] = self.lower.tolist()
            doc["upper"] = self.upper.tolist()
            doc["level"] = self.level
            doc["degenerate_intervals"] = self.degenerate_intervals
        return doc


def _group_basis(ssa, group):
    idx = ssa._group_indices(group)
    if idx.size == 0:
        raise ValueError("cannot forecast an empty group")
    return idx, ssa.left_vectors_[:, idx]


def forecast_recurrent(ssa, group, horizon):
    """Continue the reconstructed group with its min-norm recurrence."""
    idx, U = _group_basis(ssa, group)
    lrr = min_norm_lrr(U)
    fitted = ssa.reconstruct(idx + 1)
    values = lrr.extend(fitted, int(horizon)) if horizon else np.zeros(0)
    return ForecastResult(fitted=fitted, values=values, method="recurrent")


def forecast_vector(ssa, group, horizon):
    """Extend the lagged-vector sequence inside the component subspace."""
    idx, U = _group_basis(ssa, group)
    h = int(horizon)
    lrr = min_norm_lrr(U)  # also validates nu^2 < 1
    head = lrr.coefficients[::-1]  # (a_{L-1}, ..., a_1): dot with an ascending window
    sigma = ssa.sigma_[idx]
    V = ssa.right_vectors_[:, idx]
    L, K, n = ssa.window_length_, ssa.n_windows_, ssa.n_samples_

    pi = U[-1, :]
    nu2 = float(pi @ pi)
    lower = U[:-1, :]

    sums = np.zeros(n + h)
    sums[:n] = triple_antidiagonal_sums(sigma, U, V)
    z = U @ (sigma * V[-1, :])  # final lagged vector of the rank-r trajectory
    for j in range(h):
        tail = z[1:]
        coeff = lower.T @ tail
        proj = lower @ (coeff + pi * (pi @ coeff) / (1.0 - nu2))
        z = np.append(proj, head @ proj)
        sums[K + j : K + j + L] += z
    series = sums / antidiagonal_weights(n + h, L)
    return ForecastResult(fitted=series[:n], values=series[n:], method="vector")


def bootstrap_forecast(x, window_length, rank=None, horizon=1, n_surrogates=100,
                       level=0.95, seed=None, method="recurrent", noise="resample",
                       group=None, target="prediction"):
    """Forecast with bootstrap intervals.

    The signal is estimated from the chosen eigentriples (the leading
    ``rank`` when no explicit ``group`` is given); surrogate series are the
    estimated signal plus resampled (or Gaussian) residuals, each one
    re-decomposed and forecast with the same index set; the interval at each
    step is the empirical [(1-level)/2, (1+level)/2] quantile band, widened
    if necessary to contain the point forecast.  Deterministic for a fixed
    ``seed``.

    ``target="prediction"`` (default) adds a fresh residual draw to every
    surrogate forecast so the band covers future observations;
    ``target="confidence"`` leaves the band around the signal forecast only.
    """
    x = as_series(x)
    if n_surrogates < 100:
        raise ValueError("bootstrap needs at least 100 surrogate series")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    if noise not in ("resample", "gaussian"):
        raise ValueError(f"unknown noise mode {noise!r}")
    if target not in ("prediction", "confidence"):
        raise ValueError(f"unknown interval target {target!r}")
    forecast_one = forecast_vector if method == "vector" else forecast_recurrent

    if group is not None:
        indices = sorted(int(i) for i in group)
        if not indices:
            raise ValueError("cannot forecast an empty group")
        k = max(indices)
    elif rank is not None:
        k = int(rank)
        indices = list(range(1, k + 1))
    else:
        raise ValueError("either rank or group must be given")

    base = _fit_components(x, window_length, k)
    point = forecast_one(base, _clip_indices(indices, base), horizon)
    residuals = x - point.fitted

    spread = float(np.sqrt(np.mean(residuals**2)))
    degenerate = spread <= 1e-12 * max(1.0, float(np.max(np.abs(x))))
    if degenerate:
        point.lower = point.values.copy()
        point.upper = point.values.copy()
        point.level = level
        point.degenerate_intervals = True
        return point

    children = np.random.SeedSequence(seed).spawn(int(n_surrogates))
    sims = np.empty((int(n_surrogates), int(horizon)))
    for b, child in enumerate(children):
        rng = np.random.default_rng(child)
        if noise == "resample":
            pert = rng.choice(residuals, size=x.size + int(horizon), replace=True)
        else:
            pert = rng.normal(0.0, spread, size=x.size + int(horizon))
        surrogate = point.fitted + pert[: x.size]
        est = _fit_components(surrogate, window_length, k)
        sims[b] = forecast_one(est, _clip_indices(indices, est), horizon).values
        if target == "prediction":
            sims[b] += pert[x.size :]
    alpha = 1.0 - level
    point.lower = np.minimum(np.quantile(sims, alpha / 2, axis=0), point.values)
    point.upper = np.maximum(np.quantile(sims, 1 - alpha / 2, axis=0), point.values)
    point.level = level
    return point


def _fit_components(x, window_length, k):
    x = as_series(x)
    est = SSA(window_length=window_length, n_components=int(k))
    est.fit(x)
    check_rank(k, est.window_length_, est.n_windows_)
    return est


def _clip_indices(indices, est):
    kept = [i for i in indices if i <= est.n_components_]
    return kept if kept else [1]


class SSAForecaster(BaseEstimator):
    """Estimator facade: fit a leading-rank decomposition, then predict
    ``horizon`` values ahead.

    Parameters
    ----------
    window_length : int, optional
    rank : int
        Number of leading eigentriples treated as the signal.
    method : {"recurrent", "vector"}
    """

    def __init__(self, window_length=None, rank=2, method="recurrent"):
        self.window_length = window_length
        self.rank = rank
        self.method = method

    def fit(self, X, y=None):
        if self.method not in ("recurrent", "vector"):
            raise ValueError(f"unknown forecast method {self.method!r}")
        self.ssa_ = SSA(window_length=self.window_length, n_components=int(self.rank)).fit(X)
        return self

    def predict(self, horizon):
        """Point forecast ``horizon`` steps past the end of the fitted series."""
        return self.forecast(horizon).values

    def forecast(self, horizon, intervals=False, level=0.95, n_surrogates=100, seed=None):
        if not hasattr(self, "ssa_"):
            raise RuntimeError("this forecaster is not fitted yet; call fit first")
        group = range(1, self.ssa_.n_components_ + 1)
        if not intervals:
            fn = forecast_vector if self.method == "vector" else forecast_recurrent
            return fn(self.ssa_, group, horizon)
        return bootstrap_forecast(self.ssa_.series_, self.ssa_.window_length_, self.rank,
                                  horizon, n_surrogates=n_surrogates, level=level,
                                  seed=seed, method=self.method)
