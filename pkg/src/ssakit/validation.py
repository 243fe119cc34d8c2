"""Input validation helpers used by every estimator and function."""

import numpy as np

from .exceptions import MissingValueError, WindowLengthError


def as_series(x, allow_missing=False, min_length=3):
    """Coerce ``x`` to a 1-d float array, treating NaN as a missing sample.

    Parameters
    ----------
    x : array-like
        One-dimensional sequence of samples (a single-column 2-d array is
        accepted and squeezed).
    allow_missing : bool
        When False, any NaN raises :class:`MissingValueError`.
    min_length : int
        Minimum admissible length.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d series, got array of shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"series too short: {arr.size} samples, need at least {min_length}")
    mask = np.isnan(arr)
    if mask.any():
        if not allow_missing:
            raise MissingValueError(
                f"series has {int(mask.sum())} missing samples; operation requires a complete series"
            )
        if mask.all():
            raise MissingValueError("series has no present samples")
    if np.isinf(arr).any():
        raise ValueError("series contains non-finite values")
    return np.ascontiguousarray(arr)


def check_window_length(n_samples, window_length):
    """Validate ``1 < L < N`` and return ``(L, K)`` with ``K = N - L + 1``."""
    L = int(window_length)
    if not 1 < L < n_samples:
        raise WindowLengthError(
            f"window length must satisfy 1 < L < N; got L={L} for N={n_samples}"
        )
    return L, n_samples - L + 1


def default_window_length(n_samples, method="basic"):
    """Default window: 0.4*N for signal extraction, min(N//4, 100) for the
    stationary (Toeplitz) variant which favours short windows."""
    if method == "toeplitz":
        return max(2, min(n_samples // 4, 100))
    return max(2, int(round(0.4 * n_samples)))


def check_n_components(n_components, max_components):
    k = int(n_components)
    if not 0 <= k <= max_components:
        raise ValueError(f"n_components must lie in [0, {max_components}]; got {k}")
    return k


def check_rank(rank, window_length, n_windows):
    r = int(rank)
    if not 0 <= r < min(window_length, n_windows):
        raise ValueError(
            f"rank must satisfy 0 <= r < min(L, K) = {min(window_length, n_windows)}; got {r}"
        )
    return r
