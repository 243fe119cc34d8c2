"""Missing-value imputation for series with NaN-marked gaps.

Two strategies:

* iterative - fill gaps with the mean, reconstruct at the target rank,
  restore the known samples, repeat until the gap values settle;
* subspace - estimate the signal subspace from the gap-free windows only,
  then fill each gap by averaging a forward recurrence prediction from the
  left and a backward one from the right (one-sided at the series ends).
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import GapStructureError
from .model import min_norm_lrr
from .validation import as_series, check_rank, check_window_length

__all__ = [
    "GapFillResult",
    "fill_iterative",
    "fill_subspace",
    "IterativeGapFiller",
    "SubspaceGapFiller",
]


@dataclass
class GapFillResult:
    """Completed series plus how each gap position was filled."""

    series: np.ndarray
    filled: dict  # 0-based position -> fill value
    converged: bool
    iterations: int = 0
    one_sided: tuple = field(default_factory=tuple)  # gap start positions


def _gap_runs(mask):
    """Contiguous missing runs as (start, stop) with stop exclusive."""
    runs = []
    start = None
    for i, missing in enumerate(mask):
        if missing and start is None:
            start = i
        elif not missing and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, mask.size))
    return runs


def fill_iterative(x, window_length, rank, tol=1e-8, max_iter=100):
    """Iterative low-rank imputation.

    Gaps start at the mean of the present samples; each sweep reconstructs
    the leading ``rank`` components and overwrites only the gap positions.
    Convergence compares successive reconstructions at the gaps, so at least
    two sweeps always run.  A result is returned even without convergence,
    with ``converged=False``.
    """
    from .lowrank import extract_signal  # deferred: lowrank builds on this package

    x = as_series(x, allow_missing=True)
    mask = np.isnan(x)
    n_present = int((~mask).sum())
    if n_present < rank + 1:
        raise GapStructureError(
            f"need at least rank + 1 = {rank + 1} present samples, have {n_present}"
        )
    L, K = check_window_length(x.size, window_length)
    check_rank(rank, L, K)

    work = x.copy()
    work[mask] = np.mean(x[~mask])
    previous = None
    converged = False
    iterations = 0
    for iterations in range(1, int(max_iter) + 1):
        signal = extract_signal(work, L, rank)
        current = signal[mask]
        work[mask] = current
        if previous is not None and (
            current.size == 0 or np.max(np.abs(current - previous)) < tol
        ):
            converged = True
            break
        previous = current
    return GapFillResult(
        series=work,
        filled={int(i): float(work[i]) for i in np.flatnonzero(mask)},
        converged=converged,
        iterations=iterations,
    )


def fill_subspace(x, window_length, rank):
    """Subspace imputation by two-sided recurrence prediction.

    The signal subspace comes from the SVD of the trajectory columns free of
    missing entries; every gap needs an intact seed run of L - 1 samples on
    at least one side.  Boundary gaps are filled one-sided and flagged.
    """
    x = as_series(x, allow_missing=True)
    mask = np.isnan(x)
    L, K = check_window_length(x.size, window_length)
    if rank < 1:
        raise ValueError("rank must be at least 1")
    check_rank(rank, L, K)

    gaps = _gap_runs(mask)
    if not gaps:
        return GapFillResult(series=x.copy(), filled={}, converged=True)

    nan_count = np.convolve(mask.astype(int), np.ones(L, dtype=int), mode="valid")
    complete = np.flatnonzero(nan_count == 0)
    if complete.size < max(rank, 1):
        raise GapStructureError(
            f"only {complete.size} gap-free windows of length {L}; "
            f"need at least {rank} to estimate the subspace"
        )
    columns = np.stack([x[j : j + L] for j in complete], axis=1)
    U_full, spectrum, _ = np.linalg.svd(columns, full_matrices=False)
    cutoff = np.finfo(np.float64).eps * max(columns.shape) * spectrum[0] if spectrum[0] else 0.0
    if spectrum.size < rank or spectrum[rank - 1] <= cutoff:
        raise GapStructureError("gap-free windows span fewer dimensions than the requested rank")
    U = U_full[:, :rank]

    forward = min_norm_lrr(U)
    backward = min_norm_lrr(U[::-1, :])
    order = forward.order

    fwd = x.copy()
    for start, stop in gaps:
        seed = fwd[max(start - order, 0) : start]
        if seed.size == order and not np.isnan(seed).any():
            fwd[start:stop] = forward.extend(seed, stop - start)
    bwd = x[::-1].copy()
    for start, stop in _gap_runs(mask[::-1]):
        seed = bwd[max(start - order, 0) : start]
        if seed.size == order and not np.isnan(seed).any():
            bwd[start:stop] = backward.extend(seed, stop - start)
    bwd = bwd[::-1]

    out = x.copy()
    one_sided = []
    for start, stop in gaps:
        seg = slice(start, stop)
        f_ok = not np.isnan(fwd[seg]).any()
        b_ok = not np.isnan(bwd[seg]).any()
        if f_ok and b_ok:
            out[seg] = (fwd[seg] + bwd[seg]) / 2.0
        elif f_ok or b_ok:
            out[seg] = fwd[seg] if f_ok else bwd[seg]
            one_sided.append(start)
        else:
            raise GapStructureError(
                f"gap at positions [{start}, {stop}) has no intact seed run of "
                f"{order} samples on either side"
            )
    return GapFillResult(
        series=out,
        filled={int(i): float(out[i]) for i in np.flatnonzero(mask)},
        converged=True,
        one_sided=tuple(one_sided),
    )


class _GapFillerBase(BaseEstimator, TransformerMixin):
    def fit(self, X, y=None):
        as_series(X, allow_missing=True)
        return self

    def transform(self, X):
        result = self._fill(X)
        self.converged_ = result.converged
        self.iterations_ = result.iterations
        self.fill_values_ = result.filled
        self.one_sided_ = result.one_sided
        return result.series


class IterativeGapFiller(_GapFillerBase):
    """Transformer filling NaN gaps by iterated low-rank reconstruction."""

    def __init__(self, window_length, rank, tol=1e-8, max_iter=100):
        self.window_length = window_length
        self.rank = rank
        self.tol = tol
        self.max_iter = max_iter

    def _fill(self, x):
        return fill_iterative(x, self.window_length, self.rank,
                              tol=self.tol, max_iter=self.max_iter)


class SubspaceGapFiller(_GapFillerBase):
    """Transformer filling NaN gaps by two-sided recurrence prediction."""

    def __init__(self, window_length, rank):
        self.window_length = window_length
        self.rank = rank

    def _fill(self, x):
        return fill_subspace(x, self.window_length, self.rank)
