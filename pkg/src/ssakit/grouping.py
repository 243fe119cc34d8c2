"""Grouping utilities: validation, automatic identification, clustering and
the linear-filter view of elementary reconstruction.

Eigentriple indices are 1-based everywhere in this module.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform

from .exceptions import GroupingOverlapError

__all__ = [
    "normalize_grouping",
    "eigenvector_periodogram",
    "trend_indices",
    "periodic_pairs",
    "cluster_components",
    "ReconstructionFilter",
    "midpoint_filter",
    "last_point_weights",
]

RESERVED_GROUP_NAMES = ("residual", "centering")


def normalize_grouping(groups, n_components):
    """Validate a named grouping: disjoint sets of indices within [1, k].

    Returns a dict mapping each name to a sorted tuple of indices.
    """
    if not isinstance(groups, dict):
        raise TypeError("grouping must be a mapping of name -> indices")
    seen = {}
    out = {}
    for name, indices in groups.items():
        name = str(name)
        if name in RESERVED_GROUP_NAMES:
            raise ValueError(f"group name {name!r} is reserved")
        if name in out:
            raise ValueError(f"duplicate group name {name!r}")
        idx = sorted(int(i) for i in indices)
        for i in idx:
            if not 1 <= i <= n_components:
                raise ValueError(f"eigentriple index {i} outside [1, {n_components}]")
            if i in seen:
                raise GroupingOverlapError(
                    f"eigentriple {i} appears in both {seen[i]!r} and {name!r}"
                )
            seen[i] = name
        if len(idx) != len(set(idx)):
            raise ValueError(f"duplicate indices inside group {name!r}")
        out[name] = tuple(idx)
    return out


def eigenvector_periodogram(u):
    """Periodogram of an eigenvector on the frequency grid {j / L}.

    Returns ``(frequencies, power)`` where ``power[j]`` is the mass carried
    by grid frequency ``j / L`` and ``power.sum() == L * ||u||^2``.
    """
    u = np.asarray(u, dtype=np.float64)
    L = u.size
    spec = np.abs(np.fft.rfft(u)) ** 2
    power = spec.copy()
    # interior bins fold the conjugate half of the spectrum
    upper = L // 2 if L % 2 == 0 else (L - 1) // 2 + 1
    power[1:upper] *= 2.0
    freqs = np.arange(power.size) / L
    return freqs, power


def _peak_and_share(u):
    freqs, power = eigenvector_periodogram(u)
    total = power.sum()
    if total <= 0:
        return 0.0, 0.0
    j = int(np.argmax(power))
    return float(freqs[j]), float(power[j] / total)


def trend_indices(ssa, low_freq_cutoff=1 / 24, threshold=0.9):
    """Eigentriples whose eigenvector periodogram mass on [0, cutoff]
    exceeds ``threshold`` - the slowly-varying (trend) components."""
    if not 0 < low_freq_cutoff < 0.5:
        raise ValueError("low_freq_cutoff must lie in (0, 0.5)")
    picked = []
    for m in range(ssa.n_components_):
        freqs, power = eigenvector_periodogram(ssa.left_vectors_[:, m])
        total = power.sum()
        if total <= 0:
            continue
        share = power[freqs <= low_freq_cutoff + 1e-12].sum() / total
        if share > threshold:
            picked.append(m + 1)
    return picked


def periodic_pairs(ssa, freq_tol=None, share_threshold=0.5):
    """Adjacent eigentriple pairs whose periodograms peak at one shared
    frequency: the signature of a sine-wave component.

    Returns a list of ``(i, i+1, frequency)`` with 1-based indices.  The
    frequency-0 bin is excluded so trend components never pair up.
    """
    L = ssa.window_length_
    tol = 1.0 / L if freq_tol is None else float(freq_tol)
    pairs = []
    m = 1
    while m < ssa.n_components_:
        f1, s1 = _peak_and_share(ssa.left_vectors_[:, m - 1])
        f2, s2 = _peak_and_share(ssa.left_vectors_[:, m])
        if (
            f1 > 0 and f2 > 0
            and abs(f1 - f2) <= tol + 1e-12
            and s1 >= share_threshold and s2 >= share_threshold
        ):
            pairs.append((m, m + 1, (f1 + f2) / 2.0))
            m += 2
        else:
            m += 1
    return pairs


def cluster_components(wcor, n_groups):
    """Partition eigentriples by average-linkage hierarchical clustering on
    the dissimilarity ``1 - |wcor|``; returns ``{"g1": [...], ...}``."""
    w = np.asarray(wcor, dtype=np.float64)
    k = w.shape[0]
    if w.shape != (k, k):
        raise ValueError("w-correlation matrix must be square")
    if not 1 <= n_groups <= k:
        raise ValueError(f"n_groups must lie in [1, {k}]")
    if not np.any(np.abs(w)):
        raise ValueError("degenerate all-zero w-correlation matrix")
    if n_groups == k:
        labels = np.arange(1, k + 1)
    elif n_groups == 1:
        labels = np.ones(k, dtype=int)
    else:
        dist = 1.0 - np.abs(w)
        np.fill_diagonal(dist, 0.0)
        dist = (dist + dist.T) / 2.0
        tree = linkage(squareform(dist, checks=False), method="average")
        labels = fcluster(tree, t=n_groups, criterion="maxclust")
    groups = {}
    for m, lab in enumerate(labels, start=1):
        groups.setdefault(int(lab), []).append(m)
    # stable naming by smallest member index
    ordered = sorted(groups.values(), key=lambda idx: idx[0])
    return {f"g{i + 1}": members for i, members in enumerate(ordered)}


@dataclass(frozen=True)
class ReconstructionFilter:
    """Symmetric linear filter reproducing one elementary component away
    from the series ends.

    ``coefficients[t]`` is the weight at lag ``t - (L - 1)``; the filter is
    symmetric in the lag.
    """

    coefficients: np.ndarray
    window_length: int = field(repr=False)

    @property
    def lags(self):
        L = self.window_length
        return np.arange(-(L - 1), L)

    def response(self, frequencies):
        """Frequency response ``|sum_j h_j e^{-2 pi i f j}|`` (real-valued
        here since the filter is symmetric)."""
        f = np.atleast_1d(np.asarray(frequencies, dtype=np.float64))
        L = self.window_length
        h = self.coefficients
        j = np.arange(1, L)
        # h_0 + 2 sum_{j>0} h_j cos(2 pi f j)
        vals = h[L - 1] + 2.0 * np.cos(2 * np.pi * np.outer(f, j)) @ h[L:]
        return vals if vals.size > 1 else float(vals[0])

    def apply(self, x):
        """Filter a series; returns ``(values, positions)`` where positions
        are the 0-based sample indices [L-1, N-L] on which the filter output
        equals the elementary reconstruction."""
        x = np.asarray(x, dtype=np.float64)
        n = x.size
        L = self.window_length
        if n < 2 * L - 1:
            raise ValueError("series too short for the filter's valid range")
        conv = np.convolve(x, self.coefficients)
        positions = np.arange(L - 1, n - L + 1)
        return conv[2 * L - 2 : n], positions


def midpoint_filter(u):
    """Filter whose output on the middle of the series equals the elementary
    component of eigenvector ``u``: coefficients
    ``h_j = sum_k u_k u_{k+|j|} / L`` for ``|j| < L``.

    A constant eigenvector yields the triangular (Bartlett) filter
    ``(L - |j|) / L^2``.
    """
    u = np.asarray(u, dtype=np.float64)
    L = u.size
    acf = np.correlate(u, u, mode="full") / L  # lags -(L-1) .. L-1
    return ReconstructionFilter(coefficients=acf, window_length=L)


def last_point_weights(u):
    """Causal weights reconstructing the final point of the elementary
    component: ``x~_N = sum_i w_i x_{N-i}`` with ``w = u_L * reversed(u)``.

    The dot product runs over the reversed tail ``(x_N, ..., x_{N-L+1})``.
    """
    u = np.asarray(u, dtype=np.float64)
    return u[-1] * u[::-1]
