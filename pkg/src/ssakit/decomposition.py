"""SSA decomposition estimators.

The :class:`SSA` estimator embeds a series into its trajectory matrix,
computes leading eigentriples and exposes grouping, reconstruction and
w-correlation diagnostics.  Three variants are available:

* ``method="basic"`` - SVD of the trajectory matrix;
* ``method="toeplitz"`` - eigenvectors of the lag-covariance matrix
  estimated as an exact Toeplitz matrix (for near-stationary series);
* ``centering="double"`` - row and column means are projected out before
  the SVD and kept as a dedicated "centering" component, which helps to
  extract linear trends.
"""

import warnings

import numpy as np
from scipy.fft import irfft, next_fast_len, rfft
from scipy.linalg import eigh, toeplitz
from sklearn.base import BaseEstimator

from .hankel import (
    CenteredHankelOperator,
    HankelOperator,
    antidiagonal_weights,
    elementary_series,
    triples_to_series,
)
from .svd import DENSE_CELL_LIMIT, truncated_svd
from .validation import as_series, check_n_components, check_window_length, default_window_length

__all__ = ["SSA", "toeplitz_covariance"]

RANK_CUTOFF = 1e-11


def toeplitz_covariance(x, window_length):
    """Toeplitz lag-covariance estimate with entries
    ``c_d = sum_{t=1}^{N-d} x_t x_{t+d} / (N - d)`` placed on diagonal ``d``."""
    x = as_series(x)
    L, _ = check_window_length(x.size, window_length)
    n = x.size
    nfft = next_fast_len(2 * n)
    spec = rfft(x, nfft)
    acf = irfft(spec * np.conj(spec), nfft)[:L]
    return toeplitz(acf / (n - np.arange(L)))


class SSA(BaseEstimator):
    """Singular spectrum analysis of a one-dimensional series.

    Parameters
    ----------
    window_length : int, optional
        Embedding window L, 1 < L < N.  Defaults to ``round(0.4 N)`` for
        basic mode and ``min(N // 4, 100)`` for Toeplitz mode.
    n_components : int, optional
        Number of leading eigentriples to compute.  Defaults to the full
        spectrum when the trajectory matrix is small enough to materialise;
        large series must pass an explicit value.
    method : {"basic", "toeplitz"}
    centering : {"none", "double"}
        Double centering is only available with the basic method.
    svd_tol : float
        Residual acceptance threshold for the iterative SVD, relative to the
        leading singular value.
    svd_max_iter : int, optional
        Restart budget for the iterative SVD.
    svd_method : {"auto", "dense", "gram", "lanczos"}

    Attributes
    ----------
    sigma_ : ndarray (d,)
        Singular values, nonincreasing.
    left_vectors_ : ndarray (L, d)
    right_vectors_ : ndarray (K, d)
    contributions_ : ndarray (d,)
        Component shares of the squared trajectory-matrix norm.
    rank_ : int
        Number of components above the numerical-rank cutoff
        ``sigma_m >= 1e-11 * sigma_1``.
    centering_series_ : ndarray (N,)
        Only with double centering: the extracted rank-<=2 component.

    Eigentriple indices in groupings are 1-based throughout (ET1 is the
    leading triple), matching file formats and the HTTP API.
    """

    def __init__(self, window_length=None, n_components=None, method="basic",
                 centering="none", svd_tol=1e-9, svd_max_iter=None, svd_method="auto"):
        self.window_length = window_length
        self.n_components = n_components
        self.method = method
        self.centering = centering
        self.svd_tol = svd_tol
        self.svd_max_iter = svd_max_iter
        self.svd_method = svd_method

    # ------------------------------------------------------------------ fit

    def fit(self, X, y=None):
        """Decompose the series ``X`` into eigentriples."""
        if self.method not in ("basic", "toeplitz"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.centering not in ("none", "double"):
            raise ValueError(f"unknown centering {self.centering!r}")
        if self.method == "toeplitz" and self.centering == "double":
            raise ValueError("double centering is only supported with the basic method")

        x = as_series(X)
        n = x.size
        L = self.window_length if self.window_length is not None else default_window_length(n, self.method)
        L, K = check_window_length(n, L)
        # Toeplitz mode admits all L covariance eigenvectors (possibly more
        # than min(L, K)); only then does the full set reproduce the series.
        k_max = L if self.method == "toeplitz" else min(L, K)
        if self.n_components is None:
            if self.method != "toeplitz" and L * K > DENSE_CELL_LIMIT:
                raise ValueError("n_components is required for series this large")
            k = k_max
        else:
            k = check_n_components(self.n_components, k_max)

        self.series_ = x
        self.n_samples_ = n
        self.window_length_ = L
        self.n_windows_ = K
        self.method_ = self.method
        self.centering_ = self.centering
        self.weights_ = antidiagonal_weights(n, L)
        self.total_energy_ = float(np.sum(self.weights_ * x**2))

        if self.method == "toeplitz":
            self._fit_toeplitz(x, L, K, k)
        else:
            self._fit_basic(x, L, K, k)

        sigma = self.sigma_
        self.n_components_ = sigma.size
        self.contributions_ = (
            sigma**2 / self.total_energy_ if self.total_energy_ > 0 else np.zeros_like(sigma)
        )
        self.rank_ = int(np.sum(sigma >= RANK_CUTOFF * sigma[0])) if sigma.size else 0
        return self

    def _fit_basic(self, x, L, K, k):
        op = HankelOperator(x, L)
        if self.centering == "double":
            op = CenteredHankelOperator(op)
        self._operator = op
        if self.total_energy_ == 0.0:
            sigma, U, V = np.zeros(0), np.zeros((L, 0)), np.zeros((K, 0))
        else:
            sigma, U, V = truncated_svd(op, k, tol=self.svd_tol,
                                        max_iter=self.svd_max_iter, method=self.svd_method)
        if self.centering == "double":
            # Numerically-zero residual spectrum once the centering part is
            # removed (e.g. an exact line) must not masquerade as signal.
            scale = np.sqrt(self.total_energy_)
            keep = sigma > 1e-12 * scale if scale > 0 else slice(0)
            sigma, U, V = sigma[keep], U[:, keep], V[:, keep]
            self.centering_series_ = op.centering_series()
            self.centering_contribution_ = (
                op.centering_norm2() / self.total_energy_ if self.total_energy_ > 0 else 0.0
            )
        self.sigma_, self.left_vectors_, self.right_vectors_ = sigma, U, V

    def _fit_toeplitz(self, x, L, K, k):
        cov = toeplitz_covariance(x, L)
        evals, evecs = eigh(cov)
        order = np.argsort(evals)[::-1][:k]
        P = evecs[:, order]
        op = HankelOperator(x, L)
        self._operator = op
        G = op.rmatmat(P)
        sigma = np.sqrt(np.sum(G**2, axis=0))
        V = np.zeros_like(G)
        pos = sigma > 0
        V[:, pos] = G[:, pos] / sigma[pos]
        resort = np.argsort(sigma)[::-1]
        sigma, P, V = sigma[resort], P[:, resort], V[:, resort]
        for m in range(P.shape[1]):
            col = P[:, m]
            first = int(np.argmax(np.abs(col) > 1e-9 * np.max(np.abs(col))))
            if col[first] < 0:
                P[:, m] = -col
                V[:, m] = -V[:, m]
        self.sigma_, self.left_vectors_, self.right_vectors_ = sigma, P, V

    # -------------------------------------------------------------- results

    def _check_fitted(self):
        if not hasattr(self, "sigma_"):
            raise RuntimeError("this SSA instance is not fitted yet; call fit first")

    def _group_indices(self, group):
        """Resolve 1-based eigentriple indices to a 0-based index array."""
        self._check_fitted()
        idx = np.asarray(list(group), dtype=int)
        if idx.size and (idx.min() < 1 or idx.max() > self.n_components_):
            raise ValueError(
                f"eigentriple indices must lie in [1, {self.n_components_}]; got {sorted(set(idx))}"
            )
        if idx.size != np.unique(idx).size:
            raise ValueError("duplicate eigentriple indices in group")
        return idx - 1

    def transform(self, X=None):
        """Elementary reconstructed series, one column per eigentriple.

        With the default ``X=None`` the fitted series is used.  Passing a
        different series projects its trajectory matrix onto the fitted
        left-vector basis (basic and Toeplitz methods only).
        """
        self._check_fitted()
        if X is None or X is self.series_ or (
            np.asarray(X, dtype=np.float64).shape == self.series_.shape
            and np.array_equal(np.asarray(X, dtype=np.float64), self.series_)
        ):
            return elementary_series(self.sigma_, self.left_vectors_, self.right_vectors_, self.weights_)
        if self.centering_ == "double":
            raise ValueError("transform of a new series is not defined for double centering")
        x = as_series(X)
        op = HankelOperator(x, self.window_length_)
        Q = op.rmatmat(self.left_vectors_)
        w = antidiagonal_weights(x.size, self.window_length_)
        return elementary_series(np.ones(self.n_components_), self.left_vectors_, Q, w)

    def fit_transform(self, X, y=None):
        """Fit the series and return its elementary components."""
        return self.fit(X).transform()

    def reconstruct(self, groups):
        """Reconstruct grouped components by diagonal averaging.

        Parameters
        ----------
        groups : sequence of int, or mapping name -> sequence of int
            1-based eigentriple indices.  A plain sequence returns the
            reconstructed series for that single group.  A mapping returns a
            dict of named series plus a ``"residual"`` entry (and, under
            double centering, the ``"centering"`` component).
        """
        self._check_fitted()
        if not isinstance(groups, dict):
            idx = self._group_indices(groups)
            return triples_to_series(self.sigma_[idx], self.left_vectors_[:, idx],
                                     self.right_vectors_[:, idx], self.weights_)
        from .grouping import normalize_grouping  # local import to avoid a cycle

        named = normalize_grouping(groups, self.n_components_)
        out = {}
        for name, indices in named.items():
            idx = np.asarray(indices, dtype=int) - 1
            out[name] = triples_to_series(self.sigma_[idx], self.left_vectors_[:, idx],
                                          self.right_vectors_[:, idx], self.weights_)
        if self.centering_ == "double":
            out["centering"] = self.centering_series_.copy()
        total = sum(out.values()) if out else np.zeros(self.n_samples_)
        if self.series_ is not None:
            out["residual"] = self.series_ - total
        else:
            grouped = sorted({i for v in named.values() for i in v})
            rest = np.asarray([i for i in range(1, self.n_components_ + 1) if i not in grouped], dtype=int) - 1
            out["residual"] = triples_to_series(self.sigma_[rest], self.left_vectors_[:, rest],
                                                self.right_vectors_[:, rest], self.weights_)
        return out

    def wcor(self, n_components=None):
        """Matrix of weighted cosines between elementary reconstructed series."""
        self._check_fitted()
        k = self.n_components_ if n_components is None else int(n_components)
        if not 0 < k <= self.n_components_:
            raise ValueError(f"n_components must lie in [1, {self.n_components_}]")
        elem = elementary_series(self.sigma_[:k], self.left_vectors_[:, :k],
                                 self.right_vectors_[:, :k], self.weights_)
        gram = (elem * self.weights_[:, None]).T @ elem
        norms = np.sqrt(np.diag(gram).copy())
        zero = norms <= 0
        if zero.any():
            warnings.warn(f"{int(zero.sum())} zero-norm elementary components; "
                          "their w-correlations are reported as 0")
            norms[zero] = 1.0
        w = gram / np.outer(norms, norms)
        w[zero, :] = 0.0
        w[:, zero] = 0.0
        np.clip(w, -1.0, 1.0, out=w)
        return w

    # -------------------------------------------------------- serialization

    def to_dict(self):
        """JSON-ready decomposition document."""
        self._check_fitted()
        doc = {
            "method": self.method_,
            "L": self.window_length_,
            "N": self.n_samples_,
            "centering": self.centering_,
            "sigmas": self.sigma_.tolist(),
            "u": self.left_vectors_.T.tolist(),
            "v": self.right_vectors_.T.tolist(),
        }
        if self.centering_ == "double":
            doc["centering_component"] = self.centering_series_.tolist()
        return doc

    @classmethod
    def from_dict(cls, doc):
        """Rebuild a fitted decomposition from :meth:`to_dict` output.

        The original series is not part of the document, so the residual of a
        partial grouping is the sum of the remaining stored triples.
        """
        n = int(doc["N"])
        L, K = check_window_length(n, int(doc["L"]))
        est = cls(window_length=L, method=doc["method"], centering=doc.get("centering", "none"))
        sigma = np.asarray(doc["sigmas"], dtype=np.float64)
        U = np.asarray(doc["u"], dtype=np.float64).reshape(len(sigma), L).T if len(sigma) else np.zeros((L, 0))
        V = np.asarray(doc["v"], dtype=np.float64).reshape(len(sigma), K).T if len(sigma) else np.zeros((K, 0))
        est.series_ = None
        est.n_samples_ = n
        est.window_length_ = L
        est.n_windows_ = K
        est.method_ = doc["method"]
        est.centering_ = doc.get("centering", "none")
        est.weights_ = antidiagonal_weights(n, L)
        est.sigma_ = sigma
        est.left_vectors_ = U
        est.right_vectors_ = V
        est.n_components_ = sigma.size
        est.total_energy_ = float(np.sum(sigma**2))
        est.contributions_ = (
            sigma**2 / est.total_energy_ if est.total_energy_ > 0 else np.zeros_like(sigma)
        )
        est.rank_ = int(np.sum(sigma >= RANK_CUTOFF * sigma[0])) if sigma.size else 0
        if est.centering_ == "double":
            est.centering_series_ = np.asarray(doc["centering_component"], dtype=np.float64)
            est.centering_contribution_ = float("nan")
        return est
