"""Trajectory (Hankel) operators and diagonal averaging.

The trajectory matrix of a series ``(x_1, ..., x_N)`` for window length L is
the L x K Hankel matrix with entries ``x_{i+j-1}``, ``K = N - L + 1``.  The
operator below evaluates products with it through FFT convolutions in
O(N log N) without ever materialising the dense matrix, which keeps memory
O(N) for series of a million samples.
"""

import numpy as np
from scipy.fft import irfft, next_fast_len, rfft
from scipy.linalg import hankel as _dense_hankel
from scipy.sparse.linalg import LinearOperator

from .validation import as_series, check_window_length

__all__ = [
    "HankelOperator",
    "CenteredHankelOperator",
    "antidiagonal_weights",
    "diagonal_average",
    "triple_antidiagonal_sums",
    "triples_to_series",
    "elementary_series",
]


def antidiagonal_weights(n_samples, window_length):
    """Number of trajectory-matrix cells on each antidiagonal.

    ``w_i = min(i, L, K, N - i + 1)`` for i = 1..N; the weights sum to L*K.
    """
    L = int(window_length)
    if not 1 <= L <= n_samples:
        raise ValueError(f"window length must lie in [1, {n_samples}]; got {L}")
    K = n_samples - L + 1
    i = np.arange(1, n_samples + 1, dtype=np.float64)
    return np.minimum(np.minimum(i, n_samples - i + 1), float(min(L, K)))


class HankelOperator(LinearOperator):
    """Lazy L x K trajectory matrix of a series with FFT-based products.

    Parameters
    ----------
    x : array-like
        Complete series of length N (no missing samples).
    window_length : int
        Embedding window L with 1 < L < N.

    Notes
    -----
    Products use circular convolution of length ``next_fast_len(N)``; the
    retained output slice is alias-free whenever the transform length is at
    least N, so one cached forward transform of the series serves every
    subsequent product.
    """

    def __init__(self, x, window_length):
        x = as_series(x)
        L, K = check_window_length(x.size, window_length)
        super().__init__(dtype=np.float64, shape=(L, K))
        self.series = x
        self.n_samples = x.size
        self.window_length = L
        self.n_windows = K
        self._nfft = next_fast_len(x.size)
        self._fseries = rfft(x, self._nfft)
        self._weights = None

    @property
    def weights(self):
        if self._weights is None:
            self._weights = antidiagonal_weights(self.n_samples, self.window_length)
        return self._weights

    def frobenius_norm(self):
        """Frobenius norm of the dense matrix, via antidiagonal weights."""
        return float(np.sqrt(np.sum(self.weights * self.series**2)))

    def _correlate(self, block, n_out):
        """First ``n_out`` lags of the cross-correlation of the series with
        each column of ``block``.

        Alias-free for the kept lags whenever nfft >= N; the conjugation and
        spectrum product run in place and the output slice is a contiguous
        view, so each product moves no more memory than the two transforms.
        """
        fb = rfft(block, self._nfft, axis=0)
        np.conjugate(fb, out=fb)
        fb *= self._fseries if block.ndim == 1 else self._fseries[:, None]
        out = irfft(fb, self._nfft, axis=0, overwrite_x=True)
        return out[:n_out]

    def _matvec(self, y):
        y = np.asarray(y, dtype=np.float64)
        if y.size != self.n_windows:
            raise ValueError(f"dimension mismatch: expected {self.n_windows} entries, got {y.size}")
        return self._correlate(y.reshape(-1), self.window_length)

    def _rmatvec(self, z):
        z = np.asarray(z, dtype=np.float64)
        if z.size != self.window_length:
            raise ValueError(f"dimension mismatch: expected {self.window_length} entries, got {z.size}")
        return self._correlate(z.reshape(-1), self.n_windows)

    def _matmat(self, Y):
        Y = np.asarray(Y, dtype=np.float64)
        if Y.shape[0] != self.n_windows:
            raise ValueError(f"dimension mismatch: expected {self.n_windows} rows, got {Y.shape[0]}")
        return self._correlate(Y, self.window_length)

    def _rmatmat(self, Z):
        Z = np.asarray(Z, dtype=np.float64)
        if Z.shape[0] != self.window_length:
            raise ValueError(f"dimension mismatch: expected {self.window_length} rows, got {Z.shape[0]}")
        return self._correlate(Z, self.n_windows)

    def to_dense(self):
        x = self.series
        return _dense_hankel(x[: self.window_length], x[self.window_length - 1 :])

    def transposed(self):
        """The transposed trajectory matrix, i.e. the embedding with window K."""
        return HankelOperator(self.series, self.n_windows)


class CenteredHankelOperator(LinearOperator):
    """Doubly centered trajectory matrix: row and column means projected out.

    Acts as ``(I - P) X (I - Q)`` where P and Q average over the column and
    row index respectively.  The subtracted rank-<=2 part is available as a
    series through :meth:`centering_series`.
    """

    def __init__(self, base):
        if not isinstance(base, HankelOperator):
            base = HankelOperator(base.series, base.window_length)
        super().__init__(dtype=np.float64, shape=base.shape)
        self.base = base
        self.series = base.series
        self.n_samples = base.n_samples
        self.window_length = base.window_length
        self.n_windows = base.n_windows

    @property
    def weights(self):
        return self.base.weights

    def _matmat(self, Y):
        Y = np.asarray(Y, dtype=np.float64)
        Yc = Y - Y.mean(axis=0, keepdims=True)
        T = self.base._matmat(Yc)
        return T - T.mean(axis=0, keepdims=True)

    def _rmatmat(self, Z):
        Z = np.asarray(Z, dtype=np.float64)
        Zc = Z - Z.mean(axis=0, keepdims=True)
        T = self.base._rmatmat(Zc)
        return T - T.mean(axis=0, keepdims=True)

    def _matvec(self, y):
        return self._matmat(np.asarray(y, dtype=np.float64).reshape(-1, 1))[:, 0]

    def _rmatvec(self, z):
        return self._rmatmat(np.asarray(z, dtype=np.float64).reshape(-1, 1))[:, 0]

    def means(self):
        """Row means (length L), column means (length K) and the grand mean."""
        x, L, K = self.series, self.window_length, self.n_windows
        row = _window_means(x, K)
        col = _window_means(x, L)
        grand = float(np.sum(self.base.weights * x) / (L * K))
        return row, col, grand

    def centering_series(self):
        """Diagonal average of the subtracted rank-<=2 centering part."""
        L, K, N = self.window_length, self.n_windows, self.n_samples
        row, col, grand = self.means()
        sums = _sliding_sums(row, K, N) + _sliding_sums(col - grand, L, N)
        return sums / self.base.weights

    def centering_norm2(self):
        """Squared Frobenius norm of the subtracted centering part."""
        L, K = self.window_length, self.n_windows
        row, col, grand = self.means()
        # ||a 1^T + 1 b^T||_F^2 with a = row means, b = col means - grand
        b = col - grand
        return float(K * row @ row + L * b @ b + 2.0 * np.sum(row) * np.sum(b))

    def frobenius_norm(self):
        gap2 = self.base.frobenius_norm() ** 2 - self.centering_norm2()
        return float(np.sqrt(max(gap2, 0.0)))

    def to_dense(self):
        D = self.base.to_dense()
        D = D - D.mean(axis=0, keepdims=True)
        return D - D.mean(axis=1, keepdims=True)


def _window_means(x, width):
    """Means of all contiguous windows of ``width`` samples."""
    cs = np.concatenate(([0.0], np.cumsum(x)))
    return (cs[width:] - cs[:-width]) / width


def _sliding_sums(vec, width, n_out=None):
    """Antidiagonal sums of ``vec 1^T`` for an len(vec) x width outer shape.

    Equivalent to ``np.convolve(vec, np.ones(width))`` but O(n) via prefix sums.
    """
    m = vec.size
    n = m + width - 1 if n_out is None else n_out
    cs = np.concatenate(([0.0], np.cumsum(vec)))
    t = np.arange(n)
    hi = np.minimum(t + 1, m)
    lo = np.maximum(t - width + 1, 0)
    return cs[hi] - cs[np.minimum(lo, m)]


def diagonal_average(matrix):
    """Average the antidiagonals of an L x K matrix into a series of length
    L + K - 1 (the inverse of embedding composed with the Hankel projection)."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    L, K = matrix.shape
    n = L + K - 1
    sums = np.zeros(n)
    for j in range(K):
        sums[j : j + L] += matrix[:, j]
    return sums / antidiagonal_weights(n, L)


def triple_antidiagonal_sums(sigma, U, V):
    """Antidiagonal sums of ``sum_m sigma_m U_m V_m^T`` without forming it.

    Each rank-one term contributes the linear convolution of its two vectors,
    evaluated with one shared FFT plan; cost O(k N log N).
    """
    U = np.asarray(U, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    if U.ndim == 1:
        U = U[:, None]
    if V.ndim == 1:
        V = V[:, None]
    sigma = np.atleast_1d(np.asarray(sigma, dtype=np.float64))
    L, K = U.shape[0], V.shape[0]
    n = L + K - 1
    if sigma.size == 0:
        return np.zeros(n)
    nfft = next_fast_len(n)
    fu = rfft(U, nfft, axis=0)
    fv = rfft(V, nfft, axis=0)
    acc = (fu * fv) @ sigma
    return irfft(acc, nfft)[:n]


def triples_to_series(sigma, U, V, weights=None):
    """Diagonal-average the rank-one sum ``sum_m sigma_m U_m V_m^T``."""
    sums = triple_antidiagonal_sums(sigma, U, V)
    if weights is None:
        L = np.asarray(U).shape[0]
        weights = antidiagonal_weights(sums.size, L)
    return sums / weights


def elementary_series(sigma, U, V, weights):
    """Per-triple reconstructed series, one column per eigentriple: (N, k)."""
    U = np.asarray(U, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    L, K = U.shape[0], V.shape[0]
    n = L + K - 1
    if sigma.size == 0:
        return np.zeros((n, 0))
    nfft = next_fast_len(n)
    conv = irfft(rfft(U, nfft, axis=0) * rfft(V, nfft, axis=0), nfft, axis=0)[:n]
    return conv * sigma[None, :] / weights[:, None]
