"""Truncated SVD of trajectory operators.

Three routes, chosen by problem size:

* dense LAPACK SVD whenever the matrix is small enough to materialise
  (exact, used at desk scale and whenever the full spectrum is wanted);
* an eigendecomposition of the L x L Gram matrix, assembled from lagged
  product sums in O(L N), when one dimension is tiny but the series is long;
* implicitly restarted Lanczos (ARPACK) driven by the FFT operator products
  for everything else, costing O(k N log N + k^2 N).

All routes return singular values in nonincreasing order with a
deterministic sign convention: the first nonvanishing component of each left
vector is positive.
"""

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, svds

from .exceptions import SvdConvergenceError
from .hankel import HankelOperator

__all__ = ["truncated_svd", "hankel_gram"]

DENSE_CELL_LIMIT = 4_000_000
GRAM_DIM_LIMIT = 64

_LANCZOS_SEED = 271828


def truncated_svd(op, n_triples, tol=1e-9, max_iter=None, method="auto"):
    """Leading singular triples of a linear operator.

    Parameters
    ----------
    op : LinearOperator
        Trajectory operator (or any operator exposing ``shape`` and products;
        ``to_dense`` and ``frobenius_norm`` are used when available).
    n_triples : int
        Number of leading triples requested; at most min(L, K).
    tol : float
        Residual acceptance threshold: every returned triple satisfies
        ``||A v - sigma u|| <= tol * sigma_1``.
    max_iter : int, optional
        Restart budget for the Lanczos route (default ``max(10 k, 40)``).
    method : {"auto", "dense", "gram", "lanczos"}
        Force a particular route; "auto" picks by size.

    Returns
    -------
    sigma : ndarray (d,)
        Nonincreasing singular values, machine-zero triples dropped (d <= k).
    left : ndarray (L, d)
    right : ndarray (K, d)

    Raises
    ------
    SvdConvergenceError
        Lanczos did not reach the residual tolerance within the budget;
        partial results ride on the exception.
    """
    L, K = op.shape
    k = int(n_triples)
    if not 0 <= k <= min(L, K):
        raise ValueError(f"n_triples must lie in [0, {min(L, K)}]; got {k}")
    if k == 0:
        return _empty(L, K)

    if method == "auto":
        if L * K <= DENSE_CELL_LIMIT:
            method = "dense"
        elif min(L, K) <= GRAM_DIM_LIMIT and isinstance(op, HankelOperator):
            method = "gram"
        elif k < min(L, K):
            method = "lanczos"
        else:
            raise ValueError(
                "full spectrum requested for an operator too large to materialise; "
                "reduce n_components or the window length"
            )

    if method == "dense":
        sigma, U, V = _dense_route(op, k)
    elif method == "gram":
        sigma, U, V = _gram_route(op, k)
    elif method == "lanczos":
        sigma, U, V = _lanczos_route(op, k, tol, max_iter)
    else:
        raise ValueError(f"unknown SVD method {method!r}")

    sigma, U, V = _drop_negligible(sigma, U, V, L, K)
    _fix_signs(U, V)
    return sigma, U, V


def _empty(L, K):
    return np.zeros(0), np.zeros((L, 0)), np.zeros((K, 0))


def _drop_negligible(sigma, U, V, L, K):
    """Discard triples at machine-noise level relative to sigma_1."""
    if sigma.size == 0 or sigma[0] == 0.0:
        return _empty(L, K)
    keep = sigma > np.finfo(np.float64).eps * max(L, K) * sigma[0]
    return sigma[keep], U[:, keep], V[:, keep]


def _fix_signs(U, V):
    for m in range(U.shape[1]):
        u = U[:, m]
        nz = np.abs(u) > 1e-9 * np.max(np.abs(u))
        first = int(np.argmax(nz))
        if u[first] < 0:
            U[:, m] = -u
            V[:, m] = -V[:, m]


def _as_dense(op):
    if hasattr(op, "to_dense"):
        return op.to_dense()
    return op @ np.eye(op.shape[1])


def _dense_route(op, k):
    U, sigma, Vt = np.linalg.svd(_as_dense(op), full_matrices=False)
    return sigma[:k], U[:, :k], Vt[:k].T


def hankel_gram(x, window_length):
    """Dense L x L Gram matrix ``X X^T`` of the trajectory matrix, assembled
    from cumulative lagged products in O(L N) without forming X."""
    x = np.asarray(x, dtype=np.float64)
    L = int(window_length)
    K = x.size - L + 1
    gram = np.zeros((L, L))
    for lag in range(L):
        prod = x[: x.size - lag] * x[lag:]
        cs = np.concatenate(([0.0], np.cumsum(prod)))
        diag = cs[K : K + L - lag] - cs[: L - lag]
        idx = np.arange(L - lag)
        gram[idx, idx + lag] = diag
        gram[idx + lag, idx] = diag
    return gram


def _gram_route(op, k):
    # Work on the side with the short dimension so the Gram matrix is tiny.
    if op.shape[0] > op.shape[1]:
        sigma, U, V = _gram_route(op.transposed(), k)
        return sigma, V, U
    gram = hankel_gram(op.series, op.shape[0])
    evals, evecs = eigh(gram)
    order = np.argsort(evals)[::-1][:k]
    sigma = np.sqrt(np.clip(evals[order], 0.0, None))
    U = evecs[:, order]
    V = op.rmatmat(U)
    pos = sigma > 0
    V[:, pos] /= sigma[pos]
    V[:, ~pos] = 0.0
    return sigma, U, V


def _lanczos_route(op, k, tol, max_iter):
    small = min(op.shape)
    if k > small - 2:
        # the restarted iteration needs k < ncv < min(L, K); an almost-full
        # spectrum is an exact-route job anyway
        if isinstance(op, HankelOperator) and small * small <= 100_000_000:
            return _gram_route(op, k)
        return _dense_route(op, k)
    v0 = np.random.default_rng(_LANCZOS_SEED).standard_normal(small)
    budget = int(max_iter) if max_iter is not None else max(10 * k, 40)
    # a lean basis keeps the reorthogonalization working set inside cache
    # for long series; restarts are cheap by comparison
    basis = min(small - 1, max(2 * k + 2, 10))
    if basis <= k:
        basis = k + 1
    try:
        U, sigma, Vt = svds(op, k=k, which="LM", v0=v0, maxiter=budget, tol=0.0, ncv=basis)
    except ArpackNoConvergence as exc:
        partial = exc.eigenvectors
        left = right = None
        if partial is not None and partial.size:
            if partial.shape[0] == op.shape[0]:
                left = partial
            elif partial.shape[0] == op.shape[1]:
                right = partial
        raise SvdConvergenceError(
            f"Lanczos SVD did not converge within {budget} restarts "
            f"({len(exc.eigenvalues)} of {k} values found)",
            sigma=np.sqrt(np.clip(exc.eigenvalues, 0.0, None)),
            left_vectors=left,
            right_vectors=right,
        ) from exc
    except ArpackError as exc:  # zero operator or breakdown
        if _operator_is_negligible(op):
            return _empty(*op.shape)
        raise SvdConvergenceError(f"Lanczos SVD failed: {exc}") from exc
    order = np.argsort(sigma)[::-1]
    sigma, U, V = sigma[order], U[:, order], Vt[order].T
    if sigma[0] > 0:
        resid = op @ V - U * sigma[None, :]
        worst = float(np.max(np.sqrt(np.sum(resid**2, axis=0))))
        if worst > tol * sigma[0]:
            raise SvdConvergenceError(
                f"Lanczos SVD residual {worst:.3e} exceeds {tol:.1e} * sigma_1",
                sigma=sigma, left_vectors=U, right_vectors=V,
            )
    return sigma, U, V


def _operator_is_negligible(op):
    if hasattr(op, "frobenius_norm"):
        return op.frobenius_norm() <= 1e-300
    return False
