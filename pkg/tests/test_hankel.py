import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import hankel as dense_hankel

from ssakit import (
    CenteredHankelOperator,
    HankelOperator,
    MissingValueError,
    WindowLengthError,
    antidiagonal_weights,
    diagonal_average,
    triples_to_series,
)
from ssakit.hankel import elementary_series, triple_antidiagonal_sums


def brute_diagonal_average(matrix):
    L, K = matrix.shape
    n = L + K - 1
    out = np.zeros(n)
    for s in range(n):
        cells = [matrix[i, s - i] for i in range(L) if 0 <= s - i < K]
        out[s] = np.mean(cells)
    return out


def test_embed_dense_example():
    op = HankelOperator([1.0, 2.0, 3.0, 4.0, 5.0], 3)
    assert np.array_equal(op.to_dense(), [[1, 2, 3], [2, 3, 4], [3, 4, 5]])


def test_embed_constant_series_is_rank_one():
    op = HankelOperator([7.0] * 4, 2)
    assert np.linalg.matrix_rank(op.to_dense()) == 1


def test_embed_window_bounds():
    x = np.arange(5.0)
    with pytest.raises(WindowLengthError):
        HankelOperator(x, 5)
    with pytest.raises(WindowLengthError):
        HankelOperator(x, 1)
    with pytest.raises(MissingValueError):
        HankelOperator([1.0, np.nan, 3.0, 4.0], 2)


def test_matvec_selects_first_column():
    op = HankelOperator([1.0, 2.0, 3.0, 4.0, 5.0], 3)
    np.testing.assert_allclose(op @ np.array([1.0, 0.0, 0.0]), [1, 2, 3], atol=1e-12)


def test_matvec_all_ones_gives_row_sums():
    rng = np.random.default_rng(11)
    for n in (10, 23, 50):
        x = rng.standard_normal(n)
        L = rng.integers(2, n)
        op = HankelOperator(x, L)
        dense = op.to_dense()
        np.testing.assert_allclose(op @ np.ones(op.n_windows), dense.sum(axis=1),
                                   rtol=0, atol=1e-10 * max(1, np.abs(dense).max()))


def test_products_match_dense():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(40)
    op = HankelOperator(x, 17)
    dense = op.to_dense()
    y = rng.standard_normal(op.n_windows)
    z = rng.standard_normal(op.window_length)
    scale = np.abs(dense @ y).max()
    assert np.max(np.abs(op @ y - dense @ y)) < 1e-10 * scale
    assert np.max(np.abs(op.T @ z - dense.T @ z)) < 1e-10 * max(1, np.abs(dense.T @ z).max())


def test_matmat_batches_match_loop():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(30)
    op = HankelOperator(x, 12)
    Y = rng.standard_normal((op.n_windows, 5))
    got = op @ Y
    for j in range(5):
        np.testing.assert_allclose(got[:, j], op @ Y[:, j], atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    data=st.data(),
    n=st.integers(min_value=4, max_value=60),
)
def test_adjoint_consistency(data, n):
    L = data.draw(st.integers(min_value=2, max_value=n - 1))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    x = rng.standard_normal(n)
    op = HankelOperator(x, L)
    y = rng.standard_normal(op.n_windows)
    z = rng.standard_normal(op.window_length)
    lhs = np.dot(op @ y, z)
    rhs = np.dot(y, op.T @ z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs), abs(rhs))


def test_weights_formula_and_sum():
    for n, L in ((10, 3), (11, 6), (9, 8), (50, 25)):
        w = antidiagonal_weights(n, L)
        K = n - L + 1
        expected = [min(i, L, K, n - i + 1) for i in range(1, n + 1)]
        assert np.array_equal(w, expected)
        assert w.sum() == L * K


def test_diagonal_average_inverts_embedding():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(23)
    op = HankelOperator(x, 9)
    np.testing.assert_allclose(diagonal_average(op.to_dense()), x, atol=1e-12)


def test_diagonal_average_small_example():
    got = diagonal_average(np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]]))
    np.testing.assert_allclose(got, [1.0, 1.5, 2.5, 3.0])


def test_diagonal_average_matches_brute_force():
    rng = np.random.default_rng(6)
    m = rng.standard_normal((5, 7))
    np.testing.assert_allclose(diagonal_average(m), brute_diagonal_average(m), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), L=st.integers(2, 8), K=st.integers(2, 9))
def test_diagonal_average_linearity(seed, L, K):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((L, K))
    b = rng.standard_normal((L, K))
    lhs = diagonal_average(a + b)
    rhs = diagonal_average(a) + diagonal_average(b)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.abs(lhs).max())


def test_triples_to_series_matches_dense_rank_one_sums():
    rng = np.random.default_rng(7)
    L, K, k = 6, 9, 3
    sigma = rng.uniform(0.5, 2.0, k)
    U = rng.standard_normal((L, k))
    V = rng.standard_normal((K, k))
    dense = sum(sigma[m] * np.outer(U[:, m], V[:, m]) for m in range(k))
    sums = triple_antidiagonal_sums(sigma, U, V)
    w = antidiagonal_weights(L + K - 1, L)
    np.testing.assert_allclose(sums / w, brute_diagonal_average(dense), atol=1e-12)
    np.testing.assert_allclose(triples_to_series(sigma, U, V, w),
                               brute_diagonal_average(dense), atol=1e-12)
    elem = elementary_series(sigma, U, V, w)
    np.testing.assert_allclose(elem.sum(axis=1), brute_diagonal_average(dense), atol=1e-12)


def test_transposition_symmetry_of_singular_values():
    rng = np.random.default_rng(8)
    x = rng.standard_normal(35)
    s1 = np.linalg.svd(HankelOperator(x, 12).to_dense(), compute_uv=False)
    s2 = np.linalg.svd(HankelOperator(x, 24).to_dense(), compute_uv=False)
    np.testing.assert_allclose(np.sort(s1), np.sort(s2), rtol=1e-10)


def test_centered_operator_matches_dense():
    rng = np.random.default_rng(9)
    x = rng.standard_normal(28)
    op = CenteredHankelOperator(HankelOperator(x, 10))
    dense = op.to_dense()
    base = HankelOperator(x, 10).to_dense()
    centered = base - base.mean(axis=0, keepdims=True)
    centered = centered - centered.mean(axis=1, keepdims=True)
    np.testing.assert_allclose(dense, centered, atol=1e-12)
    y = rng.standard_normal(op.n_windows)
    z = rng.standard_normal(op.window_length)
    np.testing.assert_allclose(op @ y, centered @ y, atol=1e-10)
    np.testing.assert_allclose(op.T @ z, centered.T @ z, atol=1e-10)


def test_centering_series_and_norm_match_dense():
    rng = np.random.default_rng(10)
    x = rng.standard_normal(26)
    op = CenteredHankelOperator(HankelOperator(x, 9))
    base = HankelOperator(x, 9).to_dense()
    removed = base - op.to_dense()
    np.testing.assert_allclose(op.centering_series(), brute_diagonal_average(removed), atol=1e-10)
    np.testing.assert_allclose(op.centering_norm2(), np.sum(removed**2), rtol=1e-10)
    np.testing.assert_allclose(op.frobenius_norm(), np.linalg.norm(op.to_dense()), rtol=1e-10)


def test_frobenius_norm_via_weights():
    rng = np.random.default_rng(12)
    x = rng.standard_normal(31)
    op = HankelOperator(x, 7)
    np.testing.assert_allclose(op.frobenius_norm(), np.linalg.norm(op.to_dense()), rtol=1e-12)


def test_completeness_summing_all_triples():
    rng = np.random.default_rng(13)
    for _ in range(5):
        n = int(rng.integers(10, 101))
        L = int(rng.integers(2, n))
        x = rng.standard_normal(n)
        op = HankelOperator(x, L)
        U, s, Vt = np.linalg.svd(op.to_dense(), full_matrices=False)
        rec = triples_to_series(s, U, Vt.T, op.weights)
        assert np.max(np.abs(rec - x)) < 1e-8
