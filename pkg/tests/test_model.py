import numpy as np
import pytest

from ssakit import (
    SSA,
    LinearRecurrence,
    NonForecastableError,
    characteristic_roots,
    esprit_roots,
    estimate_amplitudes,
    min_norm_lrr,
    roots_to_terms,
)


def subspace_of(x, L, k):
    return SSA(window_length=L, n_components=k).fit(x).left_vectors_


def test_min_norm_lrr_constant_series():
    U = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
    lrr = min_norm_lrr(U)
    np.testing.assert_allclose(lrr.coefficients, [1.0], atol=1e-12)


def test_min_norm_lrr_linear_series_is_minimal():
    U = subspace_of(np.arange(1.0, 11.0), 3, 2)
    lrr = min_norm_lrr(U)
    np.testing.assert_allclose(lrr.coefficients, [2.0, -1.0], atol=1e-8)


def test_min_norm_lrr_exponential():
    U = subspace_of(2.0 ** np.arange(1, 8), 2, 1)
    lrr = min_norm_lrr(U)
    np.testing.assert_allclose(lrr.coefficients, [2.0], atol=1e-10)


def test_min_norm_lrr_vertical_subspace_error():
    U = np.zeros((4, 1))
    U[-1, 0] = 1.0
    with pytest.raises(NonForecastableError):
        min_norm_lrr(U)


def test_min_norm_lrr_governs_finite_rank_signal():
    n = np.arange(1, 81, dtype=float)
    x = 0.96**n * 3.0 + np.sin(2 * np.pi * n / 7) + 0.1 * 1.02**n
    est = SSA(window_length=30, n_components=4).fit(x)
    lrr = min_norm_lrr(est.left_vectors_)
    assert np.max(np.abs(lrr.residuals(x))) < 1e-8


def test_min_norm_lrr_has_minimal_norm_among_governing_recurrences():
    # alternatives: multiply the minimal characteristic polynomial by any
    # monic factor of the right degree; every such recurrence also governs
    # the signal but with a longer coefficient vector.
    n = np.arange(1, 61, dtype=float)
    x = np.sin(2 * np.pi * n / 6) + 0.5 * 0.9**n
    L = 12
    est = SSA(window_length=L, n_components=3).fit(x)
    lrr = min_norm_lrr(est.left_vectors_)
    minimal = np.array([1.0, -(2 * np.cos(2 * np.pi / 6)) - 0.9,
                        1.0 + 0.9 * 2 * np.cos(2 * np.pi / 6), -0.9])
    rng = np.random.default_rng(51)
    for _ in range(25):
        extra = rng.standard_normal(L - 1 - 3)
        alt_poly = np.polymul(minimal, np.concatenate(([1.0], extra)))
        alt = LinearRecurrence(-alt_poly[1:])
        assert np.max(np.abs(alt.residuals(x))) < 1e-6  # sanity: it governs
        assert np.linalg.norm(lrr.coefficients) <= np.linalg.norm(alt.coefficients) + 1e-10


def test_lrr_extend_matches_hand_application():
    lrr = LinearRecurrence([2.0, -1.0])
    np.testing.assert_allclose(lrr.extend([1.0, 2.0, 3.0], 3), [4.0, 5.0, 6.0])


def test_esprit_undamped_cosine():
    n = np.arange(1, 101, dtype=float)
    U = subspace_of(np.cos(2 * np.pi * n / 12), 40, 2)
    mu = esprit_roots(U)
    np.testing.assert_allclose(np.abs(mu), [1.0, 1.0], atol=1e-8)
    np.testing.assert_allclose(np.sort(np.angle(mu) / (2 * np.pi)),
                               [-1 / 12, 1 / 12], atol=1e-8)


def test_esprit_damped_exponential():
    n = np.arange(1, 61, dtype=float)
    U = subspace_of(0.9**n, 20, 1)
    mu = esprit_roots(U)
    np.testing.assert_allclose(mu, [0.9], atol=1e-8)


def test_esprit_linear_series_double_unit_root():
    U = subspace_of(np.arange(1.0, 41.0), 15, 2)
    mu = esprit_roots(U)
    np.testing.assert_allclose(mu, [1.0, 1.0], atol=1e-6)


def test_esprit_agrees_with_characteristic_roots_of_minimal_lrr():
    n = np.arange(1, 81, dtype=float)
    x = np.sin(2 * np.pi * n / 10) + 2.0 * 0.95**n
    # L = r + 1 makes the min-norm recurrence minimal
    U = subspace_of(x, 4, 3)
    lrr = min_norm_lrr(U)
    from_poly = sorted(np.array([mu for mu, _ in characteristic_roots(lrr)]),
                       key=lambda z: (z.real, z.imag))
    from_shift = sorted(esprit_roots(U), key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(from_poly, from_shift, atol=1e-6)


def test_esprit_rank_deficient_basis_error():
    U = np.zeros((6, 2))
    U[0, 0] = 1.0  # second column identically zero
    with pytest.raises(ValueError):
        esprit_roots(U)


def test_characteristic_roots_examples():
    double = characteristic_roots(LinearRecurrence([2.0, -1.0]))
    assert len(double) == 1
    mu, mult = double[0]
    assert mult == 2
    np.testing.assert_allclose(mu, 1.0, atol=1e-6)

    single = characteristic_roots(LinearRecurrence([1.0]))
    assert single == [(1 + 0j, 1)]

    omega = 0.17
    pair = characteristic_roots(LinearRecurrence([2 * np.cos(2 * np.pi * omega), -1.0]))
    got = sorted([mu for mu, _ in pair], key=lambda z: z.imag)
    expected = [np.exp(-2j * np.pi * omega), np.exp(2j * np.pi * omega)]
    np.testing.assert_allclose(got, expected, atol=1e-10)


def test_estimate_amplitudes_damped_exponential():
    n = np.arange(1, 41, dtype=float)
    model = estimate_amplitudes(3.0 * 0.9**n, [0.9])
    np.testing.assert_allclose(model.amplitudes, [3.0], atol=1e-10)
    term = model.terms[0]
    assert term.frequency == 0.0
    np.testing.assert_allclose([term.amplitude, term.damping, term.phase], [3.0, 0.9, 0.0],
                               atol=1e-10)


def test_estimate_amplitudes_cosine_phase():
    n = np.arange(1, 61, dtype=float)
    x = np.cos(2 * np.pi * n / 6 + np.pi / 4)
    roots = [np.exp(2j * np.pi / 6), np.exp(-2j * np.pi / 6)]
    model = estimate_amplitudes(x, roots)
    term = model.terms[0]
    np.testing.assert_allclose(term.amplitude, 1.0, atol=1e-8)
    np.testing.assert_allclose(term.frequency, 1 / 6, atol=1e-12)
    np.testing.assert_allclose(term.phase, np.pi / 4, atol=1e-8)
    np.testing.assert_allclose(model.evaluate(n), x, atol=1e-8)


def test_estimate_amplitudes_zero_series():
    n = np.arange(1, 21, dtype=float)
    model = estimate_amplitudes(np.zeros(20), [0.8])
    np.testing.assert_allclose(model.amplitudes, [0.0], atol=1e-12)


def test_estimate_amplitudes_condition_warning():
    n = np.arange(1, 201, dtype=float)
    with pytest.warns(UserWarning, match="ill-conditioned"):
        estimate_amplitudes(0.5**n, [0.5, 0.5 + 1e-13])


def test_estimate_amplitudes_multiplicity_columns():
    n = np.arange(1, 31, dtype=float)
    x = (2.0 + 0.5 * n) * 1.0**n  # linear series: double unit root
    model = estimate_amplitudes(x, [(1.0, 2)])
    np.testing.assert_allclose(model.evaluate(n), x, atol=1e-8)
    np.testing.assert_allclose(sorted(np.real(model.amplitudes)), [0.5, 2.0], atol=1e-8)


def test_roots_to_terms_conventions():
    terms = roots_to_terms([np.exp(1j * np.pi / 6), np.exp(-1j * np.pi / 6)], [0.5, 0.5])
    assert len(terms) == 1
    t = terms[0]
    np.testing.assert_allclose([t.damping, t.frequency], [1.0, 1 / 12], atol=1e-12)

    neg = roots_to_terms([-0.8], [1.0])[0]
    np.testing.assert_allclose([neg.damping, neg.frequency], [0.8, 0.5], atol=1e-12)

    trend = roots_to_terms([0.99679], [2.0])[0]
    np.testing.assert_allclose([trend.amplitude, trend.damping, trend.frequency],
                               [2.0, 0.99679, 0.0], atol=1e-12)


def test_roots_to_terms_unpaired_complex_root_error():
    with pytest.raises(ValueError):
        roots_to_terms([0.5 + 0.5j], [1.0])


def test_esprit_frequency_variance_scaling_smoke():
    # full log-log slope check lives in the acceptance suite
    rng = np.random.default_rng(52)
    n_samples = 400
    n = np.arange(1, n_samples + 1, dtype=float)
    estimates = []
    for _ in range(10):
        x = np.cos(2 * np.pi * n / 12) + 0.1 * rng.standard_normal(n_samples)
        U = subspace_of(x, int(0.4 * n_samples), 2)
        mu = esprit_roots(U)
        estimates.append(np.abs(np.angle(mu[0])) / (2 * np.pi))
    assert np.std(estimates) < 1e-3
    np.testing.assert_allclose(np.mean(estimates), 1 / 12, atol=1e-4)
