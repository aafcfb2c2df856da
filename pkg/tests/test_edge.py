"""Tests for bulk-edge estimation, effective rank, and imputation.

Hand values come from small probe spectra where the square-root-law
formulas can be evaluated by hand; the statistical tests draw white-noise
spectra and check the edge against the known support boundary.
"""

import numpy as np
import pytest

from eoptshrink import (
    NoiseModel,
    default_k,
    estimate_bulk_edge,
    estimate_edge_rank,
    estimate_effective_rank,
    impute_edge_eigenvalues,
    noise_spectrum,
    pseudo_cdf_e,
    pseudo_cdf_imp,
    pseudo_cdf_t,
    replicate_rng,
    select_c,
)

EDGE_DENOM = 2.0 ** (2.0 / 3.0) - 1.0


def test_select_c_cap_and_crossover():
    # Below n = 1743 the cap 1/2.01 wins; from 1743 on, 1/ln(ln n) does.
    assert select_c(100) == pytest.approx(1.0 / 2.01, rel=1e-15)
    assert select_c(1742) == pytest.approx(1.0 / 2.01, rel=1e-15)
    assert select_c(1743) == pytest.approx(0.4975109222534182, rel=1e-14)
    assert select_c(10**6) == pytest.approx(0.3808374892492403, rel=1e-14)
    assert select_c(10**6) < select_c(1743) < select_c(1742)
    with pytest.raises(ValueError):
        select_c(2)


def test_default_k_values():
    assert default_k(1000) == 31
    assert default_k(2100) == 42
    assert default_k(1000, c=0.5) == 31  # floor(sqrt(1000))
    assert default_k(100, c=1.0) == 100


def test_bulk_edge_probe_spectrum():
    # lambda_3 + (lambda_3 - lambda_5) / (2^(2/3) - 1) with k = 2.
    arr = np.array([5.0, 3.0, 2.0, 1.8, 1.5])
    got = estimate_bulk_edge(arr, k=2)
    assert got == pytest.approx(2.8512071919596575, rel=1e-14)
    assert got == pytest.approx(2.0 + 0.5 / EDGE_DENOM, rel=1e-14)


def test_bulk_edge_flat_spectrum_is_fixed_point():
    arr = np.full(11, 3.0)
    assert estimate_bulk_edge(arr, k=3) == pytest.approx(3.0, rel=1e-15)


def test_bulk_edge_scale_equivariance():
    rng = np.random.default_rng(3)
    arr = np.sort(rng.uniform(0.5, 4.0, size=41))[::-1]
    base = estimate_bulk_edge(arr, k=5)
    np.testing.assert_allclose(estimate_bulk_edge(7.0 * arr, k=5), 7.0 * base, rtol=1e-14)


def test_bulk_edge_validation():
    arr = np.array([3.0, 2.0, 1.0])
    with pytest.raises(ValueError):
        estimate_bulk_edge(arr, k=0)
    with pytest.raises(ValueError):
        estimate_bulk_edge(arr, k=2)  # needs 2k+1 = 5 entries
    with pytest.raises(ValueError):
        estimate_bulk_edge(np.array([1.0, 2.0, 3.0]), k=1)  # increasing


def test_effective_rank_threshold_is_strict():
    n = 1000
    edge = 4.0
    thr = edge + n ** (-1.0 / 3.0)
    arr = np.array([10.0, thr, 3.0, 2.0])
    # The eigenvalue sitting exactly at the threshold does not count.
    assert estimate_effective_rank(arr, edge, n) == 1
    arr2 = np.array([10.0, thr + 1e-12, 3.0, 2.0])
    assert estimate_effective_rank(arr2, edge, n) == 2


def test_impute_probe_spectrum():
    # r = 1, k = 2 on a six-point probe: anchor = 1.8, gap = 0.4.
    arr = np.array([5.0, 3.0, 2.0, 1.8, 1.5, 1.4])
    got = impute_edge_eigenvalues(arr, r_plus_hat=1, k=2)
    np.testing.assert_allclose(
        got, [2.4809657535677268, 2.0519842099789747], rtol=1e-14
    )
    # j = 1 reproduces the bulk-edge formula shifted past the outlier.
    assert got[0] == pytest.approx(1.8 + 0.4 / EDGE_DENOM, rel=1e-14)


def test_impute_unshifted_matches_bulk_edge_at_first_slot():
    arr = np.array([5.0, 3.0, 2.0, 1.8, 1.5, 1.4])
    got = impute_edge_eigenvalues(arr, r_plus_hat=0, k=2)
    np.testing.assert_allclose(
        got, [2.8512071919596575, 2.3149802624737186], rtol=1e-14
    )
    assert got[0] == pytest.approx(estimate_bulk_edge(arr, k=2), rel=1e-15)


def test_impute_output_is_descending_and_above_anchor():
    rng = np.random.default_rng(5)
    lam = np.sort(rng.uniform(0.5, 4.0, size=200))[::-1]
    for r in (0, 2, 5):
        imp = impute_edge_eigenvalues(lam, r_plus_hat=r, k=20)
        assert imp.shape == (20,)
        assert np.all(np.diff(imp) <= 0)
        assert np.all(imp >= lam[20 + r])


def test_impute_validation():
    arr = np.array([3.0, 2.0, 1.0, 0.5])
    with pytest.raises(ValueError):
        impute_edge_eigenvalues(arr, r_plus_hat=-1, k=1)
    with pytest.raises(ValueError):
        impute_edge_eigenvalues(arr, r_plus_hat=0, k=0)
    with pytest.raises(ValueError):
        impute_edge_eigenvalues(arr, r_plus_hat=2, k=1)  # needs 2k+r+1 = 5


def test_estimate_edge_rank_white_noise_edge_location():
    # For white noise with entry variance 1/n and beta = 1 the bulk support
    # ends at 4; the estimated edge should land nearby and detect no signal.
    model = NoiseModel(kind="type1")
    n = 1000
    edges = []
    ranks = []
    for seed in range(20):
        lam = noise_spectrum(n, n, model, replicate_rng(seed, 0))
        est = estimate_edge_rank(lam, n)
        edges.append(est.lambda_plus_hat)
        ranks.append(est.r_plus_hat)
    edges = np.array(edges)
    assert np.all(np.abs(edges - 4.0) < 0.15)
    assert np.mean(np.array(ranks) == 0) >= 0.95


def test_estimate_edge_rank_recovers_planted_outliers():
    # Two strong spikes above the white-noise bulk must be counted exactly.
    rng = np.random.default_rng(20260823)
    n = 1000
    z = rng.standard_normal((n, n)) / np.sqrt(n)
    u = np.linalg.qr(rng.standard_normal((n, 2)))[0]
    v = np.linalg.qr(rng.standard_normal((n, 2)))[0]
    s_tilde = (u * np.array([3.0, 2.5])) @ v.T + z
    lam = np.sort(np.linalg.eigvalsh(s_tilde @ s_tilde.T))[::-1]
    est = estimate_edge_rank(lam, n)
    assert est.r_plus_hat == 2
    assert est.k == default_k(n)
    assert est.c == pytest.approx(select_c(n))
    assert len(est.imputed) == est.k
    assert est.warnings == ()


def test_estimate_edge_rank_short_spectrum_fallback():
    lam = np.array([9.0, 2.0, 1.8, 1.6, 1.4, 1.2, 1.0])
    est = estimate_edge_rank(lam, 5000)
    # k = floor(5000^c) is far larger than the 7-point spectrum allows.
    assert est.k == 3
    assert any("reduced" in w for w in est.warnings)


def test_estimate_edge_rank_rejects_tiny_spectra():
    with pytest.raises(ValueError):
        estimate_edge_rank(np.array([1.0, 0.5]), 1000)


def test_pseudo_cdf_shapes_and_divisors():
    rng = np.random.default_rng(9)
    p = 120
    lam = np.sort(rng.uniform(0.2, 4.0, size=p))[::-1]
    r, k = 3, 10
    ps_e = pseudo_cdf_e(lam, r, k, beta_n=0.6)
    ps_t = pseudo_cdf_t(lam, r, beta_n=0.6)
    ps_imp = pseudo_cdf_imp(lam, k, beta_n=0.6)
    assert ps_e.values.size == p - r
    assert ps_e.denom == p - r
    assert ps_t.values.size == p - r
    assert ps_t.denom == p - r
    assert ps_imp.values.size == p
    assert ps_imp.denom == p
    # e-variant tail beyond the imputation window is the observed spectrum.
    np.testing.assert_array_equal(ps_e.values[k:], lam[k + r :])
    np.testing.assert_array_equal(ps_t.values, lam[r:])
    np.testing.assert_array_equal(ps_imp.values[k:], lam[k:])
    # Imputed heads agree with the standalone imputation helper.
    np.testing.assert_array_equal(ps_e.values[:k], impute_edge_eigenvalues(lam, r, k))
    np.testing.assert_array_equal(ps_imp.values[:k], impute_edge_eigenvalues(lam, 0, k))


def test_pseudo_cdf_e_with_zero_window_equals_t():
    rng = np.random.default_rng(21)
    lam = np.sort(rng.uniform(0.2, 4.0, size=50))[::-1]
    ps_e = pseudo_cdf_e(lam, 2, 0, beta_n=1.0)
    ps_t = pseudo_cdf_t(lam, 2, beta_n=1.0)
    np.testing.assert_array_equal(ps_e.values, ps_t.values)
    assert ps_e.denom == ps_t.denom


def test_pseudo_cdf_t_validation():
    lam = np.array([3.0, 2.0, 1.0])
    with pytest.raises(ValueError):
        pseudo_cdf_t(lam, 3, beta_n=1.0)
    with pytest.raises(ValueError):
        pseudo_cdf_t(lam, -1, beta_n=1.0)


def test_imputed_spectrum_tracks_pure_noise_spectrum():
    # With r detected outliers removed, the imputed pseudo-spectrum should
    # stay uniformly close to the spectrum of the underlying noise draw.
    model = NoiseModel(kind="type2")
    n = 1000
    worst = []
    for seed in range(3):
        rng = replicate_rng(seed, 0)
        lam_noise = noise_spectrum(n, n, model, rng)
        est = estimate_edge_rank(lam_noise, n)
        k = est.k
        ps = pseudo_cdf_e(lam_noise, 0, k, beta_n=1.0)
        # Kolmogorov-Smirnov distance between the two discrete CDFs.
        grid = np.concatenate([lam_noise, ps.values])
        cdf_a = np.searchsorted(np.sort(lam_noise), grid, side="right") / n
        cdf_b = np.searchsorted(np.sort(ps.values), grid, side="right") / ps.denom
        worst.append(np.max(np.abs(cdf_a - cdf_b)))
    assert max(worst) <= (default_k(n) + 1) / n + 0.02
