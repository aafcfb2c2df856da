"""Tests for the loss-specific shrinkers and the white-noise baseline.

The closed-form component values at x = 3, beta = 1 are exact algebraic
numbers (the squared golden ratio appears as ell); the median of the
Marchenko-Pastur law is cross-checked against an independent quadrature and
an empirical Wishart ensemble.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from eoptshrink import (
    LossKind,
    mp_median,
    optimal_shrinker,
    trad_component,
    trad_shrinker,
    trad_sigma,
)

ALL_LOSSES = (LossKind.FROBENIUS, LossKind.OPERATOR, LossKind.NUCLEAR)


def test_perfect_alignment_returns_d():
    for loss in ALL_LOSSES:
        assert optimal_shrinker(2.0, 1.0, 1.0, loss) == pytest.approx(2.0)


def test_half_alignment_values():
    # a1 = a2 = 1/2: Frobenius d/2, operator d (equal ratio), nuclear 0.
    assert optimal_shrinker(2.0, 0.5, 0.5, LossKind.FROBENIUS) == pytest.approx(1.0)
    assert optimal_shrinker(2.0, 0.5, 0.5, LossKind.OPERATOR) == pytest.approx(2.0)
    assert optimal_shrinker(2.0, 0.5, 0.5, LossKind.NUCLEAR) == 0.0


def test_zero_alignment_returns_zero():
    for loss in ALL_LOSSES:
        assert optimal_shrinker(3.0, 0.0, 0.7, loss) == 0.0
        assert optimal_shrinker(3.0, 0.0, 0.0, loss) == 0.0


def test_shrinker_validation():
    with pytest.raises(ValueError):
        optimal_shrinker(-1.0, 0.5, 0.5, LossKind.FROBENIUS)
    with pytest.raises(ValueError):
        optimal_shrinker(1.0, 1.5, 0.5, LossKind.FROBENIUS)
    with pytest.raises(ValueError):
        optimal_shrinker(1.0, 0.5, -0.1, LossKind.FROBENIUS)


def test_shrinker_symmetry_and_ordering():
    rng = np.random.default_rng(31)
    for _ in range(200):
        d = float(rng.uniform(0.0, 5.0))
        a1 = float(rng.uniform(0.0, 1.0))
        a2 = float(rng.uniform(0.0, 1.0))
        for loss in ALL_LOSSES:
            v = optimal_shrinker(d, a1, a2, loss)
            assert v == pytest.approx(optimal_shrinker(d, a2, a1, loss))
            assert 0.0 <= v
        frob = optimal_shrinker(d, a1, a2, LossKind.FROBENIUS)
        nuc = optimal_shrinker(d, a1, a2, LossKind.NUCLEAR)
        assert frob <= d + 1e-12
        assert nuc <= frob + 1e-12


def test_loss_accepts_string_aliases():
    assert optimal_shrinker(2.0, 1.0, 1.0, "frobenius") == pytest.approx(2.0)
    with pytest.raises(ValueError):
        optimal_shrinker(2.0, 1.0, 1.0, "l2")


def test_mp_median_against_independent_quadrature():
    # Reference values from a separate brentq root solve of the CDF.
    np.testing.assert_allclose(mp_median(1.0), 0.6527759416335677, atol=1e-6)
    np.testing.assert_allclose(mp_median(0.5), 0.8304658815832391, atol=1e-6)
    np.testing.assert_allclose(mp_median(0.25), 0.9160040706866612, atol=1e-6)
    np.testing.assert_allclose(mp_median(1e-4), 0.9999666665679195, atol=1e-6)


def test_mp_median_cdf_defect_below_tolerance():
    for beta in (1.0, 0.7, 0.3, 0.05):
        med = mp_median(beta)
        lm, lp = (1 - math.sqrt(beta)) ** 2, (1 + math.sqrt(beta)) ** 2

        def density(x):
            return math.sqrt(max(0.0, (lp - x) * (x - lm))) / (2 * math.pi * beta * x)

        cdf, _ = integrate.quad(density, lm, med, limit=400)
        assert abs(cdf - 0.5) <= 1e-8


def test_mp_median_monotone_and_small_beta_limit():
    betas = [1.0, 0.8, 0.5, 0.2, 0.05, 1e-3]
    meds = [mp_median(b) for b in betas]
    assert np.all(np.diff(meds) > 0)  # decreasing beta pushes the median to 1
    assert meds[-1] == pytest.approx(1.0, abs=5e-3)
    with pytest.raises(ValueError):
        mp_median(0.0)
    with pytest.raises(ValueError):
        mp_median(1.5)


def test_mp_median_matches_wishart_ensemble():
    # Empirical eigenvalue medians of n x n white noise with entry variance
    # 1/n concentrate at the MP median for beta = 1.
    n = 500
    meds = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((n, n)) / math.sqrt(n)
        meds.append(np.median(np.linalg.eigvalsh(x @ x.T)))
    assert np.mean(meds) == pytest.approx(mp_median(1.0), abs=0.01)


def test_trad_sigma_recovers_white_noise_scale():
    n = 500
    vals = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((n, n)) / math.sqrt(n)
        sv = np.linalg.svd(z, compute_uv=False)
        vals.append(trad_sigma(sv, n, n))
    vals = np.array(vals)
    assert np.all((0.95 < vals) & (vals < 1.05))


def test_trad_sigma_homogeneity_and_even_median():
    sv = np.array([4.0, 3.0, 2.0, 1.0])
    base = trad_sigma(sv, 4, 8)
    # Even length: median is the midpoint of the central pair.
    assert base == pytest.approx(2.5 / math.sqrt(mp_median(0.5)), rel=1e-12)
    assert trad_sigma(3.0 * sv, 4, 8) == pytest.approx(3.0 * base, rel=1e-12)
    with pytest.raises(ValueError):
        trad_sigma(np.empty(0), 4, 8)


def test_trad_component_golden_values():
    # x = 3, beta = 1: ell^2 = (7 + sqrt(45))/2, so ell is the squared golden
    # ratio and the Frobenius output is exactly sqrt(5).
    est = trad_component(3.0, 1.0, 1.0, LossKind.FROBENIUS)
    assert est is not None
    assert est.ell == pytest.approx(2.618033988749895, rel=1e-14)
    assert est.a1 == pytest.approx(0.8541019662496845, rel=1e-13)
    assert est.a2 == pytest.approx(0.8541019662496845, rel=1e-13)
    assert est.phi == pytest.approx(math.sqrt(5.0), rel=1e-13)
    assert est.lambda_tilde == pytest.approx(9.0)
    op = trad_component(3.0, 1.0, 1.0, LossKind.OPERATOR)
    assert op.phi == pytest.approx(2.618033988749895, rel=1e-13)
    nuc = trad_component(3.0, 1.0, 1.0, LossKind.NUCLEAR)
    assert nuc.phi == pytest.approx(1.8541019662496843, rel=1e-13)


def test_trad_component_scale_equivariance():
    base = trad_component(3.0, 1.0, 1.0, LossKind.FROBENIUS)
    scaled = trad_component(7.5, 2.5, 1.0, LossKind.FROBENIUS)
    assert scaled.ell == pytest.approx(base.ell, rel=1e-13)
    assert scaled.a1 == pytest.approx(base.a1, rel=1e-13)
    assert scaled.phi == pytest.approx(2.5 * base.phi, rel=1e-13)


def test_trad_component_threshold_boundary():
    for beta in (1.0, 0.5, 0.25):
        thr = 1.0 + math.sqrt(beta)
        assert trad_component(thr, 1.0, beta, LossKind.FROBENIUS) is None
        assert trad_component(thr - 1e-9, 1.0, beta, LossKind.FROBENIUS) is None
        est = trad_component(thr + 1e-6, 1.0, beta, LossKind.FROBENIUS)
        assert est is not None
        # Just above threshold ell approaches beta^(1/4) from above.
        assert est.ell == pytest.approx(beta**0.25, abs=1e-2)
        assert est.ell >= beta**0.25


def test_trad_component_large_signal_limit():
    # Far above the bulk the alignments approach 1 and ell approaches x.
    est = trad_component(50.0, 1.0, 1.0, LossKind.FROBENIUS)
    assert est.ell == pytest.approx(math.sqrt(50.0**2 - 2.0), rel=1e-6)
    assert est.a1 > 0.999
    assert est.a2 > 0.999
    assert est.phi == pytest.approx(50.0, rel=1e-2)


def test_trad_component_validation():
    with pytest.raises(ValueError):
        trad_component(3.0, 0.0, 1.0, LossKind.FROBENIUS)
    with pytest.raises(ValueError):
        trad_component(3.0, 1.0, 1.5, LossKind.FROBENIUS)


def test_trad_shrinker_zero_below_threshold():
    assert trad_shrinker(1.5, 1.0, 1.0, LossKind.FROBENIUS) == 0.0
    assert trad_shrinker(3.0, 1.0, 1.0, LossKind.FROBENIUS) == pytest.approx(
        math.sqrt(5.0), rel=1e-13
    )
