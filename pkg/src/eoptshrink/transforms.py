"""Stieltjes and D-transform machinery on discrete pseudo-spectra.

A pseudo-spectrum is a finite list of nonnegative pseudo-eigenvalues together
with an explicit divisor and an aspect ratio.  All transforms are evaluated at
real points strictly to the right of the pseudo-bulk, which is the only regime
the denoising pipeline needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PseudoSpectrum",
    "ComponentEstimate",
    "stieltjes_at",
    "stieltjes_deriv_at",
    "companion_stieltjes",
    "companion_stieltjes_deriv",
    "d_transform_at",
    "d_transform_inverse",
    "component_estimates",
]


@dataclass(frozen=True)
class PseudoSpectrum:
    """A discrete spectral measure with an explicit divisor.

    Parameters
    ----------
    values : ndarray
        Pseudo-eigenvalues, sorted non-increasing, all >= 0.
    denom : int
        The divisor of the empirical sums (p - r for trimmed spectra, p for
        imputed ones).  Need not equal ``len(values)``.
    beta_n : float
        Aspect ratio p/n used by the companion transform.
    """

    values: np.ndarray
    denom: int
    beta_n: float

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if vals.size and (np.any(~np.isfinite(vals)) or np.any(vals < 0)):
            raise ValueError("values must be finite and nonnegative")
        if vals.size > 1 and np.any(np.diff(vals) > 0):
            raise ValueError("values must be sorted non-increasing")
        if self.denom <= 0:
            raise ValueError("denom must be positive")
        if not (self.beta_n > 0):
            raise ValueError("beta_n must be positive")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def bulk_max(self) -> float:
        """Largest pseudo-eigenvalue, or 0.0 for an empty spectrum."""
        return float(self.values[0]) if self.values.size else 0.0


@dataclass(frozen=True)
class ComponentEstimate:
    """Spectral estimates attached to one retained component.

    ``a1_raw`` and ``a2_raw`` are the pre-clamp cosine-squared estimates kept
    for diagnostics; ``a1_hat``/``a2_hat`` are clamped to [0, 1].  ``phi_hat``
    is filled by the pipeline once a loss is chosen.
    """

    lambda_tilde: float
    m1: float
    m2: float
    m1_prime: float
    m2_prime: float
    t_hat: float
    t_hat_prime: float
    d_hat: float
    a1_hat: float
    a2_hat: float
    a1_raw: float = field(repr=False, default=np.nan)
    a2_raw: float = field(repr=False, default=np.nan)
    phi_hat: float | None = None


def _check_above_bulk(ps: PseudoSpectrum, x: float) -> None:
    if ps.values.size and not (x > ps.bulk_max):
        raise ValueError(
            f"evaluation point {x!r} is not strictly above the pseudo-bulk "
            f"maximum {ps.bulk_max!r}"
        )


def stieltjes_at(ps: PseudoSpectrum, x: float) -> float:
    """Stieltjes transform (1/denom) * sum_j 1/(value_j - x).

    Requires ``x`` strictly above every pseudo-eigenvalue; the result is then
    finite and negative (0.0 for an empty spectrum).
    """
    _check_above_bulk(ps, x)
    if ps.values.size == 0:
        return 0.0
    return float(np.sum(1.0 / (ps.values - x)) / ps.denom)


def stieltjes_deriv_at(ps: PseudoSpectrum, x: float) -> float:
    """Derivative (1/denom) * sum_j 1/(value_j - x)^2 of :func:`stieltjes_at`."""
    _check_above_bulk(ps, x)
    if ps.values.size == 0:
        return 0.0
    return float(np.sum(1.0 / (ps.values - x) ** 2) / ps.denom)


def companion_stieltjes(m1: float, x: float, beta_n: float) -> float:
    """Companion transform m2 = -(1 - beta_n)/x + beta_n * m1.

    Identical to the Stieltjes transform of the n-point spectrum obtained by
    padding the p nonzero eigenvalues with n - p zeros.
    """
    if x == 0:
        raise ValueError("companion transform undefined at x = 0")
    return -(1.0 - beta_n) / x + beta_n * m1


def companion_stieltjes_deriv(m1_prime: float, x: float, beta_n: float) -> float:
    """Derivative (1 - beta_n)/x^2 + beta_n * m1' of the companion transform."""
    if x == 0:
        raise ValueError("companion transform undefined at x = 0")
    return (1.0 - beta_n) / x**2 + beta_n * m1_prime


def d_transform_at(ps: PseudoSpectrum, x: float) -> tuple[float, float]:
    """D-transform t(x) = x*m1(x)*m2(x) and its derivative at x.

    Above the bulk t is positive and strictly decreasing, so the derivative
    m1*m2 + x*m1'*m2 + x*m2'*m1 is negative.
    """
    if not (x > 0):
        raise ValueError("d_transform_at requires x > 0")
    m1 = stieltjes_at(ps, x)
    m1p = stieltjes_deriv_at(ps, x)
    m2 = companion_stieltjes(m1, x, ps.beta_n)
    m2p = companion_stieltjes_deriv(m1p, x, ps.beta_n)
    t = x * m1 * m2
    tp = m1 * m2 + x * m1p * m2 + x * m2p * m1
    return float(t), float(tp)


def d_transform_inverse(
    ps: PseudoSpectrum, y: float, hi_factor: float = 100.0, tol: float = 1e-13
) -> float:
    """Invert the D-transform: find x above the bulk with t(x) = y.

    Plain interval bisection on (bulk_max*(1 + 1e-6), hi_factor*bulk_max],
    exploiting strict monotonicity of t.  The interval is driven to ``tol``
    relative width so the round-trip residual |t(x) - y| is far below 1e-9
    for any point where t is not pathologically steep.
    """
    if ps.values.size == 0:
        raise ValueError("cannot invert the D-transform of an empty spectrum")
    if not (y > 0):
        raise ValueError("d_transform_inverse requires y > 0")
    lo = ps.bulk_max * (1.0 + 1e-6)
    hi = hi_factor * ps.bulk_max
    if ps.bulk_max == 0.0:
        raise ValueError("cannot invert the D-transform of an all-zero spectrum")
    f_lo = d_transform_at(ps, lo)[0] - y
    f_hi = d_transform_at(ps, hi)[0] - y
    if f_lo < 0:
        raise ValueError(f"target {y!r} exceeds the transform just above the bulk")
    if f_hi > 0:
        raise ValueError(f"target {y!r} below the transform at the upper bracket")
    while hi - lo > tol * lo:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval exhausted in floating point
            break
        if d_transform_at(ps, mid)[0] - y > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def component_estimates(ps: PseudoSpectrum, lambda_tilde: float) -> ComponentEstimate:
    """Signal strength and cosine-squared estimates for one observed eigenvalue.

    With t = lambda*m1*m2 and t' its derivative, the estimates are
    d = 1/sqrt(t), a1 = m1/(d^2 t'), a2 = m2/(d^2 t').  The a-values are
    clamped to [0, 1]; raw values are kept for diagnostics.

    Raises
    ------
    ValueError
        If ``lambda_tilde`` is not above the pseudo-bulk or t <= 0 there.
    """
    m1 = stieltjes_at(ps, lambda_tilde)
    m1p = stieltjes_deriv_at(ps, lambda_tilde)
    m2 = companion_stieltjes(m1, lambda_tilde, ps.beta_n)
    m2p = companion_stieltjes_deriv(m1p, lambda_tilde, ps.beta_n)
    t = lambda_tilde * m1 * m2
    tp = m1 * m2 + lambda_tilde * (m1p * m2 + m2p * m1)
    if not (t > 0):
        raise ValueError(
            f"D-transform is nonpositive ({t!r}) at lambda_tilde={lambda_tilde!r}; "
            "component estimation undefined"
        )
    d_hat = 1.0 / np.sqrt(t)
    denom = d_hat**2 * tp
    a1_raw = m1 / denom
    a2_raw = m2 / denom
    return ComponentEstimate(
        lambda_tilde=float(lambda_tilde),
        m1=float(m1),
        m2=float(m2),
        m1_prime=float(m1p),
        m2_prime=float(m2p),
        t_hat=float(t),
        t_hat_prime=float(tp),
        d_hat=float(d_hat),
        a1_hat=float(min(1.0, max(0.0, a1_raw))),
        a2_hat=float(min(1.0, max(0.0, a2_raw))),
        a1_raw=float(a1_raw),
        a2_raw=float(a2_raw),
    )
