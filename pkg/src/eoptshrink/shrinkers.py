"""Optimal shrinkers for three losses and the white-noise (TRAD) closed forms.

The general shrinkers act on a signal-strength estimate d and the two
cosine-squared alignments (a1, a2).  The TRAD path specializes them to white
noise, where the alignments have closed forms in the singular-value scale
x = s / sigma and the noise level comes from the median singular value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import integrate

__all__ = [
    "LossKind",
    "TradEstimate",
    "optimal_shrinker",
    "mp_median",
    "trad_sigma",
    "trad_component",
    "trad_shrinker",
]


class LossKind(str, Enum):
    """Loss functions with known optimal shrinkers."""

    FROBENIUS = "frobenius"
    OPERATOR = "operator"
    NUCLEAR = "nuclear"


@dataclass(frozen=True)
class TradEstimate:
    """Per-component quantities of the white-noise closed-form shrinker."""

    lambda_tilde: float
    sigma_hat: float
    ell: float
    a1: float
    a2: float
    phi: float


def optimal_shrinker(d_hat: float, a1: float, a2: float, loss: LossKind) -> float:
    """Evaluate the optimal shrinker for the given loss.

    Frobenius: d*sqrt(a1*a2); Operator: d*sqrt(min(a1,a2)/max(a1,a2));
    Nuclear: max(0, d*(sqrt(a1*a2) - sqrt((1-a1)(1-a2)))).  The nuclear form
    is floored at zero, and the operator ratio at a1 = a2 = 0 is taken as 0
    (no detected signal).
    """
    if d_hat < 0:
        raise ValueError("d_hat must be nonnegative")
    if not (0.0 <= a1 <= 1.0 and 0.0 <= a2 <= 1.0):
        raise ValueError("a1 and a2 must lie in [0, 1]")
    loss = LossKind(loss)
    if loss is LossKind.FROBENIUS:
        return d_hat * math.sqrt(a1 * a2)
    if loss is LossKind.OPERATOR:
        hi = max(a1, a2)
        if hi == 0.0:
            return 0.0
        return d_hat * math.sqrt(min(a1, a2) / hi)
    value = d_hat * (math.sqrt(a1 * a2) - math.sqrt((1.0 - a1) * (1.0 - a2)))
    return max(0.0, value)


def _mp_density(x: float, beta: float, lam_minus: float, lam_plus: float) -> float:
    return math.sqrt(max(0.0, (lam_plus - x) * (x - lam_minus))) / (
        2.0 * math.pi * beta * x
    )


@lru_cache(maxsize=None)
def mp_median(beta: float) -> float:
    """Median of the Marchenko-Pastur eigenvalue distribution with ratio beta.

    Computed by adaptive quadrature of the density
    sqrt((lam_plus - x)(x - lam_minus)) / (2 pi beta x) over the support
    [(1-sqrt(beta))^2, (1+sqrt(beta))^2], with bisection until the CDF at the
    returned point is within 1e-8 of one half.  Results are cached per beta.
    """
    if not (0.0 < beta <= 1.0):
        raise ValueError("beta must lie in (0, 1]")
    sqb = math.sqrt(beta)
    lam_minus = (1.0 - sqb) ** 2
    lam_plus = (1.0 + sqb) ** 2

    def cdf(t: float) -> float:
        val, _ = integrate.quad(
            _mp_density, lam_minus, t, args=(beta, lam_minus, lam_plus), limit=200
        )
        return val

    lo, hi = lam_minus, lam_plus
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        defect = cdf(mid) - 0.5
        if abs(defect) <= 1e-8:
            break
        if defect < 0:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
    return mid


def trad_sigma(singular_values: np.ndarray, p: int, n: int) -> float:
    """Median-calibrated white-noise level.

    Assumes the convention that noise entries have variance sigma^2/n, so the
    singular values of a pure-noise matrix follow the scaled MP law and
    sigma = s_med / sqrt(mp_median(beta)) with beta = min(p,n)/max(p,n).  An
    even-length spectrum uses the mean of the central pair as its median.
    """
    arr = np.asarray(singular_values, dtype=float)
    if arr.size == 0:
        raise ValueError("empty spectrum")
    beta = min(p, n) / max(p, n)
    return float(np.median(arr) / math.sqrt(mp_median(beta)))


def trad_component(
    singular_value: float, sigma: float, beta: float, loss: LossKind
) -> TradEstimate | None:
    """Closed-form component estimate under white noise, or None below threshold.

    With x = s/sigma, components at or below the detection boundary 1+sqrt(beta)
    are discarded.  Above it, the inverted signal strength is
    ell = sqrt((x^2-beta-1 + sqrt((x^2-beta-1)^2 - 4 beta))/2) and the
    alignments are a1 = (ell^4-beta)/(ell^4+beta*ell^2),
    a2 = (ell^4-beta)/(ell^4+ell^2).
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if not (0.0 < beta <= 1.0):
        raise ValueError("beta must lie in (0, 1]")
    x = singular_value / sigma
    if x <= 1.0 + math.sqrt(beta):
        return None
    u = x * x - beta - 1.0
    ell_sq = 0.5 * (u + math.sqrt(u * u - 4.0 * beta))
    ell = math.sqrt(ell_sq)
    ell4 = ell_sq * ell_sq
    a1 = (ell4 - beta) / (ell4 + beta * ell_sq)
    a2 = (ell4 - beta) / (ell4 + ell_sq)
    phi = optimal_shrinker(sigma * ell, a1, a2, loss)
    return TradEstimate(
        lambda_tilde=float(singular_value) ** 2,
        sigma_hat=float(sigma),
        ell=float(ell),
        a1=float(a1),
        a2=float(a2),
        phi=float(phi),
    )


def trad_shrinker(
    singular_value: float, sigma: float, beta: float, loss: LossKind
) -> float:
    """Shrunk singular value under white noise; 0 at or below the threshold."""
    est = trad_component(singular_value, sigma, beta, loss)
    return 0.0 if est is None else est.phi
