"""Bulk-edge estimation, effective rank, and square-root-law imputation.

Builds the three pseudo-spectra used by the denoising pipeline: the
edge-imputed spectrum (``pseudo_cdf_e``), the plain truncated spectrum
(``pseudo_cdf_t``), and the unshifted imputed spectrum (``pseudo_cdf_imp``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .transforms import PseudoSpectrum

__all__ = [
    "EdgeRankEstimate",
    "select_c",
    "default_k",
    "estimate_bulk_edge",
    "estimate_effective_rank",
    "impute_edge_eigenvalues",
    "estimate_edge_rank",
    "pseudo_cdf_e",
    "pseudo_cdf_t",
    "pseudo_cdf_imp",
]

# 2^(2/3) - 1, the square-root-law spacing constant.
_EDGE_DENOM = 2.0 ** (2.0 / 3.0) - 1.0


@dataclass(frozen=True)
class EdgeRankEstimate:
    """Bulk edge, effective rank, and the imputed edge eigenvalues.

    ``k`` and ``c`` are the spacing parameters actually used for the edge
    formula; ``imputed`` holds the k reconstructed eigenvalues (fewer when a
    feasibility fallback reduced the imputation window, see ``warnings``).
    """

    lambda_plus_hat: float
    r_plus_hat: int
    k: int
    c: float
    imputed: np.ndarray
    warnings: tuple[str, ...] = field(default=())


def select_c(n: int) -> float:
    """Spacing exponent c = min(1/2.01, 1/ln(ln n)).

    The second branch only wins for n >= 1743; below that ln(ln n) < 2.01 and
    the cap 1/2.01 applies.
    """
    if n <= 2:
        raise ValueError("select_c requires n >= 3")
    return min(1.0 / 2.01, 1.0 / math.log(math.log(n)))


def default_k(n: int, c: float | None = None) -> int:
    """Window size floor(n^c) with c from :func:`select_c` unless given."""
    if c is None:
        c = select_c(n)
    return int(math.floor(n**c))


def _check_descending(lambdas: np.ndarray) -> np.ndarray:
    arr = np.asarray(lambdas, dtype=float)
    if arr.ndim != 1:
        raise ValueError("spectrum must be one-dimensional")
    if arr.size > 1 and np.any(np.diff(arr) > 0):
        raise ValueError("spectrum must be sorted non-increasing")
    return arr


def estimate_bulk_edge(lambdas: np.ndarray, k: int) -> float:
    """Bulk-edge estimate lambda_{k+1} + (lambda_{k+1} - lambda_{2k+1})/(2^(2/3)-1).

    Extrapolates the square-root eigenvalue spacing at the edge; indices are
    one-based in the formula, so the spectrum must have at least 2k+1 entries.
    """
    arr = _check_descending(lambdas)
    if k < 1:
        raise ValueError("k must be a positive integer")
    if arr.size < 2 * k + 1:
        raise ValueError(
            f"spectrum of length {arr.size} too short for edge window k={k} "
            f"(needs {2 * k + 1})"
        )
    gap = arr[k] - arr[2 * k]
    return float(arr[k] + gap / _EDGE_DENOM)


def estimate_effective_rank(lambdas: np.ndarray, lambda_plus_hat: float, n: int) -> int:
    """Number of eigenvalues strictly above lambda_plus_hat + n^(-1/3)."""
    arr = _check_descending(lambdas)
    threshold = lambda_plus_hat + n ** (-1.0 / 3.0)
    return int(np.sum(arr > threshold))


def impute_edge_eigenvalues(lambdas: np.ndarray, r_plus_hat: int, k: int) -> np.ndarray:
    """Reconstruct the k eigenvalues hidden behind the top r_plus_hat outliers.

    For j = 1..k the reconstruction anchors at lambda_{k+r+1} and extrapolates
    with the square-root-law coefficients (1 - ((j-1)/k)^(2/3))/(2^(2/3)-1);
    the output is non-increasing and sits above the anchor.
    """
    arr = _check_descending(lambdas)
    if k < 1:
        raise ValueError("k must be a positive integer")
    if r_plus_hat < 0:
        raise ValueError("r_plus_hat must be nonnegative")
    if arr.size < 2 * k + r_plus_hat + 1:
        raise ValueError(
            f"spectrum of length {arr.size} too short for imputation "
            f"(needs {2 * k + r_plus_hat + 1})"
        )
    anchor = arr[k + r_plus_hat]
    gap = anchor - arr[2 * k + r_plus_hat]
    j = np.arange(1, k + 1, dtype=float)
    coeff = (1.0 - ((j - 1.0) / k) ** (2.0 / 3.0)) / _EDGE_DENOM
    return anchor + coeff * gap


def estimate_edge_rank(
    lambdas: np.ndarray,
    n: int,
    c_override: float | None = None,
) -> EdgeRankEstimate:
    """Full edge/rank stage: lambda_plus_hat, r_plus_hat, and imputed values.

    The effective rank is computed with the unshifted window k = floor(n^c);
    imputation then reuses k shifted past the detected outliers.  When the
    spectrum is too short for either window, k is reduced to the largest
    feasible value and a warning is recorded (k = 0 leaves ``imputed`` empty).
    """
    arr = _check_descending(lambdas)
    p = arr.size
    warnings: list[str] = []
    c = select_c(n) if c_override is None else float(c_override)
    k = default_k(n, c)
    k_edge = min(k, (p - 1) // 2)
    if k_edge < 1:
        raise ValueError(f"spectrum of length {p} too short for any edge window")
    if k_edge < k:
        warnings.append(f"edge window reduced from k={k} to k={k_edge} (short spectrum)")
    lam_plus = estimate_bulk_edge(arr, k_edge)
    r_plus = estimate_effective_rank(arr, lam_plus, n)
    if k_edge <= r_plus:
        warnings.append(
            f"window k={k_edge} does not exceed the detected rank {r_plus}; "
            "edge and imputation may be unreliable at this size"
        )
    k_imp = min(k_edge, (p - r_plus - 1) // 2)
    if k_imp < k_edge:
        warnings.append(
            f"imputation window reduced from k={k_edge} to k={k_imp} "
            "(short spectrum past the detected outliers)"
        )
    if k_imp >= 1:
        imputed = impute_edge_eigenvalues(arr, r_plus, k_imp)
    else:
        imputed = np.empty(0)
    return EdgeRankEstimate(
        lambda_plus_hat=float(lam_plus),
        r_plus_hat=int(r_plus),
        k=int(k_edge),
        c=float(c),
        imputed=imputed,
        warnings=tuple(warnings),
    )


def pseudo_cdf_e(
    lambdas: np.ndarray, r_plus_hat: int, k: int, beta_n: float
) -> PseudoSpectrum:
    """Edge-imputed pseudo-spectrum: k imputed values, then the observed tail.

    Values are the imputed lambda_{r+1..r+k} followed by the observed
    lambda_{k+r+1..p}; the divisor is p - r_plus_hat.  k = 0 degenerates to
    the observed tail (identical to :func:`pseudo_cdf_t`).
    """
    arr = _check_descending(lambdas)
    p = arr.size
    if k == 0:
        values = arr[r_plus_hat:]
    else:
        imputed = impute_edge_eigenvalues(arr, r_plus_hat, k)
        values = np.concatenate([imputed, arr[k + r_plus_hat :]])
    return PseudoSpectrum(values=values, denom=p - r_plus_hat, beta_n=beta_n)


def pseudo_cdf_t(lambdas: np.ndarray, r_plus_hat: int, beta_n: float) -> PseudoSpectrum:
    """Truncated pseudo-spectrum: drop the top r_plus_hat observed eigenvalues."""
    arr = _check_descending(lambdas)
    p = arr.size
    if not (0 <= r_plus_hat < p):
        raise ValueError("r_plus_hat must satisfy 0 <= r_plus_hat < p")
    return PseudoSpectrum(values=arr[r_plus_hat:], denom=p - r_plus_hat, beta_n=beta_n)


def pseudo_cdf_imp(lambdas: np.ndarray, k_imp: int, beta_n: float) -> PseudoSpectrum:
    """Unshifted imputed pseudo-spectrum over the full divisor p.

    Replaces the top k_imp eigenvalues with square-root-law reconstructions
    anchored at lambda_{k+1} (no rank shift), keeps the rest observed, and
    divides by p.
    """
    arr = _check_descending(lambdas)
    p = arr.size
    imputed = impute_edge_eigenvalues(arr, 0, k_imp)
    values = np.concatenate([imputed, arr[k_imp:]])
    return PseudoSpectrum(values=values, denom=p, beta_n=beta_n)
