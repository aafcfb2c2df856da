"""End-to-end denoising pipelines.

``eoptshrink`` runs the adaptive pipeline: estimate the bulk edge and
effective rank from the observed spectrum, build a pseudo-spectrum for the
noise bulk, estimate each outlier's limiting components from it, and apply
the optimal shrinker for the requested loss.  ``trad_denoise`` runs the
white-noise baseline built on a single scale estimate and closed-form
shrinkage.

Both accept any p x n real matrix; inputs with p > n are transposed
internally and the result is transposed back.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .edge import (
    EdgeRankEstimate,
    estimate_edge_rank,
    pseudo_cdf_e,
    pseudo_cdf_imp,
    pseudo_cdf_t,
)
from .shrinkers import LossKind, TradEstimate, optimal_shrinker, trad_component, trad_sigma
from .transforms import ComponentEstimate, PseudoSpectrum, component_estimates

__all__ = [
    "CdfVariant",
    "MethodKind",
    "SpectralDecomposition",
    "DenoiseResult",
    "full_svd",
    "eoptshrink",
    "trad_denoise",
]


class CdfVariant(str, Enum):
    """Pseudo-spectrum flavor used for component estimation."""

    E = "e"
    T = "t"
    IMP = "imp"


class MethodKind(str, Enum):
    EOPT = "eopt"
    TRAD = "trad"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Full SVD of a p x n matrix: min(p, n) singular triplets."""

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        """Descending eigenvalues of the p x p Gram matrix (squared singular values)."""
        return self.singular_values**2


@dataclass(frozen=True)
class DenoiseResult:
    """Outcome of one denoising run.

    ``components`` holds one estimate per retained index, in order;
    ``edge_rank`` and ``pseudo_spectrum`` are None for the TRAD method,
    ``sigma_hat`` is None for the adaptive method.
    """

    s_hat: np.ndarray
    components: tuple
    method: MethodKind
    loss: LossKind
    cdf_variant: CdfVariant | None
    edge_rank: EdgeRankEstimate | None
    pseudo_spectrum: PseudoSpectrum | None
    sigma_hat: float | None
    warnings: tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.components)


def full_svd(matrix: np.ndarray) -> SpectralDecomposition:
    """Thin SVD with descending singular values."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return SpectralDecomposition(singular_values=s, left_vectors=u, right_vectors=vh.T)


def _reconstruct(dec: SpectralDecomposition, phis: np.ndarray) -> np.ndarray:
    """Sum of phi_i * xi_i zeta_i^T over the leading len(phis) triplets."""
    p = dec.left_vectors.shape[0]
    n = dec.right_vectors.shape[0]
    m = len(phis)
    if m == 0:
        return np.zeros((p, n))
    return (dec.left_vectors[:, :m] * phis) @ dec.right_vectors[:, :m].T


def _pseudo_spectrum(
    lambdas: np.ndarray,
    edge: EdgeRankEstimate,
    cdf_variant: CdfVariant,
    beta_n: float,
    warnings: list[str],
) -> PseudoSpectrum:
    r = edge.r_plus_hat
    if cdf_variant is CdfVariant.T:
        return pseudo_cdf_t(lambdas, r, beta_n)
    if cdf_variant is CdfVariant.IMP:
        k_imp = min(edge.k, (lambdas.size - 1) // 2)
        if k_imp < 1:
            warnings.append("imp variant infeasible at this size; falling back to t")
            return pseudo_cdf_t(lambdas, r, beta_n)
        return pseudo_cdf_imp(lambdas, k_imp, beta_n)
    k_imp = len(edge.imputed)
    if k_imp < 1:
        warnings.append("too few bulk eigenvalues to impute; falling back to t variant")
        return pseudo_cdf_t(lambdas, r, beta_n)
    return pseudo_cdf_e(lambdas, r, k_imp, beta_n)


def eoptshrink(
    matrix: np.ndarray,
    loss: LossKind = LossKind.FROBENIUS,
    c_override: float | None = None,
    cdf_variant: CdfVariant = CdfVariant.E,
) -> DenoiseResult:
    """Adaptive optimal shrinkage of a noisy low-rank matrix.

    Estimates the noise-bulk edge and the number of outlying components from
    the observed spectrum alone, then shrinks each outlying singular value
    according to the requested loss.  No knowledge of the noise covariance
    is used.
    """
    loss = LossKind(loss)
    cdf_variant = CdfVariant(cdf_variant)
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    transposed = a.shape[0] > a.shape[1]
    work = a.T if transposed else a
    p, n = work.shape
    beta_n = p / n

    dec = full_svd(work)
    lambdas = dec.eigenvalues
    warnings: list[str] = []
    edge = estimate_edge_rank(lambdas, n, c_override=c_override)
    warnings.extend(edge.warnings)

    r = edge.r_plus_hat
    if r > p - 2:
        warnings.append(f"effective rank {r} leaves no bulk; clamped to {p - 2}")
        r = max(p - 2, 0)
        edge = dataclasses.replace(edge, r_plus_hat=r)

    ps = _pseudo_spectrum(lambdas, edge, cdf_variant, beta_n, warnings)
    components: list[ComponentEstimate] = []
    phis = np.zeros(r)
    for i in range(r):
        lam = lambdas[i]
        if lam <= ps.bulk_max:
            warnings.append(
                f"component {i + 1} is not separated from the pseudo-spectrum bulk; set to zero"
            )
            continue
        try:
            est = component_estimates(ps, lam)
        except ValueError:
            warnings.append(
                f"component {i + 1} has no admissible transform value; set to zero"
            )
            continue
        phi = optimal_shrinker(est.d_hat, est.a1_hat, est.a2_hat, loss)
        phis[i] = phi
        components.append(dataclasses.replace(est, phi_hat=phi))

    s_hat = _reconstruct(dec, phis)
    if transposed:
        s_hat = s_hat.T
    return DenoiseResult(
        s_hat=s_hat,
        components=tuple(components),
        method=MethodKind.EOPT,
        loss=loss,
        cdf_variant=cdf_variant,
        edge_rank=edge,
        pseudo_spectrum=ps,
        sigma_hat=None,
        warnings=tuple(warnings),
    )


def trad_denoise(matrix: np.ndarray, loss: LossKind = LossKind.FROBENIUS) -> DenoiseResult:
    """White-noise baseline: scale by the median singular value, then apply
    the closed-form shrinker for the requested loss."""
    loss = LossKind(loss)
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    transposed = a.shape[0] > a.shape[1]
    work = a.T if transposed else a
    p, n = work.shape
    beta_n = p / n

    dec = full_svd(work)
    sigma = trad_sigma(dec.singular_values, p, n)
    components: list[TradEstimate] = []
    phis: list[float] = []
    for s in dec.singular_values:
        est = trad_component(float(s), sigma, beta_n, loss)
        if est is None:
            break
        components.append(est)
        phis.append(est.phi)

    s_hat = _reconstruct(dec, np.asarray(phis))
    if transposed:
        s_hat = s_hat.T
    return DenoiseResult(
        s_hat=s_hat,
        components=tuple(components),
        method=MethodKind.TRAD,
        loss=loss,
        cdf_variant=None,
        edge_rank=None,
        pseudo_spectrum=None,
        sigma_hat=sigma,
        warnings=(),
    )
