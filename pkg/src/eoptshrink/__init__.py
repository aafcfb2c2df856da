"""Data-driven optimal singular-value shrinkage for matrix denoising.

The package estimates everything it needs from the observed spectrum of a
single noisy matrix: the noise-bulk edge, the number of outlying components,
and the limiting location/overlap quantities that determine the optimal
shrinkage weight for Frobenius, operator, or nuclear loss.  It makes no
assumption that the noise is white and never estimates the noise covariance
itself.
"""

try:
    from importlib.metadata import PackageNotFoundError, version

    __version__ = version("eoptshrink")
except PackageNotFoundError:  # pragma: no cover - source tree without install
    __version__ = "0+unknown"

from .denoise import (
    CdfVariant,
    DenoiseResult,
    MethodKind,
    SpectralDecomposition,
    eoptshrink,
    full_svd,
    trad_denoise,
)
from .edge import (
    EdgeRankEstimate,
    default_k,
    estimate_bulk_edge,
    estimate_edge_rank,
    estimate_effective_rank,
    impute_edge_eigenvalues,
    pseudo_cdf_e,
    pseudo_cdf_imp,
    pseudo_cdf_t,
    select_c,
)
from .experiments import (
    ExperimentConfig,
    ExperimentKind,
    ExperimentResult,
    ResultRow,
    emit,
    parse,
    results_equal,
    rmse,
    run_alpha_benchmark,
    run_cdf_comparison,
    run_denoise_benchmark,
    run_experiment,
    run_rank_experiment,
)
from .io import build_report, read_matrix_csv, write_matrix_csv, write_report
from .models import (
    TAG_NOISE,
    TAG_SIGNAL,
    AlphaEstimate,
    EntryDist,
    NoiseKind,
    NoiseModel,
    Side,
    SignalModel,
    alpha_from_spectrum,
    alpha_replicates,
    effective_rank_truth,
    estimate_alpha,
    estimate_alpha_batch,
    generate_noise,
    generate_signal,
    noise_spectrum,
    random_signal_model,
    replicate_rng,
)
from .shrinkers import (
    LossKind,
    TradEstimate,
    mp_median,
    optimal_shrinker,
    trad_component,
    trad_shrinker,
    trad_sigma,
)
from .transforms import (
    ComponentEstimate,
    PseudoSpectrum,
    companion_stieltjes,
    companion_stieltjes_deriv,
    component_estimates,
    d_transform_at,
    d_transform_inverse,
    stieltjes_at,
    stieltjes_deriv_at,
)

__all__ = [
    "__version__",
    "CdfVariant",
    "DenoiseResult",
    "MethodKind",
    "SpectralDecomposition",
    "eoptshrink",
    "full_svd",
    "trad_denoise",
    "EdgeRankEstimate",
    "default_k",
    "estimate_bulk_edge",
    "estimate_edge_rank",
    "estimate_effective_rank",
    "impute_edge_eigenvalues",
    "pseudo_cdf_e",
    "pseudo_cdf_imp",
    "pseudo_cdf_t",
    "select_c",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "ResultRow",
    "emit",
    "parse",
    "results_equal",
    "rmse",
    "run_alpha_benchmark",
    "run_cdf_comparison",
    "run_denoise_benchmark",
    "run_experiment",
    "run_rank_experiment",
    "build_report",
    "read_matrix_csv",
    "write_matrix_csv",
    "write_report",
    "TAG_NOISE",
    "TAG_SIGNAL",
    "AlphaEstimate",
    "EntryDist",
    "NoiseKind",
    "NoiseModel",
    "Side",
    "SignalModel",
    "alpha_from_spectrum",
    "alpha_replicates",
    "effective_rank_truth",
    "estimate_alpha",
    "estimate_alpha_batch",
    "generate_noise",
    "generate_signal",
    "noise_spectrum",
    "random_signal_model",
    "replicate_rng",
    "LossKind",
    "TradEstimate",
    "mp_median",
    "optimal_shrinker",
    "trad_component",
    "trad_shrinker",
    "trad_sigma",
    "ComponentEstimate",
    "PseudoSpectrum",
    "companion_stieltjes",
    "companion_stieltjes_deriv",
    "component_estimates",
    "d_transform_at",
    "d_transform_inverse",
    "stieltjes_at",
    "stieltjes_deriv_at",
]
