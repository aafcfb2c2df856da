"""Monte-Carlo experiment harness.

Four experiment kinds are supported:

- RANK: distribution of rank-estimation errors (adaptive estimator vs. the
  white-noise threshold count) against the ground-truth effective rank.
- CDF_COMPARE: error ratios of the component estimates d and sqrt(a1 a2)
  under the three pseudo-spectrum variants, with the assumed rank forced to
  truth + offset.
- ALPHA: per-replicate detection-threshold estimates on pure noise.
- DENOISE_BENCH: Frobenius error of adaptive shrinkage vs. hard truncation
  and the white-noise baseline on signal-plus-noise draws.

Every experiment is a pure function of its config: replicate streams are
derived from (seed, n, replicate, purpose), results are assembled in a fixed
canonical order, and BLAS threading is pinned inside each replicate, so
output bytes are identical across runs and worker counts.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np
from threadpoolctl import threadpool_limits

from .denoise import CdfVariant, full_svd
from .edge import estimate_edge_rank, pseudo_cdf_e, pseudo_cdf_imp, pseudo_cdf_t
from .models import (
    TAG_NOISE,
    TAG_SIGNAL,
    NoiseKind,
    NoiseModel,
    effective_rank_truth,
    estimate_alpha,
    generate_noise,
    generate_signal,
    noise_spectrum,
    alpha_from_spectrum,
    random_signal_model,
    replicate_rng,
)
from .shrinkers import LossKind, optimal_shrinker, trad_component, trad_sigma
from .transforms import component_estimates

__all__ = [
    "ExperimentKind",
    "ExperimentConfig",
    "ResultRow",
    "ExperimentResult",
    "run_experiment",
    "run_rank_experiment",
    "run_cdf_comparison",
    "run_alpha_benchmark",
    "run_denoise_benchmark",
    "rmse",
    "emit",
    "parse",
    "results_equal",
]


class ExperimentKind(str, Enum):
    RANK = "rank"
    CDF_COMPARE = "cdf_compare"
    ALPHA = "alpha"
    DENOISE_BENCH = "denoise_bench"


_CDF_VARIANTS = (CdfVariant.E, CdfVariant.T, CdfVariant.IMP)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full specification of one experiment run.

    ``alpha_value`` injects a precomputed detection threshold; when absent it
    is estimated once per run at size ``alpha_nprime`` with
    ``alpha_replicates`` draws (white noise uses the closed form beta^(1/4)).
    """

    experiment: ExperimentKind
    noise: NoiseModel
    n_grid: tuple[int, ...]
    replicates: int
    seed: int
    beta_n: float = 1.0
    loss: LossKind = LossKind.FROBENIUS
    rank_offsets: tuple[int, ...] = (0,)
    output_path: str | None = None
    signal_rank: int = 15
    d_low: float = 0.0
    d_high: float = 4.0
    alpha_value: float | None = None
    alpha_nprime: int = 2000
    alpha_replicates: int = 10
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "experiment", ExperimentKind(self.experiment))
        object.__setattr__(self, "loss", LossKind(self.loss))
        n_grid = tuple(sorted({int(n) for n in self.n_grid}))
        if not n_grid:
            raise ValueError("n_grid must be nonempty")
        if n_grid[0] < 50:
            raise ValueError("grid sizes below 50 are not supported")
        object.__setattr__(self, "n_grid", n_grid)
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if not (0 < self.beta_n):
            raise ValueError("beta_n must be positive")
        offsets = tuple(int(o) for o in self.rank_offsets)
        if any(not -2 <= o <= 2 for o in offsets):
            raise ValueError("rank offsets must lie in [-2, 2]")
        object.__setattr__(self, "rank_offsets", offsets)
        if self.signal_rank < 1:
            raise ValueError("signal_rank must be >= 1")
        if not (0 <= self.d_low < self.d_high):
            raise ValueError("need 0 <= d_low < d_high")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.experiment is ExperimentKind.CDF_COMPARE and self.beta_n > 1:
            raise ValueError("cdf comparison requires beta_n <= 1")
        # Keep the noise model's aspect ratio in sync with the experiment's.
        if self.noise.beta_n != self.beta_n:
            object.__setattr__(
                self, "noise", dataclasses.replace(self.noise, beta_n=self.beta_n)
            )

    def to_dict(self) -> dict:
        noise = {
            "kind": self.noise.kind.value,
            "side": self.noise.side.value,
            "entry_dist": self.noise.entry_dist.value,
        }
        if self.noise.a_profile is not None:
            noise["a_profile"] = [float(x) for x in self.noise.a_profile]
        if self.noise.b_profile is not None:
            noise["b_profile"] = [float(x) for x in self.noise.b_profile]
        return {
            "experiment": self.experiment.value,
            "noise": noise,
            "n_grid": list(self.n_grid),
            "replicates": self.replicates,
            "seed": self.seed,
            "beta_n": self.beta_n,
            "loss": self.loss.value,
            "rank_offsets": list(self.rank_offsets),
            "output_path": self.output_path,
            "signal_rank": self.signal_rank,
            "d_low": self.d_low,
            "d_high": self.d_high,
            "alpha_value": self.alpha_value,
            "alpha_nprime": self.alpha_nprime,
            "alpha_replicates": self.alpha_replicates,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        noise_data = dict(data.pop("noise", {"kind": "type1"}))
        noise_data.setdefault("beta_n", data.get("beta_n", 1.0))
        noise = NoiseModel(
            kind=noise_data["kind"],
            side=noise_data.get("side"),
            entry_dist=noise_data.get("entry_dist", "student_t10"),
            beta_n=noise_data["beta_n"],
            a_profile=noise_data.get("a_profile"),
            b_profile=noise_data.get("b_profile"),
        )
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        for key in ("n_grid", "rank_offsets"):
            if key in data:
                data[key] = tuple(data[key])
        return cls(noise=noise, **data)


class ResultRow(NamedTuple):
    n: int
    replicate: int
    metric: str
    value: float


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[ResultRow, ...]
    config: ExperimentConfig
    metadata: dict

    def values(self, metric: str, n: int | None = None) -> np.ndarray:
        """Row values for one metric (optionally restricted to one n), in replicate order."""
        return np.array(
            [
                row.value
                for row in self.rows
                if row.metric == metric and (n is None or row.n == n)
            ]
        )


def rmse(a: np.ndarray, b: np.ndarray) -> float:
    """Root mean squared entrywise difference of two equal-shape matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def _shape(beta_n: float, n: int) -> tuple[int, int]:
    p = int(round(beta_n * n))
    if p < 2:
        raise ValueError("aspect ratio too small for this n")
    return p, n


def _resolve_alpha(cfg: ExperimentConfig) -> tuple[float, dict]:
    if cfg.alpha_value is not None:
        return float(cfg.alpha_value), {"alpha_source": "provided"}
    if cfg.noise.kind is NoiseKind.TYPE1:
        return cfg.beta_n**0.25, {"alpha_source": "white-noise closed form"}
    est = estimate_alpha(
        cfg.noise, cfg.beta_n, cfg.alpha_nprime, cfg.alpha_replicates, cfg.seed
    )
    return est.mean, {
        "alpha_source": "monte-carlo",
        "alpha_std": est.std,
        "alpha_nprime": cfg.alpha_nprime,
        "alpha_replicates": cfg.alpha_replicates,
    }


def _draw_instance(cfg: ExperimentConfig, n: int, rep: int):
    """Signal-plus-noise draw for one replicate: (s_tilde, S, U, V, d)."""
    p, n = _shape(cfg.beta_n, n)
    rng_s = replicate_rng(cfg.seed, n, rep, TAG_SIGNAL)
    sig = random_signal_model(cfg.signal_rank, rng_s, cfg.d_low, cfg.d_high)
    s_mat, u, v, d = generate_signal(p, n, sig, rng_s)
    rng_z = replicate_rng(cfg.seed, n, rep, TAG_NOISE)
    z = generate_noise(p, n, cfg.noise, rng_z)
    return s_mat + z, s_mat, u, v, d


def _gram_spectrum(mat: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of the smaller-side Gram matrix."""
    work = mat if mat.shape[0] <= mat.shape[1] else mat.T
    return np.linalg.eigvalsh(work @ work.T)[::-1].copy()


def _rank_task(cfg: ExperimentConfig, alpha_hat: float, n: int, rep: int) -> list[float]:
    s_tilde, _, _, _, d = _draw_instance(cfg, n, rep)
    p = s_tilde.shape[0]
    lam = _gram_spectrum(s_tilde)
    edge = estimate_edge_rank(lam, max(p, n))
    r_true = effective_rank_truth(d, alpha_hat, n)
    sv = np.sqrt(np.maximum(lam, 0.0))
    sigma = trad_sigma(sv, p, n)
    beta_work = min(p, n) / max(p, n)
    trad_rank = int(np.sum(sv > sigma * (1.0 + math.sqrt(beta_work))))
    return [float(edge.r_plus_hat - r_true), float(trad_rank - r_true)]


def _cdf_task(cfg: ExperimentConfig, alpha_hat: float, n: int, rep: int) -> list[float]:
    s_tilde, _, u, v, d = _draw_instance(cfg, n, rep)
    p = s_tilde.shape[0]
    beta_work = p / n
    dec = full_svd(s_tilde)
    lam = dec.eigenvalues
    r_true = effective_rank_truth(d, alpha_hat, n)
    k = 2 * cfg.signal_rank
    out: list[float] = []
    for offset in cfg.rank_offsets:
        r_hat = max(0, r_true + offset)
        m = min(r_true, r_hat)
        for variant in _CDF_VARIANTS:
            d_err = a_err = math.nan
            if m > 0:
                try:
                    if variant is CdfVariant.E:
                        ps = pseudo_cdf_e(lam, r_hat, k, beta_work)
                    elif variant is CdfVariant.T:
                        ps = pseudo_cdf_t(lam, r_hat, beta_work)
                    else:
                        ps = pseudo_cdf_imp(lam, k, beta_work)
                    est = component_estimates(ps, float(lam[m - 1]))
                    d_truth = float(d[m - 1])
                    d_err = abs(est.d_hat - d_truth) / d_truth
                    a_est = math.sqrt(est.a1_hat * est.a2_hat)
                    a_truth = abs(
                        float(u[:, m - 1] @ dec.left_vectors[:, m - 1])
                        * float(v[:, m - 1] @ dec.right_vectors[:, m - 1])
                    )
                    a_err = abs(a_est - a_truth) / a_truth
                except ValueError:
                    pass
            out.extend([d_err, a_err])
    return out


def _alpha_task(cfg: ExperimentConfig, alpha_hat: float, n: int, rep: int) -> list[float]:
    p, n = _shape(cfg.beta_n, n)
    rng = replicate_rng(cfg.seed, n, rep, TAG_NOISE)
    lam = noise_spectrum(p, n, cfg.noise, rng)
    return [alpha_from_spectrum(lam, n)]


def _bench_task(cfg: ExperimentConfig, alpha_hat: float, n: int, rep: int) -> list[float]:
    s_tilde, s_mat, _, _, _ = _draw_instance(cfg, n, rep)
    p = s_tilde.shape[0]
    work = s_tilde if p <= n else s_tilde.T
    dec = full_svd(work)
    lam = dec.eigenvalues
    edge = estimate_edge_rank(lam, max(p, n))
    r_hat = edge.r_plus_hat
    beta_work = min(p, n) / max(p, n)

    phis = np.zeros(r_hat)
    if r_hat > 0 and len(edge.imputed) > 0:
        ps = pseudo_cdf_e(lam, r_hat, len(edge.imputed), beta_work)
        for i in range(r_hat):
            try:
                est = component_estimates(ps, float(lam[i]))
            except ValueError:
                continue
            phis[i] = optimal_shrinker(est.d_hat, est.a1_hat, est.a2_hat, cfg.loss)

    def recon(values: np.ndarray) -> np.ndarray:
        m = len(values)
        if m == 0:
            return np.zeros(work.shape)
        return (dec.left_vectors[:, :m] * values) @ dec.right_vectors[:, :m].T

    target = s_mat if p <= n else s_mat.T
    eopt_loss = float(np.linalg.norm(recon(phis) - target))
    trunc_loss = float(np.linalg.norm(recon(dec.singular_values[:r_hat]) - target))

    sigma = trad_sigma(dec.singular_values, p, n)
    trad_phis = []
    for s in dec.singular_values:
        est = trad_component(float(s), sigma, beta_work, cfg.loss)
        if est is None:
            break
        trad_phis.append(est.phi)
    trad_loss = float(np.linalg.norm(recon(np.asarray(trad_phis)) - target))
    return [eopt_loss, trunc_loss, trad_loss]


def _metric_names(cfg: ExperimentConfig) -> list[str]:
    kind = cfg.experiment
    if kind is ExperimentKind.RANK:
        return ["eopt_rank_err", "trad_rank_err"]
    if kind is ExperimentKind.CDF_COMPARE:
        names = []
        for offset in cfg.rank_offsets:
            for variant in _CDF_VARIANTS:
                names.append(f"d_err_{variant.value}_off{offset:+d}")
                names.append(f"a_err_{variant.value}_off{offset:+d}")
        return names
    if kind is ExperimentKind.ALPHA:
        return ["alpha"]
    return ["eopt_loss", "trunc_loss", "trad_loss"]


_TASKS: dict[ExperimentKind, Callable] = {
    ExperimentKind.RANK: _rank_task,
    ExperimentKind.CDF_COMPARE: _cdf_task,
    ExperimentKind.ALPHA: _alpha_task,
    ExperimentKind.DENOISE_BENCH: _bench_task,
}


def _run_one(cfg: ExperimentConfig, alpha_hat: float, n: int, rep: int) -> list[float]:
    # Pin BLAS threading inside the replicate so arithmetic is identical
    # whether replicates run serially or in a pool.
    with threadpool_limits(limits=1):
        return _TASKS[cfg.experiment](cfg, alpha_hat, n, rep)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute a config end to end and return canonically ordered rows."""
    start = time.perf_counter()
    needs_alpha = cfg.experiment in (ExperimentKind.RANK, ExperimentKind.CDF_COMPARE)
    alpha_meta: dict = {}
    alpha_hat = math.nan
    if needs_alpha:
        alpha_hat, alpha_meta = _resolve_alpha(cfg)
        alpha_meta["alpha_hat"] = alpha_hat

    tasks = [(n, rep) for n in cfg.n_grid for rep in range(cfg.replicates)]
    if cfg.workers == 1:
        outputs = {key: _run_one(cfg, alpha_hat, *key) for key in tasks}
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = {key: pool.submit(_run_one, cfg, alpha_hat, *key) for key in tasks}
            outputs = {key: fut.result() for key, fut in futures.items()}

    metrics = _metric_names(cfg)
    rows = []
    for n in cfg.n_grid:
        for rep in range(cfg.replicates):
            values = outputs[(n, rep)]
            if len(values) != len(metrics):  # pragma: no cover - task contract
                raise RuntimeError("task returned wrong number of metrics")
            for name, value in zip(metrics, values):
                rows.append(ResultRow(n=n, replicate=rep, metric=name, value=float(value)))

    from . import __version__

    metadata = {
        "version": __version__,
        "wall_time_s": time.perf_counter() - start,
        "metrics": metrics,
        "error_definition": "absolute difference divided by absolute truth",
        **alpha_meta,
        "config": cfg.to_dict(),
    }
    if cfg.experiment is ExperimentKind.ALPHA:
        summary = {}
        arr = np.array([r.value for r in rows]).reshape(len(cfg.n_grid), cfg.replicates)
        for n, vals in zip(cfg.n_grid, arr):
            summary[str(n)] = {
                "mean": float(np.mean(vals)),
                "std": float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0,
            }
        metadata["alpha_summary"] = summary
    result = ExperimentResult(rows=tuple(rows), config=cfg, metadata=metadata)
    if cfg.output_path:
        emit(result, cfg.output_path)
    return result


def _checked_run(cfg: ExperimentConfig, kind: ExperimentKind) -> ExperimentResult:
    if cfg.experiment is not kind:
        raise ValueError(f"config experiment is {cfg.experiment.value}, expected {kind.value}")
    return run_experiment(cfg)


def run_rank_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return _checked_run(cfg, ExperimentKind.RANK)


def run_cdf_comparison(cfg: ExperimentConfig) -> ExperimentResult:
    return _checked_run(cfg, ExperimentKind.CDF_COMPARE)


def run_alpha_benchmark(cfg: ExperimentConfig) -> ExperimentResult:
    return _checked_run(cfg, ExperimentKind.ALPHA)


def run_denoise_benchmark(cfg: ExperimentConfig) -> ExperimentResult:
    return _checked_run(cfg, ExperimentKind.DENOISE_BENCH)


def emit(result: ExperimentResult, path: str | Path) -> Path:
    """Write rows as CSV plus a JSON sidecar with config and metadata.

    The CSV has header ``n,replicate,metric,value`` with values printed at
    full round-trip precision; the sidecar lives at ``<path>.meta.json``.
    """
    path = Path(path)
    lines = ["n,replicate,metric,value"]
    for row in result.rows:
        lines.append(f"{row.n},{row.replicate},{row.metric},{row.value:.17g}")
    path.write_text("\n".join(lines) + "\n")
    sidecar = path.with_name(path.name + ".meta.json")
    sidecar.write_text(json.dumps(result.metadata, indent=2, sort_keys=True) + "\n")
    return path


def parse(path: str | Path) -> ExperimentResult:
    """Inverse of :func:`emit`."""
    path = Path(path)
    lines = path.read_text().strip().split("\n")
    if not lines or lines[0] != "n,replicate,metric,value":
        raise ValueError("unrecognized result CSV header")
    rows = []
    for line in lines[1:]:
        n_str, rep_str, metric, value_str = line.split(",")
        rows.append(
            ResultRow(
                n=int(n_str), replicate=int(rep_str), metric=metric, value=float(value_str)
            )
        )
    sidecar = path.with_name(path.name + ".meta.json")
    metadata = json.loads(sidecar.read_text())
    cfg = ExperimentConfig.from_dict(metadata["config"])
    return ExperimentResult(rows=tuple(rows), config=cfg, metadata=metadata)


def results_equal(a: ExperimentResult, b: ExperimentResult) -> bool:
    """Structural equality with NaN-tolerant value comparison."""
    if len(a.rows) != len(b.rows) or a.config.to_dict() != b.config.to_dict():
        return False
    for ra, rb in zip(a.rows, b.rows):
        if (ra.n, ra.replicate, ra.metric) != (rb.n, rb.replicate, rb.metric):
            return False
        if not (ra.value == rb.value or (math.isnan(ra.value) and math.isnan(rb.value))):
            return False
    return True
