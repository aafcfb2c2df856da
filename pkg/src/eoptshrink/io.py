"""Matrix CSV exchange and denoising report serialization.

Matrices travel as plain comma-separated numeric text, one matrix row per
line, no header, printed with 17 significant digits so float64 values
round-trip exactly.  Reports are JSON documents summarizing one denoising
run (edge and rank estimates plus per-component quantities).
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path

import numpy as np

from .denoise import DenoiseResult, MethodKind
from .shrinkers import TradEstimate

__all__ = ["write_matrix_csv", "read_matrix_csv", "build_report", "write_report"]


def write_matrix_csv(matrix: np.ndarray, path: str | Path) -> Path:
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    path = Path(path)
    np.savetxt(path, a, fmt="%.17g", delimiter=",")
    return path


def read_matrix_csv(path: str | Path) -> np.ndarray:
    with warnings.catch_warnings():
        # An empty file is reported through the ValueError below instead.
        warnings.simplefilter("ignore", UserWarning)
        a = np.loadtxt(Path(path), delimiter=",", ndmin=2)
    if a.size == 0:
        raise ValueError("empty matrix file")
    return a


def _component_entry(comp) -> dict:
    if isinstance(comp, TradEstimate):
        return {
            "lambda_tilde": comp.lambda_tilde,
            "d_hat": comp.sigma_hat * comp.ell,
            "a1_hat": comp.a1,
            "a2_hat": comp.a2,
            "phi_hat": comp.phi,
        }
    return {
        "lambda_tilde": comp.lambda_tilde,
        "d_hat": comp.d_hat,
        "a1_hat": comp.a1_hat,
        "a2_hat": comp.a2_hat,
        "phi_hat": comp.phi_hat,
    }


def build_report(result: DenoiseResult, seed: int | None = None) -> dict:
    """JSON-ready summary of one denoising run."""
    edge = result.edge_rank
    report = {
        "lambda_plus_hat": edge.lambda_plus_hat if edge is not None else None,
        "r_plus_hat": edge.r_plus_hat if edge is not None else len(result.components),
        "c": edge.c if edge is not None else None,
        "k": edge.k if edge is not None else None,
        "components": [_component_entry(c) for c in result.components],
        "warnings": list(result.warnings),
        "method": result.method.value,
        "loss": result.loss.value,
        "cdf_variant": result.cdf_variant.value if result.cdf_variant is not None else None,
        "seed": seed,
    }
    if result.method is MethodKind.TRAD:
        report["sigma_hat"] = result.sigma_hat
    return report


def write_report(result: DenoiseResult, path: str | Path, seed: int | None = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(build_report(result, seed=seed), indent=2) + "\n")
    return path
