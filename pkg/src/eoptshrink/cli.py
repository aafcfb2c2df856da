"""Command-line interface.

Subcommands:

- ``denoise``: shrink a matrix read from CSV, write the denoised matrix and
  an optional JSON report.
- ``simulate``: run one experiment described by a JSON config file.
- ``alpha``: Monte-Carlo estimate of the detection threshold for a built-in
  noise ensemble.

Exit codes: 0 on success, 2 on configuration or validation errors, 3 on
numerical failures such as non-finite input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .denoise import CdfVariant, MethodKind, eoptshrink, trad_denoise
from .experiments import ExperimentConfig, ExperimentKind, emit, run_experiment
from .io import read_matrix_csv, write_matrix_csv, write_report
from .models import NoiseKind, NoiseModel, estimate_alpha
from .shrinkers import LossKind

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_SIMULATE_KINDS = {
    "rank": ExperimentKind.RANK,
    "cdf-compare": ExperimentKind.CDF_COMPARE,
    "alpha": ExperimentKind.ALPHA,
    "denoise-bench": ExperimentKind.DENOISE_BENCH,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eoptshrink", description="Adaptive optimal shrinkage for matrix denoising"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("denoise", help="denoise a matrix stored as CSV")
    d.add_argument("--input", required=True, help="input matrix CSV (no header)")
    d.add_argument(
        "--loss",
        choices=[k.value for k in LossKind],
        default=LossKind.FROBENIUS.value,
    )
    d.add_argument(
        "--method",
        choices=[k.value for k in MethodKind],
        default=MethodKind.EOPT.value,
    )
    d.add_argument(
        "--cdf",
        choices=[v.value for v in CdfVariant],
        default=CdfVariant.E.value,
        help="pseudo-spectrum variant (eopt method only)",
    )
    d.add_argument("--output", help="write the denoised matrix CSV here")
    d.add_argument("--report", help="write a JSON report here")
    d.add_argument("--c", type=float, default=None, help="override the edge exponent c")
    d.add_argument("--seed", type=int, default=None, help="echoed into the report")

    s = sub.add_parser("simulate", help="run a simulation experiment from a JSON config")
    s.add_argument("kind", choices=sorted(_SIMULATE_KINDS))
    s.add_argument("--config", required=True, help="experiment config JSON file")

    a = sub.add_parser("alpha", help="estimate the detection threshold for a noise model")
    a.add_argument("--noise", required=True, choices=[k.value for k in NoiseKind if k is not NoiseKind.CUSTOM])
    a.add_argument("--pn-ratio", type=float, required=True, help="aspect ratio p/n in (0, 1]")
    a.add_argument("--nprime", type=int, default=2000)
    a.add_argument("--reps", type=int, default=10)
    a.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_denoise(args: argparse.Namespace) -> int:
    try:
        matrix = read_matrix_csv(args.input)
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: bad matrix file: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not np.all(np.isfinite(matrix)):
        print("error: input matrix has non-finite entries", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        if args.method == MethodKind.TRAD.value:
            result = trad_denoise(matrix, loss=LossKind(args.loss))
        else:
            result = eoptshrink(
                matrix,
                loss=LossKind(args.loss),
                c_override=args.c,
                cdf_variant=CdfVariant(args.cdf),
            )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.output:
        write_matrix_csv(result.s_hat, args.output)
    if args.report:
        write_report(result, args.report, seed=args.seed)
    retained = len(result.components)
    print(f"retained {retained} component(s); method={result.method.value} loss={result.loss.value}")
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    kind = _SIMULATE_KINDS[args.kind]
    try:
        data = json.loads(Path(args.config).read_text())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    data.setdefault("experiment", kind.value)
    try:
        cfg = ExperimentConfig.from_dict(data)
        if cfg.experiment is not kind:
            raise ValueError(
                f"config experiment {cfg.experiment.value!r} does not match subcommand {args.kind!r}"
            )
        result = run_experiment(cfg)
    except (ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if cfg.output_path:
        print(f"wrote {cfg.output_path} and {cfg.output_path}.meta.json")
    else:
        emitted = emit(result, Path(args.config).with_suffix(".result.csv"))
        print(f"wrote {emitted} and {emitted}.meta.json")
    return EXIT_OK


def _cmd_alpha(args: argparse.Namespace) -> int:
    try:
        model = NoiseModel(kind=NoiseKind(args.noise), beta_n=args.pn_ratio)
        est = estimate_alpha(model, args.pn_ratio, args.nprime, args.reps, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps({"alpha_mean": est.mean, "alpha_std": est.std}))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "denoise":
        return _cmd_denoise(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    return _cmd_alpha(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
