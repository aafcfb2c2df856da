"""Rank recovery under colored noise: adaptive edge versus white-noise count.

Draws rank-15 signals with uniformly random strengths on [0, 4] under a
two-sided colored noise ensemble, then compares two rank estimators against
the ground-truth number of detectable components:

- the adaptive estimator (eigenvalues above an estimated bulk edge), and
- the white-noise baseline (singular values above a median-calibrated
  threshold), which systematically overcounts when the noise is colored.

Run:  python3 demos/rank_estimation.py
"""

import collections

import numpy as np

from eoptshrink import (
    ExperimentConfig,
    ExperimentKind,
    NoiseModel,
    estimate_alpha,
    run_rank_experiment,
)


def main() -> None:
    noise = NoiseModel(kind="type2")
    alpha = estimate_alpha(noise, 1.0, 2000, 6, 11)
    print(f"detection threshold for this ensemble: {alpha.mean:.3f} +- {alpha.std:.3f}")

    cfg = ExperimentConfig(
        experiment=ExperimentKind.RANK,
        noise=noise,
        n_grid=(300, 600, 1200),
        replicates=10,
        seed=11,
        signal_rank=15,
        alpha_value=alpha.mean,
    )
    result = run_rank_experiment(cfg)

    print()
    print(f"{'n':>6} {'estimator':>10} {'median err':>11} {'exact':>6}  error counts")
    for n in cfg.n_grid:
        for metric, label in (("eopt_rank_err", "adaptive"), ("trad_rank_err", "baseline")):
            errs = result.values(metric, n=n).astype(int)
            counts = dict(sorted(collections.Counter(int(e) for e in errs).items()))
            exact = np.mean(errs == 0)
            print(
                f"{n:>6} {label:>10} {np.median(errs):>11.1f} {exact:>6.0%}  {counts}"
            )
    print()
    print("Positive error means overestimation. The baseline mistakes dozens of")
    print("colored bulk eigenvalues for signal at every size. The adaptive edge")
    print("is off by at most a few components, and only for signals whose")
    print("strength falls inside a window around the detection threshold that")
    print("shrinks as n grows.")


if __name__ == "__main__":
    main()
