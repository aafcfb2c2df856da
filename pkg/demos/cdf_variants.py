"""Why the edge-imputed pseudo-spectrum is the right noise proxy.

The component estimates (strength d and the alignment product) are driven by
transforms of a pseudo-spectrum standing in for the unobservable noise
eigenvalues.  Three candidates are compared on the same draws:

- e:   imputed edge values where outliers displaced the bulk, then the tail;
- t:   the observed spectrum with the outliers simply dropped;
- imp: imputation without accounting for the outlier shift.

The comparison reports the median relative error of d_hat and of
sqrt(a1*a2) for the weakest detectable component, where the estimates are
most sensitive to the edge treatment.

Run:  python3 demos/cdf_variants.py
"""

import numpy as np

from eoptshrink import (
    ExperimentConfig,
    ExperimentKind,
    NoiseModel,
    estimate_alpha,
    run_cdf_comparison,
)


def main() -> None:
    noise = NoiseModel(kind="type2")
    alpha = estimate_alpha(noise, 1.0, 2000, 6, 13)
    cfg = ExperimentConfig(
        experiment=ExperimentKind.CDF_COMPARE,
        noise=noise,
        n_grid=(300, 600),
        replicates=40,
        seed=13,
        signal_rank=15,
        alpha_value=alpha.mean,
        rank_offsets=(0,),
    )
    result = run_cdf_comparison(cfg)

    for target, label in (("d_err", "strength d_hat"), ("a_err", "alignment sqrt(a1*a2)")):
        print(f"median relative error of {label}:")
        print(f"  {'n':>6} {'e':>9} {'t':>9} {'imp':>9}")
        for n in cfg.n_grid:
            meds = [
                np.nanmedian(result.values(f"{target}_{v}_off+0", n=n))
                for v in ("e", "t", "imp")
            ]
            print(f"  {n:>6} {meds[0]:9.4f} {meds[1]:9.4f} {meds[2]:9.4f}")
        print()
    print("The e-variant wins because it restores the bulk eigenvalues the")
    print("outliers displaced, with the square-root edge law, before any")
    print("transform is evaluated; errors also shrink as n grows.")


if __name__ == "__main__":
    main()
