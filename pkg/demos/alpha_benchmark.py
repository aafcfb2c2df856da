"""Monte-Carlo detection thresholds for the built-in noise ensembles.

A spike is detectable only when its strength exceeds a threshold alpha that
depends on the noise covariance and the aspect ratio.  The threshold is
estimated from pure-noise draws: the top eigenvalue and the trimmed
Stieltjes sums of the rest determine where the detectability transform
crosses over.  For white noise the answer is known exactly
(alpha = beta^(1/4)), which anchors the table below.

Run:  python3 demos/alpha_benchmark.py  (about a minute)
"""

from eoptshrink import NoiseModel, estimate_alpha, estimate_alpha_batch


def main() -> None:
    n_prime, reps, seed = 1500, 8, 17

    white = estimate_alpha(NoiseModel(kind="type1"), 1.0, n_prime, reps, seed)
    print(f"white noise, beta = 1: alpha = {white.mean:.4f} +- {white.std:.4f} (exact: 1)")
    white_half = estimate_alpha(NoiseModel(kind="type1"), 0.5, n_prime, reps, seed)
    print(
        f"white noise, beta = 1/2: alpha = {white_half.mean:.4f} +- {white_half.std:.4f}"
        f" (exact: 0.5^0.25 = {0.5 ** 0.25:.4f})"
    )
    print()

    entries = [
        (NoiseModel(kind="type2"), 1.0),
        (NoiseModel(kind="type2"), 0.5),
        (NoiseModel(kind="type3"), 1.0),
        (NoiseModel(kind="type3"), 0.5),
        (NoiseModel(kind="mix2"), 1.0),
    ]
    print(f"colored ensembles at n' = {n_prime}, {reps} replicates (shared draws):")
    estimates = estimate_alpha_batch(entries, n_prime, reps, seed)
    for (model, beta), est in zip(entries, estimates):
        print(
            f"  {model.kind.value:>6}  beta {beta:>4}:  alpha = {est.mean:.4f} +- {est.std:.4f}"
        )
    print()
    print("Colored covariance raises the threshold well above the white-noise")
    print("value: weak components that would be detectable under white noise")
    print("are swallowed by a colored bulk.  Estimates tighten as n' grows.")


if __name__ == "__main__":
    main()
