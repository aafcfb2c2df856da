"""Tour of the command-line interface, run in-process.

Exercises the three subcommands end to end in a temporary directory:
denoise (matrix CSV in, matrix CSV + JSON report out), simulate (experiment
config JSON in, result CSV + metadata out), and alpha (threshold estimate as
JSON on stdout).  The same commands work verbatim from a shell with the
installed ``eoptshrink`` entry point.

Run:  python3 demos/cli_tour.py
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from eoptshrink import write_matrix_csv
from eoptshrink.cli import main


def run(argv: list[str]) -> None:
    print(f"$ eoptshrink {' '.join(argv)}")
    code = main(argv)
    print(f"(exit code {code})")
    print()


def demo() -> None:
    tmp = Path(tempfile.mkdtemp(prefix="eoptshrink_cli_"))

    # A spiked matrix to denoise.
    rng = np.random.default_rng(19)
    p, n = 200, 300
    u = rng.standard_normal(p)
    u /= np.linalg.norm(u)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    mat = 6.0 * np.outer(u, v) + rng.standard_normal((p, n)) / np.sqrt(n)
    input_csv = tmp / "input.csv"
    write_matrix_csv(mat, input_csv)

    out_csv = tmp / "denoised.csv"
    report_json = tmp / "report.json"
    run(
        ["denoise", "--input", str(input_csv), "--loss", "frobenius",
         "--output", str(out_csv), "--report", str(report_json), "--seed", "19"]
    )
    report = json.loads(report_json.read_text())
    print("report.json:")
    print(json.dumps(report, indent=2)[:400])
    print("  ...")
    print()

    cfg = {
        "noise": {"kind": "type2"},
        "n_grid": [300],
        "replicates": 5,
        "seed": 19,
        "signal_rank": 8,
        "alpha_value": 1.65,
    }
    cfg_json = tmp / "rank.json"
    cfg_json.write_text(json.dumps(cfg))
    run(["simulate", "rank", "--config", str(cfg_json)])
    print("result CSV head:")
    for line in (tmp / "rank.result.csv").read_text().splitlines()[:5]:
        print(f"  {line}")
    print()

    run(["alpha", "--noise", "type2", "--pn-ratio", "1.0",
         "--nprime", "1000", "--reps", "3", "--seed", "19"])

    print(f"artifacts left in {tmp}")


if __name__ == "__main__":
    demo()
