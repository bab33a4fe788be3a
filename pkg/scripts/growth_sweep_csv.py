"""Write growth sweeps for both regimes as CSV files.

    python3 scripts/growth_sweep_csv.py --outdir sweeps
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from ringq.bounds import PowerLawMajorant, liminf_estimate
from ringq.cli import CSV_HEADER, fmt
from ringq.maps import growth_sweep, make_f1, make_f2


def write(path, sweep):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in sweep.rows:
            w.writerow([fmt(v) for v in (*row, sweep.constant)])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="sweeps")
    ap.add_argument("--steps", type=int, default=61)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    runs = {
        "power_n2_p4_K2_a1": (make_f1, PowerLawMajorant(2.0, 1.0), np.geomspace(10, 1e6, args.steps)),
        "log_n2_p4_K1_a2": (make_f2, PowerLawMajorant(1.0, 2.0), np.geomspace(1e2, 1e8, args.steps)),
        "log_n2_p4_K1_a2_r0_2": (make_f2, PowerLawMajorant(1.0, 2.0, 2.0),
                                 np.geomspace(1e2, 1e8, args.steps)),
    }
    for name, (factory, maj, grid) in runs.items():
        sweep = growth_sweep(factory(maj, 4.0, 2), maj, 4.0, 2, grid)
        write(out / f"{name}.csv", sweep)
        print(f"{name}: normalizer {sweep.asymptotics.description}, constant {sweep.constant:.12g}, "
              f"liminf estimate {liminf_estimate(sweep):.12g}")


if __name__ == "__main__":
    main()
