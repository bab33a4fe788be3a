"""Relative error of the grid modulus solver against the closed form as the grid is refined.

    python3 scripts/oracle_convergence.py [--points 1000 10000 100000]
"""

import argparse
import time

from ringq.geometry import SphericalRing
from ringq.modulus import ring_modulus_exact, ring_modulus_grid

CASES = [(2, 4.0, 1.0, 16.0), (3, 5.0, 1.0, 2.0), (2, 2.5, 0.5, 200.0), (5, 9.0, 2.0, 7.0)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    args = ap.parse_args()
    print(f"{'n':>2} {'p':>5} {'r1':>5} {'r2':>7} {'points':>7} {'rel_error':>11} {'iters':>6} {'sec':>6}")
    for n, p, r1, r2 in CASES:
        ring = SphericalRing(r1, r2)
        exact = ring_modulus_exact(ring, p, n).value
        for m in args.points:
            t0 = time.perf_counter()
            res = ring_modulus_grid(ring, p, n, m)
            dt = time.perf_counter() - t0
            err = abs(res.value - exact) / exact
            print(f"{n:>2} {p:>5g} {r1:>5g} {r2:>7g} {m:>7} {err:>11.3e} {res.iterations:>6} {dt:>6.3f}")


if __name__ == "__main__":
    main()
