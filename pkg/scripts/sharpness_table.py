"""Residual of the ring Q inequality for the extremal maps over a family of rings.

Both extremal maps should sit on the equality case up to rounding.

    python3 scripts/sharpness_table.py
"""

import math

import numpy as np

from ringq.bounds import PowerLawMajorant
from ringq.geometry import SphericalRing
from ringq.maps import make_f1, make_f2, verify_ring_q
from ringq.qfield import PowerLawQ

SETUPS = [("f1", 2, 4.0, 2.0, 1.0), ("f1", 3, 5.0, 1.5, 0.5), ("f1", 4, 7.0, 0.2, 2.5),
          ("f2", 2, 4.0, 1.0, 2.0), ("f2", 3, 4.5, 3.0, 1.5)]


def main():
    radii = np.geomspace(1.0, 1e4, 9)
    print(f"{'map':<3} {'n':>2} {'p':>4} {'K':>4} {'alpha':>5} {'rings':>5} {'max_residual':>13}")
    for kind, n, p, K, alpha in SETUPS:
        maj = PowerLawMajorant(K, alpha)
        prof = (make_f1 if kind == "f1" else make_f2)(maj, p, n)
        lo = math.e if kind == "f2" else 1.0
        rings = [SphericalRing(max(a, lo), b) for a in radii for b in radii if b > max(a, lo)]
        reports = verify_ring_q(prof, PowerLawQ(K, alpha), rings, p, n)
        assert all(r.verdict for r in reports)
        print(f"{kind:<3} {n:>2} {p:>4g} {K:>4g} {alpha:>5g} {len(rings):>5} "
              f"{max(r.residual for r in reports):>13.3e}")


if __name__ == "__main__":
    main()
