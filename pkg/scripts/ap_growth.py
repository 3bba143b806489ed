"""How the projector and recovery constants grow as p leaves 2.

The band projector is bounded on L^p only for 1 < p < inf, with a norm that
blows up at both ends; the recovery constant ||sinc_1||_q ||sinc_{1/8}||_p
tracks the same blow-up and stays under (4/pi)(p + 1/(p-1)).  This script
sweeps p, estimates both, and prints how much of the ceiling each one uses.

    python3 scripts/ap_growth.py --band 1 --seed 42
"""
import argparse

from pwlab.grid import SampledFunction
from pwlab.pwspace import (boyd_lower_bound, default_grid, project_band,
                           riesz_constant_estimate)
from pwlab.split import sinc_norm_constant

P_SWEEP = [1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 8.0, 16.0]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--band", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    grid = default_grid(args.band)

    def apply(v):
        return project_band(SampledFunction(grid, v), args.band).values

    print(f"{'p':>6} {'A_p est':>10} {'P_a est':>10} "
          f"{'product':>10} {'ceiling':>10} {'used':>6}")
    for p in P_SWEEP:
        ap_est = riesz_constant_estimate(p)
        proj = boyd_lower_bound(apply, apply, grid.count, p,
                                weight=grid.step, seed=args.seed)
        d = sinc_norm_constant(p)
        print(f"{p:6.2f} {ap_est:10.4f} {proj:10.4f} "
              f"{d['product']:10.4f} {d['bound']:10.4f} "
              f"{d['product'] / d['bound']:6.1%}")


if __name__ == "__main__":
    main()
