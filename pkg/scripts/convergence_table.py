"""Write the x_d / omega_d convergence table for several frame ratios.

    python scripts/convergence_table.py --dmax 100000 --out results/convergence.csv
"""

import argparse
import csv
import math
from pathlib import Path

from frametol.cli import d_ladder
from frametol.tolerance import FrameRatio, mainprop_diagnostics, solve_x_d

FIELDS = ["rho", "d", "x_d", "omega_d", "ratio", "ratio_err_times_d", "mp1_rel", "mp2_rel", "mp3_rel"]


def rows(rhos, d_max):
    for rho in rhos:
        r = FrameRatio.from_rho(rho)
        lim1 = rho / 6 * math.log1p(rho) ** 2
        lim23 = math.pi * (1 + rho)
        for d in d_ladder(d_max):
            rep = solve_x_d(d, r)
            mp = mainprop_diagnostics(d, r)
            yield {
                "rho": rho,
                "d": d,
                "x_d": rep.x_d,
                "omega_d": rep.omega_d,
                "ratio": rep.ratio,
                # a roughly constant column means the approach is O(1/d)
                "ratio_err_times_d": (rep.ratio - 1) * d,
                "mp1_rel": mp.mp1 / lim1 - 1,
                "mp2_rel": mp.mp2 / lim23 - 1,
                "mp3_rel": mp.mp3 / lim23 - 1,
            }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rho", type=float, nargs="+", default=[0.1, 0.25, 0.5, 0.9, 1.0])
    ap.add_argument("--dmax", type=int, default=100_000)
    ap.add_argument("--out", type=Path, default=Path("results/convergence.csv"))
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, FIELDS, lineterminator="\n")
        w.writeheader()
        for row in rows(args.rho, args.dmax):
            w.writerow({k: format(v, ".17g") if isinstance(v, float) else v for k, v in row.items()})
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
