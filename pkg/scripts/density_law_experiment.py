"""Fit the empirical density law h_X ~ h1 * N^(-a) for uniform samples.

Draws uniform point sets of exponentially spaced sizes in a box, measures
the fill distance of each, and fits a log-log line per seed.  Reports the
per-seed fits and the medians across seeds.

Usage:
    python3 scripts/density_law_experiment.py --seeds 5 --max-size 5000
"""

import argparse

import numpy as np

from bfsmooth.study import Region, density_law, exponential_sizes


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=-1.5, help="box lower corner")
    ap.add_argument("--b", type=float, default=1.5, help="box upper corner")
    ap.add_argument("--d", type=int, default=1, help="dimension")
    ap.add_argument("--n-sizes", type=int, default=20)
    ap.add_argument("--max-size", type=int, default=5000)
    ap.add_argument("--multiplier", type=float, default=1.3)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--csv", help="write per-size rows of the first seed here")
    args = ap.parse_args()

    region = Region(a=args.a, b=args.b)
    sizes = exponential_sizes(args.n_sizes, args.max_size, args.multiplier)
    print(f"sizes: {sizes}")

    fits = []
    for seed in range(args.seeds):
        fit = density_law(region, sizes, seed=seed)
        fits.append(fit)
        print(
            f"seed {seed}: h = {fit.h1:.3f} * N^(-{fit.a_exp:.3f})"
            f"   (r^2 = {fit.r2:.4f})"
        )

    h1_med = float(np.median([f.h1 for f in fits]))
    a_med = float(np.median([f.a_exp for f in fits]))
    print(f"median over {args.seeds} seeds: h = {h1_med:.3f} * N^(-{a_med:.3f})")

    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("N,h\n")
            for N, h in fits[0].rows:
                fh.write(f"{N},{h:.10g}\n")
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
