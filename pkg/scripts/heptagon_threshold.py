#!/usr/bin/env python3
"""Recovery curves of the heptagon code for several radii and their crossings."""

import argparse
import time
from pathlib import Path

from holocode.simulate import SimulationConfig, find_threshold, plot_curves, simulate, write_curve_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--rng-seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default="results/heptagon")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    curves = []
    for r in args.radii:
        t0 = time.perf_counter()
        cfg = SimulationConfig(seed="steane", radius=r, trials=args.trials, rng_seed=args.rng_seed, workers=args.workers)
        curve = simulate(cfg)
        write_curve_csv(curve, out / f"steane_R{r}_optimal.csv")
        print(f"R={r} n={curve.n}: {time.perf_counter() - t0:.1f}s")
        curves.append(curve)
    report = find_threshold(curves)
    print(report.summary())
    plot_curves(curves, out / "heptagon_recovery.svg")


if __name__ == "__main__":
    main()
