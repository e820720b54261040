#!/usr/bin/env python3
"""Tile and boundary counts of both tilings against the limiting rates."""

import argparse

from holocode.code_builder import asymptotic_rate
from holocode.tiling import predicted_counts


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-radius", type=int, default=7)
    args = ap.parse_args()
    for n_sides, name in ((5, "pentagon"), (7, "heptagon")):
        limit = asymptotic_rate(n_sides)
        print(f"{name}: limit {limit:.6f}")
        print("   R        n        k     k/n")
        for r in range(1, args.max_radius + 1):
            k, n = predicted_counts(n_sides, r)
            print(f"{r:4d} {n:8d} {k:8d}  {k / n:.4f}")


if __name__ == "__main__":
    main()
