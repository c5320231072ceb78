#!/usr/bin/env python3
"""Plot-ready CSV of the OBB partition-sampling cost n(1+x)^n.

    python scripts/obb_cost_sweep.py --n 5,10,15 --points 51 > costs.csv
"""

import argparse

import numpy as np

from partmix.sampling import obb_cost_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=str, default="5,10,15")
    ap.add_argument("--points", type=int, default=51)
    args = ap.parse_args()

    ns = [int(v) for v in args.n.split(",")]
    print("n,x,cost")
    for n in ns:
        for x in np.linspace(0.0, 1.0, args.points):
            print(f"{n},{x:.6f},{obb_cost_curve(n, float(x)):.17g}")


if __name__ == "__main__":
    main()
