"""Evaluate f on the two unit-circle arcs for a few phases and print the spread."""

import argparse
import math

import numpy as np

from branchaudit.functions import eval_f


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--phases", type=float, nargs="+", default=[-math.pi / 4, -3 * math.pi / 4, -0.3, -3.0])
    args = ap.parse_args()

    lower = np.linspace(0.01, math.pi / 2 - 0.01, args.samples)
    upper = np.linspace(math.pi / 2 + 0.01, math.pi - 0.01, args.samples)
    print(f"{'c':>10} {'max|f| lower':>14} {'max|f+2pi i| upper':>20}")
    for c in args.phases:
        lo = np.abs(eval_f(np.exp(1j * lower), c)).max()
        hi = np.abs(eval_f(np.exp(1j * upper), c) + 2j * math.pi).max()
        print(f"{c:10.4f} {lo:14.3e} {hi:20.3e}")


if __name__ == "__main__":
    main()
