"""C(d) against Wang's constant over a diameter range, written as CSV.

    python scripts/crossover_curve.py -k -1 -K -4 -V 3.41228 --dmax 4 > curve.csv
"""
import argparse
import csv
import sys

import numpy as np

from eigenbound.bound import BoundInput, constant_C, crossover_diameter


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("-n", type=int, default=2)
    p.add_argument("-k", type=float, default=-1.0)
    p.add_argument("-K", type=float, default=-4.0)
    p.add_argument("-V", type=float, default=3.41228)
    p.add_argument("--dmax", type=float, default=4.0)
    p.add_argument("--points", type=int, default=81)
    args = p.parse_args()

    d_star = crossover_diameter(args.n, args.k, args.K, args.V, args.dmax)
    print(f"# crossover d* = {d_star}", file=sys.stderr)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["d", "C", "wang", "C_minus_wang"])
    for d in np.linspace(args.dmax / args.points, args.dmax, args.points):
        b = constant_C(BoundInput(args.n, args.k, args.K, args.V, float(d)))
        w.writerow([f"{d:.10g}", f"{b.C:.10g}", f"{b.wang:.10g}", f"{b.C - b.wang:.10g}"])


if __name__ == "__main__":
    main()
