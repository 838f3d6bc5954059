"""Ratio Pi_{c,a}(x) * c * log^2 x / x over a grid of x, for several c and a.

    python scripts/convergence_runs.py --c 1/2 0.86 --a 0 1 --max-exp 7 > convergence.csv
"""
import argparse
import csv
import sys

from psprimes import pscount


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", nargs="+", default=["1/2"])
    ap.add_argument("--a", nargs="+", type=int, default=[0, 1])
    ap.add_argument("--min-exp", type=int, default=3)
    ap.add_argument("--max-exp", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    xs = [10**k for k in range(args.min_exp, args.max_exp + 1)]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(pscount.CountRecord.HEADER)
    for c in args.c:
        for a in args.a:
            for rec in pscount.convergence_table(c, a, xs, workers=args.workers):
                out.writerow(rec.row())


if __name__ == "__main__":
    main()
