"""abs_dev of the c-averaged density integrals as N (or x) grows.

F_N integrals get expensive fast (N = 1000 already means ~1e8 pieces),
so the default N list stops there; F_{x,a} is cheap up to 1e5 or so.

    python scripts/density_trends.py --A 0.4 --B 0.86
"""
import argparse
import csv
import sys

from psprimes import density
from psprimes.primal import RangeTooLargeError


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--A", default="0.4")
    ap.add_argument("--B", default="0.86")
    ap.add_argument("--N", nargs="+", type=int, default=[30, 100, 300, 1000])
    ap.add_argument("--x", nargs="+", type=int, default=[10**3, 10**4, 10**5])
    ap.add_argument("--a", type=int, default=1)
    args = ap.parse_args(argv)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(("family",) + density.DensityReport.HEADER)
    for N in args.N:
        try:
            out.writerow(["F_N"] + density.integrate_f(N, args.A, args.B).row())
        except RangeTooLargeError as exc:
            print(f"# F_N at N={N} skipped: {exc}", file=sys.stderr)
    for x in args.x:
        out.writerow([f"F_x{args.a}"] + density.integrate_f_shift(x, args.a, args.A, args.B).row())


if __name__ == "__main__":
    main()
