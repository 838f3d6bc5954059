"""Write the ordinates of the first n nontrivial zeta zeros, one per line.

Zeros come from mpmath.zetazero (Gram-point isolation plus Riemann-Siegel
refinement). Output is resumable: existing lines are kept and counting
continues from the last index.

    python scripts/make_zero_table.py 10000 tests/data/zeros_10000.txt
"""
import argparse
import os
import sys

import mpmath


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int)
    ap.add_argument("out")
    ap.add_argument("--digits", type=int, default=9)
    args = ap.parse_args(argv)

    done = 0
    if os.path.exists(args.out):
        with open(args.out) as fh:
            done = sum(1 for line in fh if line.strip() and not line.startswith("#"))
    mode = "a" if done else "w"
    with open(args.out, mode) as fh:
        if not done:
            fh.write(f"# first {args.n} zeta zero ordinates, mpmath {mpmath.__version__} zetazero, "
                     f"{args.digits} decimals\n")
        for k in range(done + 1, args.n + 1):
            fh.write(fixed_point(mpmath.zetazero(k).imag, args.digits) + "\n")
            if k % 100 == 0:
                fh.flush()
                print(k, file=sys.stderr)


def fixed_point(g, digits):
    whole, frac = divmod(int(mpmath.nint(g * 10**digits)), 10**digits)
    return f"{whole}.{frac:0{digits}d}"


if __name__ == "__main__":
    main()
