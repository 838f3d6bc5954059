"""Command-line front end: one subcommand per experiment, CSV or JSON out.

Exit codes: 0 success, 1 computation error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Optional, Sequence

from . import analytic, density, exactpow, primal, pscount, zeta


@dataclass(frozen=True)
class RunConfig:
    zeros_path: Optional[str] = None
    max_precision_bits: int = exactpow.MAX_PRECISION_BITS
    workers: int = 1
    output_format: str = "csv"
    cache_dir: Optional[str] = None

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.max_precision_bits < 64:
            raise ValueError("max_precision_bits must be >= 64")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


class UsageError(Exception):
    pass


def load_config(path: str) -> dict:
    """Parse a ``key = value`` file whose keys are RunConfig fields."""
    known = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            s = line.split("#", 1)[0].strip()
            if not s:
                continue
            key, sep, value = (part.strip() for part in s.partition("="))
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            if key not in known:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            if key in ("workers", "max_precision_bits"):
                try:
                    out[key] = int(value)
                except ValueError:
                    raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
            else:
                out[key] = value
    return out


# --- argument types ---------------------------------------------------------

def _exponent(text: str) -> exactpow.Exponent:
    try:
        return exactpow.Exponent.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like lo..hi, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(t)) if "e" in t.lower() else int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="key = value file with RunConfig fields")
    g.add_argument("--format", dest="output_format", choices=("csv", "json"))
    g.add_argument("--workers", type=int)
    g.add_argument("--max-precision-bits", type=int)
    g.add_argument("--cache-dir")
    g.add_argument("--zeros", dest="zeros_path", help="zero ordinates, one per line")

    p = _Parser(prog="psprimes", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    s = add("count-shifted", "Pi_{c,a}(x): primes p <= x with floor(p^c) - a prime.")
    s.add_argument("--c", type=_exponent, required=True)
    s.add_argument("--a", type=int, default=0)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--method", choices=("auto", "q-major", "p-major"), default="auto")

    s = add("upsilon", "Upsilon_c(N): representations N = floor(p^c) + q with p, q prime.")
    s.add_argument("--c", type=_exponent, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--mode", choices=pscount.MODES, default="distinct-m")

    s = add("represent", "A witness N = floor(p^c) + q (smallest m), or none.")
    s.add_argument("--c", type=_exponent, required=True)
    s.add_argument("--N", type=int, required=True)

    s = add("scan-exceptions", "All N in a range with no representation N = floor(p^c) + q.")
    s.add_argument("--c", type=_exponent, required=True)
    s.add_argument("--range", type=_range, required=True)

    s = add("convergence", "Pi_{c,a}(x) against x/(c log^2 x) for increasing x.")
    s.add_argument("--c", type=_exponent, required=True)
    s.add_argument("--a", type=int, default=0)
    s.add_argument("--x", type=_int_list, required=True, help="comma-separated, increasing")

    s = add("explicit-formula", "Truncated explicit formula for psi_0(x) over zeta zeros up to height T.")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--T", type=float, help="truncation height (default: largest stored ordinate)")

    s = add("zero-count", "N(sigma, T) over a zero table, with the zero-density bound T^(30(1-sigma)/13).")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--T", type=float, required=True)

    s = add("vaaler-check", "Vaaler trigonometric approximation of the sawtooth Psi(t) on a grid.")
    s.add_argument("--H", type=int, required=True)
    s.add_argument("--points", type=int, default=10_000)

    s = add("selberg-check", "Selberg sieve weights lambda_d at level D and their invariants.")
    s.add_argument("--D", type=int, required=True)

    s = add("expsum-check", "Phase sum of e(m^c d^c h/t) against the second-derivative van der Corput bound.")
    s.add_argument("--c", type=_exponent, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--t", type=int, default=3)
    s.add_argument("--h", type=int, default=1)
    s.add_argument("--m-lo", type=int, required=True)

    s = add("integrate-density", "Integral of F_N(c) over [A, B] against B - A.")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--A", type=_exponent, required=True)
    s.add_argument("--B", type=_exponent, required=True)
    s.add_argument("--method", choices=("exact", "riemann"), default="exact")

    s = add("integrate-shift-density", "Integral of F_{x,a}(c) over [A, B] against B - A.")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--a", type=int, default=0)
    s.add_argument("--A", type=_exponent, required=True)
    s.add_argument("--B", type=_exponent, required=True)
    s.add_argument("--method", choices=("exact", "riemann"), default="exact")
    return p


# --- output -------------------------------------------------------------------

# columns that hold exponents as written; never turned into JSON numbers
_TEXT_COLUMNS = {"c", "A", "B", "m", "p", "q"}


def _json_cell(col: str, v):
    if isinstance(v, str) and col not in _TEXT_COLUMNS:
        try:
            return json.loads(v)
        except ValueError:
            return float(v) if v in ("nan", "inf", "-inf") else v
    return v


def render(header: Sequence[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        objs = [{k: _json_cell(k, v) for k, v in zip(header, r)} for r in rows]
        return json.dumps(objs, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _zeros(cfg: RunConfig) -> zeta.ZeroTable:
    if cfg.zeros_path is None:
        return zeta.fixture_zeros()
    if not os.path.isfile(cfg.zeros_path):
        raise UsageError(f"zeros file not found: {cfg.zeros_path}")
    return zeta.load_zeros(cfg.zeros_path)


def _dispatch(args, cfg: RunConfig):
    cmd = args.command
    w = cfg.workers
    if cmd == "count-shifted":
        rec = pscount.count_shifted(args.c, args.a, args.x, args.method, w)
        return rec.HEADER, [rec.row()]
    if cmd == "upsilon":
        rec = pscount.upsilon(args.c, args.N, args.mode, w)
        return rec.HEADER, [rec.row()]
    if cmd == "represent":
        wit = pscount.find_representation(args.c, args.N)
        header = pscount.RepresentationWitness.HEADER
        return header, [wit.row() if wit else [args.N, "none", "", ""]]
    if cmd == "scan-exceptions":
        lo, hi = args.range
        bad = pscount.scan_exceptions(args.c, lo, hi, workers=w)
        return ("N",), [[n] for n in bad]
    if cmd == "convergence":
        recs = pscount.convergence_table(args.c, args.a, args.x, w)
        return pscount.CountRecord.HEADER, [r.row() for r in recs]
    if cmd == "explicit-formula":
        zeros = _zeros(cfg)
        T = args.T if args.T is not None else zeros.max_gamma
        res = zeta.psi_explicit(args.x, T, zeros)
        return res.HEADER, [res.row()]
    if cmd == "zero-count":
        zeros = _zeros(cfg)
        n = zeta.count_zeros(args.sigma, args.T, zeros)
        return ("sigma", "T", "count", "density_bound"), [
            [repr(args.sigma), repr(args.T), n, repr(zeta.gm_bound(args.sigma, args.T))]]
    if cmd == "vaaler-check":
        r = analytic.vaaler_grid_check(args.H, args.points)
        return tuple(r), [[_cell(v) for v in r.values()]]
    if cmd == "selberg-check":
        r = analytic.selberg_check(args.D)
        return tuple(r), [[_cell(v) for v in r.values()]]
    if cmd == "expsum-check":
        s = analytic.proposition_phase_sum(args.N, args.c, args.d, args.t, args.h, args.m_lo)
        a, b = analytic.phase_range(args.N, args.c, args.d, args.m_lo)
        if b <= a:
            raise UsageError("empty summation range for these parameters")
        lam = analytic.phase_second_derivative_min(args.N, args.c, args.d, args.t, args.h, args.m_lo)
        bound = analytic.vdc_bound(2, a, b, lam)
        return (("c", "d", "t", "h", "a", "b", "abs_sum", "vdc_bound", "ratio"),
                [[str(args.c), args.d, args.t, args.h, a, b, repr(abs(s)), repr(bound), repr(abs(s) / bound)]])
    if cmd == "integrate-density":
        if args.method == "exact":
            rep = density.integrate_f(args.N, args.A, args.B)
        else:
            val = density.riemann_integral_f(args.N, args.A, args.B)
            rep = density.make_report(args.N, args.A, args.B, val, 0)
        return rep.HEADER, [rep.row()]
    if cmd == "integrate-shift-density":
        if args.method == "exact":
            rep = density.integrate_f_shift(args.x, args.a, args.A, args.B)
        else:
            val = density.riemann_integral_f_shift(args.x, args.a, args.A, args.B)
            rep = density.make_report(args.x, args.A, args.B, val, 0)
        return rep.HEADER, [rep.row()]
    raise UsageError(f"unknown command {cmd}")


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return str(v).lower()
    return v


def _config(args) -> RunConfig:
    base = load_config(args.config) if args.config else {}
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            base[f.name] = v
    try:
        return RunConfig(**base)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        exactpow.set_max_precision_bits(cfg.max_precision_bits)
        primal.set_cache_dir(cfg.cache_dir)
        header, rows = _dispatch(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ArithmeticError, zeta.ZeroTableError, primal.RangeTooLargeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    except ValueError as exc:  # inputs outside an operation's domain
        print(f"usage error: {exc}", file=stderr)
        return 2
    stdout.write(render(header, rows, cfg.output_format))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
