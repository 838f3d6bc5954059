"""Densities in the exponent c and their exact integrals over [A, B].

For a prime p and an integer r >= 1 the set of c with floor(p**c) == r is the
half-open interval [log r / log p, log(r+1) / log p).  Integrating a density
over c therefore splits into a sum over (p, r) pairs of integrals over these
pieces.  Which pieces meet [A, B], and which end gets clipped, is decided by
integer comparisons, so the only rounding is in the per-piece integrals.

Integrands (L = log N):
    F_N:      log(N)^2 * exp(-L/c) / c   ->  closed form via E1(L/c)
    F_{x,a}:  log(x)^2 / x * c           ->  (hi^2 - lo^2) / 2
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

import mpmath
import numpy as np
from scipy.special import exp1

from . import primal
from .exactpow import (
    Exponent,
    as_exponent,
    ceil_root,
    floor_pow,
    floor_pow_many,
)
from .pscount import count_shifted, is_prime_many, upsilon

# work guards; above them integrate_f refuses rather than run for days
MAX_DENSITY_PRIME = 10**9
MAX_DENSITY_PAIRS = 5 * 10**8

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


# --- exact endpoints ----------------------------------------------------------

@dataclass(frozen=True)
class LogRatio:
    """The real number log(num) / log(den), den >= 2."""

    num: int
    den: int

    def __float__(self) -> float:
        return math.log(self.num) / math.log(self.den)

    def cmp(self, other) -> int:
        if isinstance(other, LogRatio):
            return _cmp_log_ratios(self, other)
        q = other if isinstance(other, Fraction) else as_exponent(other).value
        return _cmp_log_vs_rational(self.num, self.den, q)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __gt__(self, other):
        return self.cmp(other) > 0


Endpoint = Union[LogRatio, Fraction]


def _cmp_endpoints(x: Endpoint, y: Endpoint) -> int:
    if isinstance(x, LogRatio):
        return x.cmp(y)
    if isinstance(y, LogRatio):
        return -y.cmp(x)
    return (x > y) - (x < y)


def _cmp_log_vs_rational(num: int, den: int, q: Fraction, max_dps: int = 400) -> int:
    # log(num)/log(den) vs u/v  <=>  num^v vs den^u
    u, v = q.numerator, q.denominator
    if v * num.bit_length() + u * den.bit_length() <= 1 << 15:
        lhs, rhs = num**v, den**u
        return (lhs > rhs) - (lhs < rhs)
    dps = 30
    while dps <= max_dps:
        with mpmath.workdps(dps):
            diff = v * mpmath.log(num) - u * mpmath.log(den)
            if abs(diff) > mpmath.mpf(10) ** (-dps + 5) * (u + v):
                return 1 if diff > 0 else -1
        dps *= 2
    raise ArithmeticError(f"cannot separate log({num})/log({den}) from {q}")


def _cmp_log_ratios(x: LogRatio, y: LogRatio, max_dps: int = 400) -> int:
    # log a/log b vs log c/log d  <=>  log a log d vs log c log b
    if x == y:
        return 0
    dps = 30
    while dps <= max_dps:
        with mpmath.workdps(dps):
            diff = (mpmath.log(x.num) * mpmath.log(y.den)
                    - mpmath.log(y.num) * mpmath.log(x.den))
            if abs(diff) > mpmath.mpf(10) ** (-dps + 5):
                return 1 if diff > 0 else -1
        dps *= 2
    # multiplicatively dependent pairs: a^k = c^j with b^k = d^j give equality
    return 0


@dataclass(frozen=True)
class ActiveInterval:
    """c in [c_lo, c_hi) with floor(p**c) == r; endpoints exact."""

    c_lo: Endpoint
    c_hi: Endpoint
    p: int
    r: int

    def certify(self) -> bool:
        if _cmp_endpoints(self.c_lo, self.c_hi) >= 0:
            return False
        mid = _rational_between(self.c_lo, self.c_hi)
        checks = [floor_pow(self.p, Exponent(mid)).floor_value == self.r]
        for end in (self.c_lo, self.c_hi):
            if isinstance(end, Fraction):
                checks.append(floor_pow(self.p, Exponent(end)).floor_value == self.r)
        if isinstance(self.c_lo, LogRatio):
            checks.append(self.c_lo == LogRatio(self.r, self.p))
        if isinstance(self.c_hi, LogRatio):
            checks.append(self.c_hi == LogRatio(self.r + 1, self.p))
        return all(checks)


def _rational_between(lo: Endpoint, hi: Endpoint) -> Fraction:
    """A small-denominator rational strictly inside (lo, hi)."""
    mid = Fraction((float(lo) + float(hi)) / 2)
    bound = 16
    while True:
        q = mid.limit_denominator(bound)
        if _cmp_endpoints(lo, q) < 0 < _cmp_endpoints(hi, q):
            return q
        if bound > 1 << 60:
            raise ArithmeticError("interval too narrow to place a rational")
        bound *= 16


# --- report -------------------------------------------------------------------

@dataclass(frozen=True)
class DensityReport:
    N_or_x: int
    A: str
    B: str
    integral: float
    target: float
    abs_dev: float
    interval_count: int

    HEADER = ("N_or_x", "A", "B", "integral", "target", "abs_dev", "interval_count")

    def row(self) -> list:
        return [self.N_or_x, self.A, self.B, repr(self.integral), repr(self.target),
                repr(self.abs_dev), self.interval_count]


def _bounds(A, B) -> tuple[Exponent, Exponent]:
    A, B = as_exponent(A), as_exponent(B)
    if not 0 < A.value < B.value:
        raise ValueError("need 0 < A < B")
    if A.is_integer or B.is_integer:
        raise ValueError("A and B must not be integers")
    return A, B


def make_report(n: int, A: Exponent, B: Exponent, integral: float, count: int) -> DensityReport:
    target = float(B.value - A.value)
    return DensityReport(n, str(A), str(B), integral, target, abs(integral - target), count)


# --- F_N ------------------------------------------------------------------------

def density_normaliser(c, N: int) -> mpmath.mpf:
    """c N^(1/c) / log(N)^2, in mpmath so tiny c cannot overflow."""
    c = as_exponent(c)
    with mpmath.workdps(30):
        cc = mpmath.mpf(c.num) / c.den
        return cc * mpmath.power(N, 1 / cc) / mpmath.log(N) ** 2


def f_density(c, N: int, workers: int = 1) -> float:
    """F_N(c) = Upsilon_c(N) / (c N^(1/c) / log^2 N), pair-counting Upsilon."""
    if N < 3:
        if N == 2:
            return 0.0
        raise ValueError("need N >= 2")
    rec = upsilon(c, N, "count-p", workers)
    return float(rec.count / density_normaliser(c, N))


def _upsilon_r_values(N: int) -> np.ndarray:
    """r = N - q over primes q < N, ascending."""
    return np.sort(N - primal.primes_upto(N - 1))


def _pair_plan(N: int, A: Exponent, B: Exponent):
    """Per r: the prime-index slice [i0, i1) and the clip thresholds."""
    rs = _upsilon_r_values(N)
    if rs.size == 0:
        return rs, None, []
    p_limit = ceil_root(int(rs.max()) + 1, A) - 1
    if p_limit > MAX_DENSITY_PRIME:
        raise primal.RangeTooLargeError(
            f"integrating F_N for N = {N} on [{A}, {B}] needs every prime up to {p_limit}; "
            f"limit is {MAX_DENSITY_PRIME}")
    ps = primal.primes_upto(max(p_limit, 2))
    plan = []
    for r in rs.tolist():
        # p^B > r: smallest such n; p^B == r is impossible for prime p and non-integer B
        p_min = ceil_root(r, B)
        if floor_pow(p_min, B).floor_value == r and floor_pow(p_min, B).exactness == "exact-power":
            p_min += 1
        p_max = ceil_root(r + 1, A)  # exclusive: p^A < r + 1
        lo_clip = floor_pow(r, A.reciprocal()).floor_value  # p <= this: log r/log p >= A
        hi_keep = ceil_root(r + 1, B)  # p >= this: log(r+1)/log p <= B
        i0 = int(np.searchsorted(ps, max(p_min, 2), "left"))
        i1 = int(np.searchsorted(ps, p_max, "left"))
        if i1 > i0:
            plan.append((r, i0, i1, lo_clip, hi_keep))
    return rs, ps, plan


def _endpoints(ps_slice: np.ndarray, r: int, A: Exponent, B: Exponent, lo_clip: int, hi_keep: int):
    logp = np.log(ps_slice.astype(np.float64))
    lo = np.where(ps_slice <= lo_clip, math.log(r) / logp, float(A))
    hi = np.where(ps_slice >= hi_keep, math.log(r + 1) / logp, float(B))
    return lo, hi


def breakpoints_upsilon(N: int, A, B, max_intervals: int = 10**6) -> list[ActiveInterval]:
    """Every (p, r = N - q) piece of the c-axis inside [A, B], exact endpoints."""
    A, B = _bounds(A, B)
    _, ps, plan = _pair_plan(N, A, B)
    total = sum(i1 - i0 for _, i0, i1, _, _ in plan)
    if total > max_intervals:
        raise primal.RangeTooLargeError(f"{total} intervals exceed max_intervals={max_intervals}")
    out = []
    for r, i0, i1, lo_clip, hi_keep in plan:
        for p in ps[i0:i1].tolist():
            lo = LogRatio(r, p) if p <= lo_clip else A.value
            hi = LogRatio(r + 1, p) if p >= hi_keep else B.value
            out.append(ActiveInterval(lo, hi, p, r))
    return out


def count_active_pairs(N: int, A, B) -> int:
    A, B = _bounds(A, B)
    _, _, plan = _pair_plan(N, A, B)
    return sum(i1 - i0 for _, i0, i1, _, _ in plan)


def kernel_integral(lo: np.ndarray, hi: np.ndarray, L: float) -> np.ndarray:
    """int_lo^hi exp(-L/c)/c dc, elementwise.

    Narrow pieces use 8-point Gauss-Legendre (no cancellation), wide ones the
    exact antiderivative E1(L/c).
    """
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    out = np.zeros_like(lo)
    narrow = (hi - lo) * L / (lo * lo) < 0.5
    if narrow.any():
        a, b = lo[narrow], hi[narrow]
        half = (b - a) / 2
        mid = (b + a) / 2
        c = mid[:, None] + half[:, None] * _GL_X[None, :]
        out[narrow] = half * ((np.exp(-L / c) / c) @ _GL_W)
    wide = ~narrow
    if wide.any():
        out[wide] = exp1(L / hi[wide]) - exp1(L / lo[wide])
    return out


def integrate_f(N: int, A, B, max_pairs: int = MAX_DENSITY_PAIRS) -> DensityReport:
    """Exact int_A^B F_N(c) dc via the (p, q) breakpoint decomposition."""
    A, B = _bounds(A, B)
    if N < 3:
        return make_report(N, A, B, 0.0, 0)
    _, ps, plan = _pair_plan(N, A, B)
    total = sum(i1 - i0 for _, i0, i1, _, _ in plan)
    if total > max_pairs:
        raise primal.RangeTooLargeError(f"{total} active pairs exceed max_pairs={max_pairs}")
    L = math.log(N)
    parts = []
    chunk = 1 << 18
    for r, i0, i1, lo_clip, hi_keep in plan:
        for j in range(i0, i1, chunk):
            lo, hi = _endpoints(ps[j : min(j + chunk, i1)], r, A, B, lo_clip, hi_keep)
            parts.append(math.fsum(kernel_integral(lo, hi, L).tolist()))
    integral = L * L * math.fsum(parts)
    return make_report(N, A, B, integral, total)


class _CountPSampler:
    """Upsilon_c(N) in count-p form for many c sharing one prime table."""

    def __init__(self, N: int, c_min: Exponent):
        self.N = N
        self.ps = primal.primes_upto(max(ceil_root(N - 1, c_min), 2))
        self.qflags = primal.prime_flags(max(N, 2))

    def upsilon(self, c: Exponent) -> int:
        ps = self.ps[self.ps < ceil_root(self.N - 1, c)]
        m = floor_pow_many(ps, c)
        q = self.N - m
        ok = (q >= 2) & (q < self.N)
        return int(np.count_nonzero(self.qflags[q[ok]]))


def _midpoints(A: Exponent, B: Exponent, samples: int) -> list[Exponent]:
    h = (B.value - A.value) / samples
    return [Exponent(A.value + (k + Fraction(1, 2)) * h) for k in range(samples)]


def riemann_integral_f(N: int, A, B, samples: int = 1000) -> float:
    """Midpoint rule for int_A^B F_N(c) dc with F_N evaluated exactly at each node."""
    A, B = _bounds(A, B)
    if N < 3:
        return 0.0
    if ceil_root(N - 1, A) > MAX_DENSITY_PRIME:
        raise primal.RangeTooLargeError(f"F_N({N}) at c = {A} needs primes beyond {MAX_DENSITY_PRIME}")
    s = _CountPSampler(N, A)
    vals = [s.upsilon(c) / float(density_normaliser(c, N)) for c in _midpoints(A, B, samples)]
    return math.fsum(vals) * float(B.value - A.value) / samples


# --- F_{x,a} ----------------------------------------------------------------------

def f_shift_density(c, a: int, x: int) -> float:
    """F_{x,a}(c) = Pi_{c,a}(x) c log^2 x / x."""
    if x < 2:
        return 0.0
    rec = count_shifted(c, a, x)
    return rec.count * float(as_exponent(c)) * math.log(x) ** 2 / x


def _shift_pairs(x: int, a: int, A: Exponent, B: Exponent) -> Iterator:
    """Per prime p <= x: r-values q + a in [floor(p^A), floor(p^B)] and clip flags."""
    ps = primal.primes_upto(x)
    if ps.size == 0:
        return
    fa = floor_pow_many(ps, A)
    fb = floor_pow_many(ps, B)
    rmax = int(fb.max())
    qs = primal.primes_upto(max(rmax - a, 1))
    rs = qs + a
    for p, lo_r, hi_r in zip(ps.tolist(), fa.tolist(), fb.tolist()):
        i0 = int(np.searchsorted(rs, lo_r, "left"))
        i1 = int(np.searchsorted(rs, hi_r, "right"))
        if i1 > i0:
            yield p, rs[i0:i1], lo_r, hi_r


def integrate_f_shift(x: int, a: int, A, B) -> DensityReport:
    """Exact int_A^B F_{x,a}(c) dc via the breakpoint decomposition."""
    A, B = _bounds(A, B)
    if a < 0:
        raise ValueError("a must be >= 0")
    if x < 2:
        return make_report(x, A, B, 0.0, 0)
    parts = []
    count = 0
    for p, r, fa, fb in _shift_pairs(x, a, A, B):
        logp = math.log(p)
        # r >= p^A  <=> r > floor(p^A) (p^A is never an integer here); r + 1 <= p^B <=> r < floor(p^B)
        lo = np.where(r > fa, np.log(r.astype(np.float64)) / logp, float(A))
        hi = np.where(r < fb, np.log((r + 1).astype(np.float64)) / logp, float(B))
        parts.append(math.fsum(((hi * hi - lo * lo) / 2).tolist()))
        count += r.size
    integral = math.log(x) ** 2 / x * math.fsum(parts)
    return make_report(x, A, B, integral, count)


def riemann_integral_f_shift(x: int, a: int, A, B, samples: int = 1000) -> float:
    A, B = _bounds(A, B)
    if x < 2:
        return 0.0
    ps = primal.primes_upto(x)
    scale = math.log(x) ** 2 / x
    vals = []
    for c in _midpoints(A, B, samples):
        r = floor_pow_many(ps, c) - a
        vals.append(int(np.count_nonzero(is_prime_many(r))) * float(c) * scale)
    return math.fsum(vals) * float(B.value - A.value) / samples
