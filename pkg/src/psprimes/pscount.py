"""Counting primes p with floor(p**c) in a prescribed set.

Two quantities drive everything here:

* the shifted count  Pi_{c,a}(x) = #{p <= x : floor(p**c) - a is prime}
* the representation count Upsilon_c(N) for N = floor(p**c) + q

Upsilon comes in two flavours.  ``distinct-m`` counts the values m = N - q
that occur as some floor(p**c).  ``count-p`` counts pairs (p, q), which is the
form the density integrals are built on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import gmpy2
import numpy as np

from . import primal
from .exactpow import (
    Exponent,
    as_exponent,
    ceil_root,
    floor_pow,
    floor_pow_many,
    preimage_bounds_many,
    preimage_range,
)

MODES = ("distinct-m", "count-p")
# primes below this are tabulated; beyond it single values go to GMP's BPSW
# test, which has no counterexamples below 2**64 (all our values are int64)
BULK_PRIME_LIMIT = 2 * 10**7


def _big_is_prime(n: int) -> bool:
    return bool(gmpy2.is_prime(n))


def _big_prime_in(lo: int, hi: int) -> bool:
    """Is there a prime in [lo, hi)?"""
    return int(gmpy2.next_prime(lo - 1)) < hi


@dataclass(frozen=True)
class CountRecord:
    x_or_N: int
    c: Exponent
    a: int
    count: int
    predicted: float
    ratio: float
    mode: str

    HEADER = ("x_or_N", "c", "a", "count", "predicted", "ratio", "mode")

    def row(self) -> list:
        return [self.x_or_N, str(self.c), self.a, self.count,
                repr(self.predicted), repr(self.ratio), self.mode]


@dataclass(frozen=True)
class RepresentationWitness:
    N: int
    m: int
    p: int
    q: int

    HEADER = ("N", "m", "p", "q")

    def row(self) -> list:
        return [self.N, self.m, self.p, self.q]


def _noninteger(c) -> Exponent:
    c = as_exponent(c)
    if c.is_integer:
        raise ValueError(f"c = {c} is an integer; the sequence needs c outside Z")
    return c


def shifted_main_term(x: int, c: Exponent) -> float:
    return x / (float(c) * math.log(x) ** 2)


def upsilon_scale(N: int, c: Exponent) -> float:
    return math.exp(math.log(N) / float(c)) / math.log(N) ** 2


# --- shared building blocks ------------------------------------------------

def is_prime_many(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.int64)
    out = np.zeros(v.shape, dtype=bool)
    if v.size == 0:
        return out
    top = int(v.max())
    if top <= BULK_PRIME_LIMIT:
        table = primal.prime_flags(max(top, 2))
        ok = v >= 0
        out[ok] = table[v[ok]]
        return out
    small = v <= BULK_PRIME_LIMIT
    table = primal.prime_flags(BULK_PRIME_LIMIT)
    out[small & (v >= 0)] = table[v[small & (v >= 0)]]
    for i in np.flatnonzero(~small).tolist():
        out[i] = _big_is_prime(int(v[i]))
    return out


def realized_mask(ms, c) -> np.ndarray:
    """mask[i] is true iff floor(p**c) == ms[i] for at least one prime p."""
    c = as_exponent(c)
    m = np.asarray(ms, dtype=np.int64)
    out = np.zeros(m.shape, dtype=bool)
    pos = m >= 1
    if not pos.any():
        return out
    lo, hi = preimage_bounds_many(m[pos], c)
    top = int(hi.max())
    bulk = primal.primes_upto(min(top, BULK_PRIME_LIMIT))
    # primes inside [lo, min(hi, limit)) decided by table lookup
    cap = min(top, BULK_PRIME_LIMIT + 1)
    inside = (np.searchsorted(bulk, np.minimum(hi, cap), "left")
              - np.searchsorted(bulk, np.minimum(lo, cap), "left")) > 0
    res = inside.copy()
    for i in np.flatnonzero(~inside & (hi > cap)).tolist():
        res[i] = _big_prime_in(max(int(lo[i]), cap), int(hi[i]))
    out[pos] = res
    return out


class _FloorHistogram:
    """Per-segment histogram of floor(p**c) for m <= m_max (picklable)."""

    def __init__(self, c: Exponent, m_max: int):
        self.c = c
        self.m_max = m_max

    def __call__(self, seg: primal.PrimeSegment) -> np.ndarray:
        m = floor_pow_many(seg.primes, self.c)
        m = m[m <= self.m_max]
        return np.bincount(m, minlength=self.m_max + 1).astype(np.int64)


def floor_weights(c, m_max: int, workers: int = 1) -> np.ndarray:
    """w[m] = #{p prime : floor(p**c) == m} for 0 <= m <= m_max."""
    c = as_exponent(c)
    hi = ceil_root(m_max + 1, c)
    w = np.zeros(m_max + 1, dtype=np.int64)
    if hi <= 2:
        return w
    seg_size = max(primal.DEFAULT_SEGMENT_SIZE, (hi - 2) // 256)
    for part in primal.map_segments(_FloorHistogram(c, m_max), 2, hi, seg_size, workers):
        w += part
    return w


# --- Pi_{c,a}(x) -------------------------------------------------------------

class _ShiftedCounter:
    def __init__(self, c: Exponent, a: int, table: Optional[np.ndarray]):
        self.c, self.a, self.table = c, a, table

    def __call__(self, seg: primal.PrimeSegment) -> int:
        r = floor_pow_many(seg.primes, self.c) - self.a
        if self.table is not None:
            ok = r >= 2
            return int(np.count_nonzero(self.table[r[ok]]))
        return int(np.count_nonzero(is_prime_many(r)))


def count_shifted(c, a: int, x: int, method: str = "auto", workers: int = 1) -> CountRecord:
    """Pi_{c,a}(x): primes p <= x whose floor(p**c) - a is prime.

    ``q-major`` walks the primes q and counts p in the preimage of q + a;
    ``p-major`` walks p directly.  ``auto`` picks q-major for c < 1.
    """
    c = _noninteger(c)
    if a < 0:
        raise ValueError("shift a must be >= 0")
    if method == "auto":
        method = "q-major" if c.value < 1 else "p-major"
    count = 0
    if x >= 2:
        if method == "q-major":
            count = _count_shifted_q_major(c, a, x)
        elif method == "p-major":
            count = _count_shifted_p_major(c, a, x, workers)
        else:
            raise ValueError(f"unknown method {method!r}")
    pred = shifted_main_term(x, c) if x >= 2 else float("nan")
    ratio = count / pred if x >= 2 else float("nan")
    return CountRecord(x, c, a, count, pred, ratio, "shifted")


def _count_shifted_q_major(c: Exponent, a: int, x: int) -> int:
    r_max = floor_pow(x, c).floor_value
    qs = primal.primes_upto(r_max - a)
    if qs.size == 0:
        return 0
    lo, hi = preimage_bounds_many(qs + a, c)
    hi = np.minimum(hi, x + 1)
    ps = primal.primes_upto(x)
    n = np.searchsorted(ps, hi, "left") - np.searchsorted(ps, lo, "left")
    return int(np.maximum(n, 0).sum())


def _count_shifted_p_major(c: Exponent, a: int, x: int, workers: int) -> int:
    r_max = floor_pow(x, c).floor_value - a
    table = primal.prime_flags(r_max) if 2 <= r_max <= BULK_PRIME_LIMIT else None
    if r_max < 2:
        return 0
    return sum(primal.map_segments(_ShiftedCounter(c, a, table), 2, x + 1, workers=workers))


def count_shifted_many(c, a: int, xs: Sequence[int]) -> list[int]:
    """Pi_{c,a}(x) for every x in xs from a single pass over p <= max(xs)."""
    c = _noninteger(c)
    xs = [int(x) for x in xs]
    if not xs:
        return []
    top = max(xs)
    ps = primal.primes_upto(top)
    r = floor_pow_many(ps, c) - a
    good = ps[is_prime_many(r)]
    return [int(np.searchsorted(good, x, "right")) for x in xs]


def convergence_table(c, a: int, xs: Sequence[int], workers: int = 1) -> list[CountRecord]:
    """One Pi_{c,a}(x) record per x; the ratios should drift toward 1."""
    xs = list(xs)
    if not xs:
        raise ValueError("convergence_table needs a nonempty list of x")
    if any(b <= a_ for a_, b in zip(xs, xs[1:])):
        raise ValueError("xs must be strictly increasing")
    return [count_shifted(c, a, x, workers=workers) for x in xs]


# --- Upsilon_c(N) --------------------------------------------------------------

def upsilon(c, N: int, mode: str = "distinct-m", workers: int = 1) -> CountRecord:
    """Upsilon_c(N) in the requested counting convention."""
    c = _noninteger(c)
    if N < 2:
        raise ValueError("upsilon needs N >= 2")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    qs = primal.primes_upto(N - 1)
    ms = N - qs
    if mode == "distinct-m":
        count = int(np.count_nonzero(realized_mask(ms, c)))
    else:
        w = floor_weights(c, N - 1, workers)
        count = int(w[ms].sum())
    pred = upsilon_scale(N, c)
    return CountRecord(N, c, 0, count, pred, count / pred, mode)


def upsilon_table(c, N_max: int, mode: str = "distinct-m") -> np.ndarray:
    """U[N] = Upsilon_c(N) for 0 <= N <= N_max, by one integer convolution."""
    c = _noninteger(c)
    if mode == "distinct-m":
        ms = np.arange(N_max + 1)
        weight = realized_mask(ms, c).astype(np.int64)
    elif mode == "count-p":
        weight = floor_weights(c, N_max)
    else:
        raise ValueError(f"mode must be one of {MODES}")
    weight[0] = 0
    primes = primal.prime_flags(max(N_max, 2))[: N_max + 1].astype(np.int64)
    return np.convolve(weight, primes)[: N_max + 1]


# --- representations -------------------------------------------------------

def check_witness(w: RepresentationWitness, c) -> bool:
    return (w.N == w.m + w.q and w.m >= 1
            and floor_pow(w.p, c).floor_value == w.m
            and primal.is_prime(w.p) and primal.is_prime(w.q))


def find_representation(c, N: int) -> Optional[RepresentationWitness]:
    """Witness N = floor(p**c) + q with the smallest m, or None."""
    c = _noninteger(c)
    if N < 2:
        raise ValueError("need N >= 2")
    for q in primal.primes_upto(N - 1)[::-1].tolist():
        m = N - q
        lo, hi = preimage_range(m, c)
        p = primal.first_prime_in(lo, hi, 256)
        if p is not None:
            w = RepresentationWitness(N, m, p, q)
            if not check_witness(w, c):
                raise AssertionError(f"invalid witness {w}")
            return w
    return None


def _realized_stream(c: Exponent, m_max: int, batch: int = 512) -> Iterable[int]:
    for start in range(1, m_max + 1, batch):
        ms = np.arange(start, min(start + batch, m_max + 1))
        yield from ms[realized_mask(ms, c)].tolist()


def _scan_chunk(args) -> list[int]:
    c, lo, hi = args
    qs = primal.primes_upto(hi)
    covered = np.zeros(hi - lo + 1, dtype=bool)
    open_top = hi
    for m in _realized_stream(c, hi - 2):
        if m > open_top - 2:
            break
        n = m + qs
        n = n[(n >= lo) & (n <= hi)]
        covered[n - lo] = True
        if covered.all():
            break
        open_top = lo + int(np.flatnonzero(~covered)[-1])
    return (np.flatnonzero(~covered) + lo).tolist()


def scan_exceptions(c, N_lo: int, N_hi: int, chunk_size: int = 50_000,
                    workers: int = 1) -> list[int]:
    """All N in [N_lo, N_hi] with no representation N = floor(p**c) + q."""
    c = _noninteger(c)
    if not 2 <= N_lo <= N_hi:
        raise ValueError("need 2 <= N_lo <= N_hi")
    chunks = [(c, s, min(s + chunk_size - 1, N_hi)) for s in range(N_lo, N_hi + 1, chunk_size)]
    if workers > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_chunk, chunks))
    else:
        parts = [_scan_chunk(ch) for ch in chunks]
    return [n for part in parts for n in part]
