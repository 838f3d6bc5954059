"""Segmented prime sieving and the elementary arithmetic functions.

Segments are pre-sieved with a 2*3*5*7*11*13 wheel pattern and then crossed
off by the remaining base primes, odd multiples only.  Everything returned is
read-only; segments covering a range never overlap and never leave gaps.
"""
from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

DEFAULT_SEGMENT_SIZE = 1 << 20
# Upper bound on hi - lo for anything materialised in memory at once.
DEFAULT_MEMORY_BUDGET = 1 << 30
# Upper bound on the largest integer a streaming scan will sieve to.
DEFAULT_SCAN_LIMIT = 2 * 10**10

WHEEL_PRIMES = (2, 3, 5, 7, 11, 13)
WHEEL = 30030
_CACHE_MAGIC = b"PSPL1"


class RangeTooLargeError(ValueError):
    """Requested range exceeds the configured memory or scan budget."""


def _wheel_pattern() -> np.ndarray:
    pat = np.ones(WHEEL, dtype=bool)
    for p in WHEEL_PRIMES:
        pat[::p] = False
    return pat


_PATTERN = _wheel_pattern()


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (used for base primes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.setflags(write=False)
    return out


def base_primes(hi: int) -> np.ndarray:
    """Primes p with p*p < hi, enough to sieve any window below hi."""
    root = math.isqrt(max(hi - 1, 0))
    # cache by the next power of two so nearby windows share one table
    table = _small_primes(1 << max(root, 1).bit_length())
    return table[: np.searchsorted(table, root, "right")]


def _sieve_flags(lo: int, hi: int, bases: Optional[np.ndarray] = None) -> np.ndarray:
    n = hi - lo
    off = lo % WHEEL
    reps = (off + n) // WHEEL + 1
    flags = np.tile(_PATTERN, reps)[off : off + n].copy()
    for p in WHEEL_PRIMES:
        if lo <= p < hi:
            flags[p - lo] = True
    if lo <= 1:
        flags[: 2 - lo] = False
    if bases is None:
        bases = base_primes(hi)
    bases = bases[bases > WHEEL_PRIMES[-1]]
    # primes larger than the window hit it at most once: do those in one shot
    big = bases[bases > n]
    small = bases[bases <= n]
    for p in small.tolist():
        start = max(p * p, -(-lo // p) * p)
        if not start & 1:
            start += p
        if start < hi:
            flags[start - lo :: 2 * p] = False
    if big.size:
        # even multiples are already gone via the wheel, so parity is irrelevant
        first = (-lo) % big
        hit = (first < n) & (lo + first >= big * big)
        flags[first[hit]] = False
    return flags


def _von_mangoldt(lo: int, hi: int, flags: np.ndarray) -> np.ndarray:
    lam = np.zeros(hi - lo, dtype=np.longdouble)
    idx = np.flatnonzero(flags)
    lam[idx] = np.log((idx + lo).astype(np.longdouble))
    for p in _small_primes(math.isqrt(max(hi - 1, 1))).tolist():
        pk = p * p
        while pk < hi:
            if pk >= lo:
                lam[pk - lo] = np.log(np.longdouble(p))
            pk *= p
    return lam


@dataclass(frozen=True)
class PrimeSegment:
    """Primality flags for the half-open window [lo, hi)."""

    lo: int
    hi: int
    flags: np.ndarray
    lam: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.hi - self.lo < 1:
            raise ValueError("empty segment")
        if self.flags.shape != (self.hi - self.lo,):
            raise ValueError("flag array does not match [lo, hi)")
        self.flags.setflags(write=False)
        if self.lam is not None:
            self.lam.setflags(write=False)

    @property
    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.flags).astype(np.int64) + self.lo

    def count(self) -> int:
        return int(np.count_nonzero(self.flags))


def make_segment(lo: int, hi: int, with_lambda: bool = False) -> PrimeSegment:
    flags = _sieve_flags(lo, hi)
    lam = _von_mangoldt(lo, hi, flags) if with_lambda else None
    return PrimeSegment(lo, hi, flags, lam)


def plan_segments(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE):
    """Deterministic tiling of [lo, hi) into (lo, hi) windows."""
    if segment_size < 64:
        raise ValueError("segment_size must be >= 64")
    return [(s, min(s + segment_size, hi)) for s in range(lo, hi, segment_size)]


# --- on-disk segment cache -------------------------------------------------

class SegmentCache:
    """One file per segment: b'PSPL1', lo and hi as <Q, then the packed flags."""

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def path(self, lo: int, hi: int) -> str:
        return os.path.join(self.directory, f"{lo}_{hi}.pspl")

    def store(self, seg: PrimeSegment) -> None:
        bits = np.packbits(seg.flags, bitorder="little")
        tmp = self.path(seg.lo, seg.hi) + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(_CACHE_MAGIC + struct.pack("<QQ", seg.lo, seg.hi))
            fh.write(bits.tobytes())
        os.replace(tmp, self.path(seg.lo, seg.hi))

    def load(self, lo: int, hi: int) -> Optional[PrimeSegment]:
        try:
            with open(self.path(lo, hi), "rb") as fh:
                blob = fh.read()
        except FileNotFoundError:
            return None
        return decode_segment(blob)


def decode_segment(blob: bytes) -> PrimeSegment:
    if blob[:5] != _CACHE_MAGIC:
        raise ValueError("bad segment cache magic")
    lo, hi = struct.unpack("<QQ", blob[5:21])
    bits = np.frombuffer(blob[21:], dtype=np.uint8)
    flags = np.unpackbits(bits, count=hi - lo, bitorder="little").astype(bool)
    return PrimeSegment(lo, hi, flags)


def _segment_job(args):
    lo, hi, with_lambda, cache_dir = args
    if cache_dir and not with_lambda:
        cache = SegmentCache(cache_dir)
        seg = cache.load(lo, hi)
        if seg is None:
            seg = make_segment(lo, hi)
            cache.store(seg)
        return seg
    return make_segment(lo, hi, with_lambda)


def sieve_range(
    lo: int,
    hi: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    *,
    with_lambda: bool = False,
    workers: int = 1,
    cache_dir: Optional[str] = None,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> list[PrimeSegment]:
    """Sieve [lo, hi) into a list of segments.

    The whole range is held in memory, so ``hi - lo`` may not exceed
    ``memory_budget`` (bytes of flags, per worker); use :func:`iter_segments`
    for streaming scans.
    """
    if not 2 <= lo < hi:
        raise ValueError("need 2 <= lo < hi")
    if hi - lo > memory_budget:
        raise RangeTooLargeError(f"[{lo}, {hi}) exceeds memory budget of {memory_budget}")
    return list(iter_segments(lo, hi, segment_size, with_lambda=with_lambda,
                              workers=workers, cache_dir=cache_dir))


def iter_segments(
    lo: int,
    hi: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    *,
    with_lambda: bool = False,
    workers: int = 1,
    cache_dir: Optional[str] = None,
    scan_limit: int = DEFAULT_SCAN_LIMIT,
) -> Iterator[PrimeSegment]:
    """Yield segments tiling [lo, hi) in increasing order."""
    if hi > scan_limit:
        raise RangeTooLargeError(f"scan to {hi} exceeds scan limit {scan_limit}")
    jobs = [(a, b, with_lambda, cache_dir) for a, b in plan_segments(lo, hi, segment_size)]
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            yield _segment_job(job)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            yield from ex.map(_segment_job, jobs)


def map_segments(
    func: Callable[[PrimeSegment], object],
    lo: int,
    hi: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
    scan_limit: int = DEFAULT_SCAN_LIMIT,
) -> list:
    """Apply ``func`` to every segment of [lo, hi); results in segment order.

    ``func`` must be picklable when ``workers > 1``.  Because the segment plan
    does not depend on ``workers``, merged results are identical for any
    worker count.
    """
    if hi > scan_limit:
        raise RangeTooLargeError(f"scan to {hi} exceeds scan limit {scan_limit}")
    plan = plan_segments(lo, hi, segment_size)
    if workers <= 1 or len(plan) <= 1:
        return [func(make_segment(a, b)) for a, b in plan]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_apply, [(func, a, b) for a, b in plan]))


def _apply(args):
    func, a, b = args
    return func(make_segment(a, b))


# --- counting and lookup helpers ------------------------------------------

def primes_upto(n: int) -> np.ndarray:
    """Sorted int64 array of all primes <= n."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    if n + 1 > DEFAULT_MEMORY_BUDGET:
        raise RangeTooLargeError(f"primes_upto({n}) exceeds memory budget")
    return _primes_upto_cached(n)


# on-disk segment cache used by primes_upto; None disables it
CACHE_DIR: Optional[str] = None


def set_cache_dir(path: Optional[str]) -> None:
    global CACHE_DIR
    CACHE_DIR = path
    _primes_upto_cached.cache_clear()


@lru_cache(maxsize=4)
def _primes_upto_cached(n: int) -> np.ndarray:
    parts = [seg.primes for seg in iter_segments(2, n + 1, cache_dir=CACHE_DIR)]
    out = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    out.setflags(write=False)
    return out


def prime_flags(n: int) -> np.ndarray:
    """Boolean table t with t[k] true iff k is prime, for 0 <= k <= n."""
    if n + 1 > DEFAULT_MEMORY_BUDGET:
        raise RangeTooLargeError(f"prime_flags({n}) exceeds memory budget")
    return _prime_flags_cached(n)


@lru_cache(maxsize=4)
def _prime_flags_cached(n: int) -> np.ndarray:
    out = np.zeros(n + 1, dtype=bool)
    if n >= 2:
        out[2:] = _sieve_flags(2, n + 1)
    out.setflags(write=False)
    return out


def _count(seg: PrimeSegment) -> int:
    return seg.count()


def pi(x: int, workers: int = 1) -> int:
    """Number of primes <= x."""
    x = int(x)
    if x < 2:
        return 0
    return sum(map_segments(_count, 2, x + 1, workers=workers))


def is_prime(n: int) -> bool:
    """Primality by sieving the one-element window [n, n+1)."""
    n = int(n)
    if n < 2:
        return False
    if n >= DEFAULT_SCAN_LIMIT**2:
        raise RangeTooLargeError(f"{n} is beyond sieving range")
    return bool(_sieve_flags(n, n + 1)[0])


def first_prime_in(lo: int, hi: int, window: int = 4096) -> Optional[int]:
    """Smallest prime in [lo, hi), or None."""
    lo = max(int(lo), 2)
    hi = int(hi)
    while lo < hi:
        top = min(lo + window, hi)
        flags = _sieve_flags(lo, top)
        idx = np.flatnonzero(flags)
        if idx.size:
            return lo + int(idx[0])
        lo = top
        window *= 2
    return None


def psi_direct(x: float) -> float:
    """Chebyshev psi(x) = sum of Lambda(n) over n <= x, compensated summation."""
    n = math.floor(x)
    if n < 2:
        return 0.0
    ps = primes_upto(n)
    terms = [math.fsum(np.log(ps.astype(np.float64)).tolist())]
    # prime powers p^k <= n with k >= 2
    for p in ps[: np.searchsorted(ps, math.isqrt(n), side="right")].tolist():
        lp = math.log(p)
        pk = p * p
        while pk <= n:
            terms.append(lp)
            pk *= p
    return math.fsum(terms)


def von_mangoldt(n: int) -> float:
    """Lambda(n): log p if n is a power of the prime p, else 0."""
    n = int(n)
    if n < 2:
        return 0.0
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
    return math.log(n)


def omega(n: int) -> int:
    """Number of distinct prime factors of n."""
    n = int(n)
    if n < 1:
        raise ValueError("omega needs n >= 1")
    k = 0
    p = 2
    while p * p <= n:
        if n % p == 0:
            k += 1
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    return k + (n > 1)


def count_in_segments(segments: Sequence[PrimeSegment]) -> int:
    return sum(s.count() for s in segments)
