"""Certified floor of n**c for exact exponents c.

The exponent is held as an exact rational.  ``floor_pow`` brackets n**c
between directed-rounding MPFR bounds and doubles the precision until the
bracket contains no integer; the one case escalation can never settle, n**c
an exact integer, is caught first by an integer perfect-power test.

The ``*_many`` functions are vectorised versions for numpy arrays.  They take
a float64 estimate and accept it only when it sits more than
``FLOAT_GUARD * value`` from the nearest integer.  The float error is below
``6e-15 * value`` for values under 2**53, so the guard leaves a ~150x margin.
Everything inside the guard goes through ``floor_pow``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

import gmpy2
import numpy as np

MAX_PRECISION_BITS = 4096
START_PRECISION_BITS = 64
FLOAT_GUARD = 2.0**-40
# float64 fast path only below this value (integers exact, int64 safe)
_FLOAT_CEILING = 2.0**52


class PrecisionOverflowError(ArithmeticError):
    """Certification failed below the configured precision ceiling."""


def set_max_precision_bits(bits: int) -> None:
    global MAX_PRECISION_BITS
    if bits < 64:
        raise ValueError("max precision must be at least 64 bits")
    MAX_PRECISION_BITS = int(bits)


@dataclass(frozen=True)
class Exponent:
    """An exact positive real exponent: a rational u/v in lowest terms.

    ``text`` keeps the form it was written in ("4/5", "0.86") so output can
    echo it back unchanged.
    """

    value: Fraction
    text: str = ""
    working_precision: int = START_PRECISION_BITS

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("exponent must be positive")
        if not self.text:
            object.__setattr__(self, "text", _fraction_text(self.value))

    @classmethod
    def parse(cls, text: Union[str, int, Fraction, "Exponent"]) -> "Exponent":
        if isinstance(text, Exponent):
            return text
        if isinstance(text, (int, Fraction)):
            return cls(Fraction(text))
        if isinstance(text, float):
            raise TypeError("pass exponents as strings or Fractions, not floats")
        s = str(text).strip()
        try:
            if "/" in s:
                u, v = s.split("/")
                val = Fraction(int(u), int(v))
            else:
                val = Fraction(Decimal(s))
        except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
            raise ValueError(f"malformed exponent {text!r}") from exc
        return cls(val, s)

    @property
    def num(self) -> int:
        return self.value.numerator

    @property
    def den(self) -> int:
        return self.value.denominator

    @property
    def is_integer(self) -> bool:
        return self.den == 1

    def reciprocal(self) -> "Exponent":
        return Exponent(1 / self.value)

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return self.text


def _fraction_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def as_exponent(c) -> Exponent:
    return Exponent.parse(c)


@dataclass(frozen=True)
class FloorCertificate:
    base: int
    exponent: Exponent
    floor_value: int
    precision_used: int
    exactness: str  # "interval-separated" or "exact-power"


def _power_bounds(base: int, c: Exponent, prec: int):
    """Floors of lower and upper MPFR bounds on base**c (base >= 2).

    The floors are taken at the working precision, where they are exact; in
    the default 53-bit context they would be rounded above 2**53.
    """
    ctx = gmpy2.get_context()
    old = (ctx.precision, ctx.round)
    try:
        ctx.precision = prec
        ctx.round = gmpy2.RoundDown
        lo = gmpy2.exp(gmpy2.div(c.num, c.den) * gmpy2.log(base))
        ctx.round = gmpy2.RoundUp
        hi = gmpy2.exp(gmpy2.div(c.num, c.den) * gmpy2.log(base))
        return int(gmpy2.floor(lo)), int(gmpy2.floor(hi))
    finally:
        ctx.precision, ctx.round = old


def _exact_root(base: int, v: int):
    """Integer s with s**v == base, or None."""
    if v == 1:
        return base
    if base.bit_length() <= v and base > 1:
        return None
    s, exact = gmpy2.iroot(gmpy2.mpz(base), v)
    return int(s) if exact else None


def floor_pow(base: int, c, *, max_bits: int | None = None) -> FloorCertificate:
    """Certified floor(base**c)."""
    c = as_exponent(c)
    base = int(base)
    if base < 1:
        raise ValueError("base must be >= 1")
    if base == 1:
        return FloorCertificate(1, c, 1, 0, "exact-power")
    # gcd(u, v) = 1, so base**(u/v) is an integer iff base is a v-th power
    s = _exact_root(base, c.den)
    if s is not None:
        return FloorCertificate(base, c, s**c.num, 0, "exact-power")
    limit = MAX_PRECISION_BITS if max_bits is None else max_bits
    prec = max(c.working_precision, 32)
    while prec <= limit:
        flo, fhi = _power_bounds(base, c, prec)
        if flo == fhi:
            return FloorCertificate(base, c, flo, prec, "interval-separated")
        prec *= 2
    raise PrecisionOverflowError(
        f"could not certify floor({base}**{c}) within {limit} bits")


def floor_value(base: int, c) -> int:
    return floor_pow(base, c).floor_value


def in_floor_class(n: int, m: int, c) -> bool:
    """True iff floor(n**c) == m, i.e. m <= n**c < m + 1."""
    if m < 0:
        return False
    return floor_pow(n, c).floor_value == m


def ceil_root(m: int, c) -> int:
    """Smallest integer n >= 1 with n**c >= m (for m >= 1)."""
    c = as_exponent(c)
    cert = floor_pow(m, c.reciprocal())
    if cert.exactness == "exact-power":
        return max(cert.floor_value, 1)
    return cert.floor_value + 1


def preimage_range(m: int, c) -> tuple[int, int]:
    """Half-open [lo, hi) of all n >= 1 with floor(n**c) == m."""
    if m < 1:
        raise ValueError("preimage_range needs m >= 1")
    lo, hi = ceil_root(m, c), ceil_root(m + 1, c)
    return lo, max(lo, hi)


# --- vectorised versions -------------------------------------------------

def floor_pow_many(bases, c) -> np.ndarray:
    """Certified floor(b**c) for an integer array of bases."""
    c = as_exponent(c)
    b = np.asarray(bases, dtype=np.int64)
    if b.size == 0:
        return np.zeros(0, dtype=np.int64)
    y = np.power(b.astype(np.float64), float(c))
    near = np.rint(y)
    ok = (np.abs(y - near) > FLOAT_GUARD * y) & (y < _FLOAT_CEILING)
    out = np.floor(y).astype(np.int64)
    for i in np.flatnonzero(~ok).tolist():
        out[i] = floor_pow(int(b[i]), c).floor_value
    return out


def ceil_root_many(ms, c) -> np.ndarray:
    """Vector form of :func:`ceil_root`."""
    c = as_exponent(c)
    m = np.asarray(ms, dtype=np.int64)
    inv = c.reciprocal()
    if m.size == 0:
        return np.zeros(0, dtype=np.int64)
    y = np.power(m.astype(np.float64), float(inv))
    near = np.rint(y)
    ok = (np.abs(y - near) > FLOAT_GUARD * y) & (y < _FLOAT_CEILING)
    out = np.floor(y).astype(np.int64) + 1
    for i in np.flatnonzero(~ok).tolist():
        out[i] = ceil_root(int(m[i]), c)
    return out


def preimage_bounds_many(ms, c) -> tuple[np.ndarray, np.ndarray]:
    """Arrays lo, hi with [lo_i, hi_i) = preimage_range(ms[i], c)."""
    m = np.asarray(ms, dtype=np.int64)
    lo = ceil_root_many(m, c)
    hi = ceil_root_many(m + 1, c)
    return lo, np.maximum(lo, hi)


def exact_log_ratio_vs(r: int, p: int, c) -> int:
    """Sign of log(r)/log(p) - c for integers r >= 1, p >= 2 and exact c.

    Compares r**v with p**u in integers, so only usable for modest u, v.
    """
    c = as_exponent(c)
    lhs = gmpy2.mpz(r) ** c.den
    rhs = gmpy2.mpz(p) ** c.num
    return (lhs > rhs) - (lhs < rhs)
