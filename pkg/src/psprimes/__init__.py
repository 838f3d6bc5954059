"""Primes in Piatetski-Shapiro sequences floor(p**c): exact counts, sieve and
exponential-sum checks, explicit-formula experiments and c-averaged densities."""
from .exactpow import Exponent, floor_pow, PrecisionOverflowError
from .primal import RangeTooLargeError, pi, primes_upto
from .pscount import count_shifted, upsilon, find_representation, scan_exceptions

__version__ = "0.1.0"

__all__ = [
    "Exponent",
    "PrecisionOverflowError",
    "RangeTooLargeError",
    "count_shifted",
    "find_representation",
    "floor_pow",
    "pi",
    "primes_upto",
    "scan_exceptions",
    "upsilon",
]
