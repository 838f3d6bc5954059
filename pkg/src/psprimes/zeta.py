"""Zeta-zero tables and the truncated explicit formula for psi.

Only zeros with positive ordinate are stored; each one stands for itself and
its conjugate.  ``count_zeros`` counts stored (upper half-plane) zeros only.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

import mpmath
import numpy as np

from . import primal

# constant standing in for the implied constant of the remainder bound
R_CONSTANT = 2.0


class ZeroTableError(ValueError):
    pass


class TableExhaustedError(ZeroTableError):
    pass


@dataclass(frozen=True)
class ZeroTable:
    gammas: tuple
    betas: tuple
    source: str = ""

    def __post_init__(self):
        if len(self.gammas) != len(self.betas):
            raise ZeroTableError("gammas and betas differ in length")
        if any(g <= 0 for g in self.gammas):
            raise ZeroTableError("ordinates must be positive")
        if any(b <= a for a, b in zip(self.gammas, self.gammas[1:])):
            raise ZeroTableError("ordinates must be strictly increasing")
        if any(not 0 < b < 1 for b in self.betas):
            raise ZeroTableError("real parts must lie in (0, 1)")

    @property
    def count(self) -> int:
        return len(self.gammas)

    @property
    def max_gamma(self) -> float:
        return float(self.gammas[-1]) if self.gammas else 0.0

    def up_to(self, T: float) -> "ZeroTable":
        k = int(np.searchsorted(np.array(self.gammas, dtype=float), T, side="right"))
        return ZeroTable(self.gammas[:k], self.betas[:k], self.source)


def load_zeros(path: str, source: Optional[str] = None) -> ZeroTable:
    """Read one ordinate per line; '#' lines are comments."""
    gammas = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                g = float(s)
            except ValueError as exc:
                raise ZeroTableError(f"{path}:{lineno}: cannot parse {s!r}") from exc
            if gammas and g <= gammas[-1]:
                raise ZeroTableError(f"{path}:{lineno}: ordinates not strictly increasing")
            gammas.append(g)
    return ZeroTable(tuple(gammas), (0.5,) * len(gammas), source or os.path.abspath(path))


def fixture_zeros() -> ZeroTable:
    """First 100 zeros, 9 decimals, computed with mpmath.zetazero."""
    ref = resources.files("psprimes") / "data" / "zeros_100.txt"
    with resources.as_file(ref) as p:
        return load_zeros(str(p), source="psprimes/data/zeros_100.txt (mpmath zetazero)")


@dataclass(frozen=True)
class ExplicitFormulaResult:
    x: float
    T: float
    value: float
    zero_terms_used: int
    r_budget: float
    direct: float
    abs_error: float

    HEADER = ("x", "T", "value", "direct", "abs_error", "r_budget")

    def row(self) -> list:
        return [repr(self.x), repr(self.T), repr(self.value), repr(self.direct),
                repr(self.abs_error), repr(self.r_budget)]


def _is_prime_power(n: int) -> bool:
    return n >= 2 and primal.von_mangoldt(n) > 0


def distance_to_prime_power(x: float) -> float:
    """<x>: distance from x to the nearest prime power other than x itself."""
    best = math.inf
    n = math.floor(x)
    for start, step in ((n, -1), (n + 1, 1)):
        k = start
        while k >= 2:
            if k != x and _is_prime_power(k):
                best = min(best, abs(x - k))
                break
            k += step
            if abs(k - x) > best:
                break
    return best


def remainder_budget(x: float, T: float) -> float:
    """R_CONSTANT * (log x * min(1, x/(T <x>)) + x/T * log(xT)^2)."""
    dx = distance_to_prime_power(x)
    return R_CONSTANT * (math.log(x) * min(1.0, x / (T * dx)) + x / T * math.log(x * T) ** 2)


def psi0_direct(x: float) -> float:
    """psi with the midpoint convention at prime powers."""
    v = primal.psi_direct(x)
    if x == math.floor(x) and _is_prime_power(int(x)):
        v -= 0.5 * primal.von_mangoldt(int(x))
    return v


def zero_sum(x: float, zeros: ZeroTable, dps: int = 30) -> float:
    """sum over stored rho of 2 Re(x^rho / rho); fsum of mpmath terms."""
    with mpmath.workdps(dps):
        lx = mpmath.log(mpmath.mpf(x))
        terms = []
        for g, b in zip(zeros.gammas, zeros.betas):
            rho = mpmath.mpc(b, g)
            terms.append(float(2 * mpmath.re(mpmath.exp(rho * lx) / rho)))
    return math.fsum(terms)


def psi_explicit(x: float, T: float, zeros: ZeroTable) -> ExplicitFormulaResult:
    """Truncated explicit formula for psi_0(x) using zeros with 0 < gamma <= T."""
    if x <= 1:
        raise ValueError("need x > 1")
    if T < 2:
        raise ValueError("need T >= 2")
    if zeros.count == 0:
        raise ZeroTableError("zero table is empty")
    if T > zeros.max_gamma:
        raise TableExhaustedError(f"T = {T} exceeds the largest stored ordinate {zeros.max_gamma}")
    used = zeros.up_to(T)
    s = zero_sum(x, used)
    value = math.fsum([x, -s, -math.log(2 * math.pi), -0.5 * math.log(1 - x**-2)])
    direct = psi0_direct(x)
    return ExplicitFormulaResult(x, T, value, used.count, remainder_budget(x, T),
                                 direct, abs(value - direct))


def count_zeros(sigma: float, T: float, zeros: ZeroTable) -> int:
    """N(sigma, T) over the stored zeros: beta > sigma and 0 < gamma <= T."""
    if zeros.count == 0:
        raise ZeroTableError("zero table is empty")
    return sum(1 for g, b in zip(zeros.gammas, zeros.betas) if b > sigma and g <= T)


def gm_bound(sigma: float, T: float) -> float:
    """T^(30(1 - sigma)/13), the zero-density exponent without its o(1)."""
    return T ** (30 * (1 - sigma) / 13)


def zero_free_margin(gamma: float, c0: float) -> float:
    """1 - c0 (log tau)^(-2/3) (log log tau)^(-1/3) with tau = |gamma| + 2."""
    tau = abs(gamma) + 2
    if tau <= math.e:
        raise ValueError("tau = |gamma| + 2 must exceed e")
    lt = math.log(tau)
    return 1 - c0 * lt ** (-2 / 3) * math.log(lt) ** (-1 / 3)
