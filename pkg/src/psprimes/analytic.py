"""Sawtooth approximation, Selberg weights and exponential sums.

Vaaler construction used here (the Beurling-Selberg based one): with
u = h/(H+1) and phi(u) = pi*u*(1-|u|)*cot(pi*u) + |u|,

    a_h = i * phi(u) / (2*pi*h),    b_h = (1 - |u|) / (2H + 2).

Constants: |a_h| <= C_A/|h| with C_A = 1/(2*pi) since 0 <= phi <= 1, and
b_h <= C_B/H with C_B = 1/2.  The majorant sum_h b_h e(th) is a Fejer
kernel divided by 2H+2, hence real and nonnegative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath
import numpy as np

from .exactpow import Exponent, as_exponent
from .primal import omega

C_A = 1.0 / (2.0 * math.pi)
C_B = 0.5
# Largest grid error of |Psi - approximation| is 1/2 for every H (at the jump).
JUMP_ERROR = 0.5


# t - floor(t) rounds up to 1.0 for tiny negative t; clamp to keep Psi < 1/2
_BELOW_ONE = math.nextafter(1.0, 0.0)


def sawtooth(t: float) -> float:
    """Psi(t) = t - floor(t) - 1/2."""
    return min(t - math.floor(t), _BELOW_ONE) - 0.5


def sawtooth_array(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return np.minimum(t - np.floor(t), _BELOW_ONE) - 0.5


def dist_to_int(t: float) -> float:
    """||t||, distance to the nearest integer."""
    return abs(t - round(t))


def e(t: float) -> complex:
    """e(t) = exp(2 pi i t), with the argument reduced mod 1 first."""
    f = t - math.floor(t)
    return complex(math.cos(2 * math.pi * f), math.sin(2 * math.pi * f))


# --- Vaaler ------------------------------------------------------------------

def _phi(u: float) -> float:
    au = abs(u)
    if au == 0:
        return 1.0
    return math.pi * u * (1 - au) / math.tan(math.pi * u) + au


@dataclass(frozen=True)
class VaalerApprox:
    H: int
    a: dict  # h -> complex, 0 < |h| <= H
    b: dict  # h -> float, |h| <= H

    def approx(self, t) -> np.ndarray:
        """sum_{0<|h|<=H} a_h e(th); real because a_{-h} = conj(a_h)."""
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for h in range(1, self.H + 1):
            # a_h e(th) + a_{-h} e(-th) = 2 Re(a_h e(th)) = -2 Im(a_h) sin(2 pi h t)
            out -= 2.0 * self.a[h].imag * np.sin(2 * np.pi * h * t)
        return out

    def majorant(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        out = np.full_like(t, self.b[0])
        for h in range(1, self.H + 1):
            out += 2.0 * self.b[h] * np.cos(2 * np.pi * h * t)
        return out

    def error(self, t) -> np.ndarray:
        return np.abs(sawtooth_array(t) - self.approx(t))

    def rows(self):
        for h in range(-self.H, self.H + 1):
            ah = self.a.get(h, 0j)
            yield h, ah.real, ah.imag, self.b[h]


def vaaler_coefficients(H: int) -> VaalerApprox:
    if H < 1:
        raise ValueError("H must be >= 1")
    a, b = {}, {}
    for h in range(-H, H + 1):
        u = h / (H + 1)
        b[h] = (1 - abs(u)) / (2 * H + 2)
        if h:
            a[h] = 1j * _phi(u) / (2 * math.pi * h)
    return VaalerApprox(H, a, b)


def vaaler_grid_check(H: int, points: int = 10_000, slack: float = 1e-12) -> dict:
    """Evaluate the two-sided inequality on a uniform grid of [0, 1)."""
    v = vaaler_coefficients(H)
    t = np.arange(points) / points
    err = v.error(t)
    maj = v.majorant(t)
    return {
        "H": H,
        "points": points,
        "violations": int(np.count_nonzero(err > maj + slack)),
        "min_majorant": float(maj.min()),
        "max_error": float(err.max()),
        "mean_error": float(err.mean()),
        "max_a_h_times_h": max(abs(v.a[h]) * abs(h) for h in v.a),
        "max_b_h_times_H": max(v.b.values()) * H,
    }


# --- Selberg weights ----------------------------------------------------------

def _squarefree_phi(limit: int):
    """mu^2(n) and phi(n) for 0 <= n <= limit."""
    phi = np.arange(limit + 1, dtype=np.int64)
    sqf = np.ones(limit + 1, dtype=bool)
    sqf[0] = False
    for p in range(2, limit + 1):
        if phi[p] == p:  # p prime
            phi[p::p] -= phi[p::p] // p
            sqf[p * p :: p * p] = False
    return sqf, phi


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class SelbergWeights:
    D: int
    lam: dict  # squarefree d <= D -> lambda_d
    rho: dict  # d <= D^2 with rho_d != 0
    G: float  # sum_{n <= D} mu^2(n)/phi(n)

    def divisor_sum(self, n: int) -> float:
        """sum_{d | n} lambda_d."""
        return math.fsum(l for d, l in self.lam.items() if n % d == 0)

    def quadratic_form(self) -> float:
        """sum_{d1, d2} lambda_d1 lambda_d2 / [d1, d2]  (= 1/G at the optimum)."""
        return math.fsum(r / d for d, r in self.rho.items())

    def rho_constant(self) -> float:
        """Measured max |rho_d| / 3^omega(d)."""
        return max(abs(r) / 3 ** omega(d) for d, r in self.rho.items())


def selberg_weights(D: int) -> SelbergWeights:
    """Optimal Selberg weights for sifting by all primes, level D.

    lambda_d = mu(d) * d/phi(d) * G_d(D/d) / G(D), where G_d(y) sums
    mu^2(m)/phi(m) over m <= y coprime to d.
    """
    if D < 3:
        raise ValueError("D must be >= 3")
    sqf, phi = _squarefree_phi(D)
    inv_phi = np.where(sqf, 1.0 / np.maximum(phi, 1), 0.0)
    G = math.fsum(inv_phi[1:].tolist())
    lam = {}
    for d in range(1, D + 1):
        if not sqf[d]:
            continue
        ps = _prime_factors(d)
        y = D // d
        mask = np.ones(y + 1, dtype=bool)
        for p in ps:
            mask[::p] = False
        Gd = math.fsum(inv_phi[1 : y + 1][mask[1:]].tolist())
        mu = -1 if len(ps) % 2 else 1
        lam[d] = mu * (d / phi[d]) * Gd / G
    lam[1] = 1.0
    rho_terms: dict[int, list] = {}
    items = sorted(lam.items())
    for d1, l1 in items:
        for d2, l2 in items:
            l = d1 * d2 // math.gcd(d1, d2)
            rho_terms.setdefault(l, []).append(l1 * l2)
    rho = {d: math.fsum(v) for d, v in sorted(rho_terms.items())}
    return SelbergWeights(D, lam, rho, G)


def selberg_check(D: int) -> dict:
    w = selberg_weights(D)
    qf = w.quadratic_form()
    primes = [n for n in range(D + 1, 2 * D + 1) if all(n % p for p in range(2, math.isqrt(n) + 1))]
    return {
        "D": D,
        "lambda_1": w.lam[1],
        "max_abs_lambda": max(abs(v) for v in w.lam.values()),
        "max_support": max(w.lam),
        "quadratic_form": qf,
        "inverse_G": 1.0 / w.G,
        "inverse_log_D": 1.0 / math.log(D),
        "max_rho_support": max(w.rho),
        "rho_constant": w.rho_constant(),
        "prime_divisor_sums_ok": all(abs(w.divisor_sum(n) ** 2 - 1) < 1e-12 for n in primes),
    }


# --- exponential sums -------------------------------------------------------

def exp_sum_direct(phase: Callable[[int], object], a: int, b: int) -> complex:
    """sum_{a < n <= b} e(phase(n)).

    ``phase`` may return an mpmath number; its integer part is removed in that
    precision before the double-precision cos/sin, so large phases lose nothing.
    """
    if a >= b:
        raise ValueError("need a < b")
    re, im = [], []
    for n in range(a + 1, b + 1):
        f = phase(n)
        frac = float(f - mpmath.floor(f)) if isinstance(f, mpmath.mpf) else f - math.floor(f)
        re.append(math.cos(2 * math.pi * frac))
        im.append(math.sin(2 * math.pi * frac))
    return complex(math.fsum(re), math.fsum(im))


def exp_sum_mp(phase: Callable[[int], object], a: int, b: int, dps: int = 40) -> complex:
    """Same sum entirely in mpmath at ``dps`` digits (reference evaluation)."""
    with mpmath.workdps(dps):
        s = mpmath.mpc(0)
        for n in range(a + 1, b + 1):
            s += mpmath.expjpi(2 * mpmath.mpf(phase(n)))
        return complex(s)


def vdc_bound(k: int, a: int, b: int, lambda_k: float) -> float:
    """(b-a) lambda^(1/(2K-2)) + (b-a)^(1-2/K) lambda^(-1/(2K-2)), K = 2^(k-1)."""
    if not 2 <= k <= 4:
        raise ValueError("k must be in [2, 4]")
    if b - a < 1:
        raise ValueError("need b - a >= 1")
    K = 2 ** (k - 1)
    L = b - a
    return L * lambda_k ** (1 / (2 * K - 2)) + L ** (1 - 2 / K) * lambda_k ** (-1 / (2 * K - 2))


def sieve_parameters(N: int, C: float, c) -> dict:
    """Sieve level D = N^(1/(8(C+1)2^C)), H = D^3 and derivative order k = floor(c + 2)."""
    c = as_exponent(c)
    D = N ** (1.0 / (8 * (C + 1) * 2**C))
    return {"D": D, "H": D**3, "k": math.floor(c.value + 2)}


def phase_range(N: int, c, d: int, m_lo: int) -> tuple[int, int]:
    """(a, b] = (m_lo, min(2 m_lo, N^(1/c)/d)] as integers."""
    c = as_exponent(c)
    # largest m with m^c d^c <= N, i.e. (md)^c <= N
    from .exactpow import floor_pow
    top = floor_pow(N, c.reciprocal()).floor_value // d
    return m_lo, min(2 * m_lo, top)


def proposition_phase_sum(N: int, c, d: int, t: int, h: int, m_lo: int) -> complex:
    """sum over m in (m_lo, min(2 m_lo, N^(1/c)/d)] of e(m^c d^c h / t)."""
    c = as_exponent(c)
    if h == 0:
        raise ValueError("h must be nonzero")
    if m_lo < 1:
        raise ValueError("m_lo must be >= 1")
    a, b = phase_range(N, c, d, m_lo)
    if b <= a:
        return 0j
    m = np.arange(a + 1, b + 1, dtype=np.float64)
    if c.is_integer:
        # integer exponent: reduce the phase exactly modulo 1
        num = [(mm ** c.num * d ** c.num * h) % t for mm in range(a + 1, b + 1)]
        f = np.array(num, dtype=np.float64) / t
    else:
        f = (m * d) ** float(c) * (h / t)
        f -= np.floor(f)
    z = np.exp(2j * np.pi * f)
    return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))


def phase_second_derivative_min(N: int, c, d: int, t: int, h: int, m_lo: int) -> float:
    """min |f''| over the range for f(m) = (md)^c h/t (c < 2)."""
    c = as_exponent(c)
    a, b = phase_range(N, c, d, m_lo)
    cf = float(c)
    coeff = abs(cf * (cf - 1)) * d**cf * abs(h) / t
    # |f''| = coeff m^(c-2) is decreasing for c < 2, smallest at the top
    return coeff * float(b) ** (cf - 2)
