import functools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st
from scipy.integrate import quad

from psprimes import density, primal, pscount
from psprimes.density import ActiveInterval, LogRatio
from oracles import int_floor_pow


def test_log_ratio_comparisons():
    assert LogRatio(4, 16) .cmp(Fraction(1, 2)) == 0
    assert LogRatio(5, 16) > Fraction(1, 2)
    assert LogRatio(3, 16) < "1/2"
    assert LogRatio(3, 11) < LogRatio(4, 11)
    assert LogRatio(2, 3) > LogRatio(3, 7)  # 0.6309 vs 0.5646
    assert LogRatio(2, 4).cmp(LogRatio(3, 9)) == 0


def test_breakpoints_contains_known_interval():
    ivs = density.breakpoints_upsilon(10, "0.4", "0.6")
    hit = [iv for iv in ivs if iv.p == 11 and iv.r == 3]
    assert len(hit) == 1
    iv = hit[0]
    assert iv.c_lo == LogRatio(3, 11) and iv.c_hi == LogRatio(4, 11)
    assert float(iv.c_lo) == pytest.approx(0.4581, abs=1e-4)
    assert float(iv.c_hi) == pytest.approx(0.5781, abs=1e-4)


def test_breakpoints_empty_for_n_2():
    assert density.breakpoints_upsilon(2, "0.3", "0.7") == []


def test_breakpoints_all_certify_small_n():
    ivs = density.breakpoints_upsilon(10, "0.4", "0.6")
    assert ivs and all(iv.certify() for iv in ivs)
    ivs = density.breakpoints_upsilon(100, "0.4", "0.9")
    for iv in ivs[:: max(1, len(ivs) // 400)]:
        assert iv.certify()


def test_bad_interval_fails_certification():
    assert not ActiveInterval(LogRatio(3, 11), LogRatio(4, 11), 11, 2).certify()
    assert not ActiveInterval(LogRatio(4, 11), LogRatio(3, 11), 11, 3).certify()


def _brute_pairs(N, A, B):
    u_a, v_a = A.numerator, A.denominator
    u_b, v_b = B.numerator, B.denominator
    p_top = int(N ** (1 / float(A))) + 2
    ps = list(sympy.primerange(2, p_top))
    n = 0
    for q in sympy.primerange(2, N):
        r = N - q
        for p in ps:
            # [log r/log p, log(r+1)/log p) meets [A, B]: r < p^B and p^A < r+1
            if r**v_b < p**u_b and p**u_a < (r + 1) ** v_a:
                n += 1
    return n


def test_active_pair_count_brute_force():
    assert density.count_active_pairs(100, "0.4", "0.9") == _brute_pairs(100, Fraction(2, 5), Fraction(9, 10))
    assert len(density.breakpoints_upsilon(100, "0.4", "0.9")) == density.count_active_pairs(100, "0.4", "0.9")


def test_active_pair_count_n_1000():
    # float comparisons with an exact integer recheck near ties
    N, A, B = 1000, Fraction(2, 5), Fraction(9, 10)
    ps = np.flatnonzero(primal.prime_flags(int(N ** 2.5) + 2))
    logp = np.log(ps.astype(float))
    total = 0
    for q in sympy.primerange(2, N):
        r = N - q
        lo = math.log(r) - float(B) * logp    # < 0 wanted
        hi = float(A) * logp - math.log(r + 1)  # < 0 wanted
        ok = (lo < -1e-9) & (hi < -1e-9)
        unsure = ~ok & ((np.abs(lo) < 1e-9) | (np.abs(hi) < 1e-9))
        total += int(ok.sum())
        for p in ps[unsure].tolist():
            total += r**10 < p**9 and p**2 < (r + 1) ** 5
    assert density.count_active_pairs(N, "0.4", "0.9") == total


@pytest.mark.parametrize("c, N", [("1/2", 10), ("0.7", 50), ("1/3", 30)])
def test_f_density_arithmetic(c, N):
    count = pscount.upsilon(c, N, "count-p").count
    cf = float(Fraction(c) if "/" in c else Fraction(c))
    expected = count * math.log(N) ** 2 / (cf * N ** (1 / cf))
    assert density.f_density(c, N) == pytest.approx(expected, rel=1e-12)


def test_f_density_trivial_and_tiny_c():
    assert density.f_density("1/2", 2) == 0
    norm = density.density_normaliser("0.05", 100)
    assert math.isfinite(float(norm)) and float(norm) == pytest.approx(0.05 * 1e40 / math.log(100) ** 2, rel=1e-12)
    # the count itself would need every prime below 99**20
    with pytest.raises(primal.RangeTooLargeError):
        density.f_density("0.05", 100)


@pytest.mark.parametrize("c, a, x, expected_count", [("1/2", 0, 20, 4), ("1/2", 0, 1, 0), ("1/2", 1, 20, 4)])
def test_f_shift_density(c, a, x, expected_count):
    expected = expected_count * 0.5 * math.log(x) ** 2 / x if x > 1 else 0.0
    assert density.f_shift_density(c, a, x) == pytest.approx(expected)


@functools.lru_cache(maxsize=None)
def _intervals_04_09(N):
    return density.breakpoints_upsilon(N, "0.4", "0.9")


@given(st.integers(5, 150), st.fractions(Fraction(2, 5), Fraction(9, 10), max_denominator=997))
@settings(max_examples=100, deadline=None)
def test_coverage_equivalence(N, c):
    # pieces are half-open, so c = B itself is never covered
    assume(c < Fraction(9, 10))
    ivs = _intervals_04_09(N)
    cf = float(c)
    near = [iv for iv in ivs if float(iv.c_lo) - 1e-9 <= cf < float(iv.c_hi) + 1e-9]
    inside = any(density._cmp_endpoints(iv.c_lo, c) <= 0 < density._cmp_endpoints(iv.c_hi, c) for iv in near)
    assert (density.f_density(c, N) > 0) == inside


def test_kernel_against_quad():
    rng = np.random.default_rng(7)
    L = math.log(1000)
    lo = rng.uniform(0.3, 0.9, 300)
    width = 10.0 ** rng.uniform(-9, -0.5, 300)
    hi = lo + width
    got = density.kernel_integral(lo, hi, L)
    for a, b, g in zip(lo, hi, got):
        ref = quad(lambda c: math.exp(-L / c) / c, a, b, epsabs=0, epsrel=1e-12)[0]
        assert g == pytest.approx(ref, rel=1e-8)


def test_integrate_f_matches_per_interval_quadrature():
    N = 10
    L = math.log(N)
    ivs = density.breakpoints_upsilon(N, "0.4", "0.6")
    parts = [quad(lambda c: L * L * math.exp(-L / c) / c, float(iv.c_lo), float(iv.c_hi),
                  epsabs=0, epsrel=1e-10)[0] for iv in ivs]
    rep = density.integrate_f(N, "0.4", "0.6")
    assert rep.interval_count == len(ivs)
    assert rep.integral == pytest.approx(math.fsum(parts), rel=1e-8)
    assert rep.integral == pytest.approx(density.riemann_integral_f(N, "0.4", "0.6"), rel=1e-2)


def test_integrate_f_trivial():
    rep = density.integrate_f(2, "0.4", "0.6")
    assert rep.integral == 0 and rep.abs_dev == pytest.approx(0.2)


@pytest.mark.parametrize("N", [10, 100, 300])
def test_exact_vs_sampled(N):
    exact = density.integrate_f(N, "0.4", "0.9").integral
    sampled = density.riemann_integral_f(N, "0.4", "0.9")
    assert abs(exact - sampled) <= 1e-2 * exact


def test_integrate_f_guard_for_large_n():
    with pytest.raises(primal.RangeTooLargeError):
        density.integrate_f(10**4, "0.4", "0.9")


def test_integrate_f_shift_small():
    rep = density.integrate_f_shift(20, 0, "0.4", "0.6")
    sampled = density.riemann_integral_f_shift(20, 0, "0.4", "0.6")
    assert abs(rep.integral - sampled) <= 1e-2 * rep.integral
    rep = density.integrate_f_shift(1, 0, "0.4", "0.6")
    assert rep.integral == 0 and rep.abs_dev == pytest.approx(0.2)


def test_integrate_f_shift_against_direct_enumeration():
    x, a, A, B = 300, 1, 0.4, 0.86
    total = 0.0
    for p in sympy.primerange(2, x + 1):
        for q in sympy.primerange(2, int(p**B) + 2):
            r = q + a
            lo = max(A, math.log(r) / math.log(p))
            hi = min(B, math.log(r + 1) / math.log(p))
            if hi > lo:
                total += (hi * hi - lo * lo) / 2
    expected = total * math.log(x) ** 2 / x
    assert density.integrate_f_shift(x, a, "0.4", "0.86").integral == pytest.approx(expected, rel=1e-12)


def test_bounds_validation():
    with pytest.raises(ValueError):
        density.integrate_f(100, "0.6", "0.4")
    with pytest.raises(ValueError):
        density.integrate_f_shift(100, 0, "0.5", "1")


def test_report_row():
    rep = density.integrate_f_shift(100, 0, "0.4", "0.86")
    assert rep.HEADER == ("N_or_x", "A", "B", "integral", "target", "abs_dev", "interval_count")
    assert rep.abs_dev == abs(rep.integral - rep.target)
    assert rep.target == pytest.approx(0.46)
