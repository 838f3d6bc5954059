import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from psprimes import analytic
from psprimes.primal import omega


@pytest.mark.parametrize("t, expected", [(0.25, -0.25), (1.0, -0.5), (3.7, 0.2), (-0.25, 0.25)])
def test_sawtooth(t, expected):
    assert analytic.sawtooth(t) == pytest.approx(expected, abs=1e-15)


@given(st.floats(-1e6, 1e6))
def test_sawtooth_range(t):
    assert -0.5 <= analytic.sawtooth(t) < 0.5


# --- Vaaler ---------------------------------------------------------------------

@pytest.mark.parametrize("H", [1, 4, 16, 64])
def test_vaaler_two_sided_on_grid(H):
    r = analytic.vaaler_grid_check(H, points=1000 if H == 1 else 10_000)
    assert r["violations"] == 0
    assert r["min_majorant"] >= -1e-12


def test_vaaler_at_point():
    v = analytic.vaaler_coefficients(16)
    t = 0.37
    assert float(v.error(t)) <= float(v.majorant(t))


@pytest.mark.parametrize("H", [1, 2, 5, 16, 64, 200])
def test_vaaler_coefficient_constants(H):
    v = analytic.vaaler_coefficients(H)
    for h, a in v.a.items():
        assert abs(a) <= analytic.C_A / abs(h) + 1e-15
        assert v.a[-h] == a.conjugate()
    for b in v.b.values():
        assert 0 <= b <= analytic.C_B / H + 1e-15


def test_vaaler_majorant_is_scaled_fejer_kernel():
    H = 10
    v = analytic.vaaler_coefficients(H)
    t = np.linspace(0.013, 0.987, 200)
    fejer = (np.sin(np.pi * (H + 1) * t) / np.sin(np.pi * t)) ** 2 / (H + 1)
    assert np.allclose(v.majorant(t), fejer / (2 * H + 2), atol=1e-13)


def test_vaaler_mean_error_shrinks_like_one_over_H():
    errs = [analytic.vaaler_grid_check(H)["mean_error"] for H in (4, 16, 64)]
    for H, e in zip((4, 16, 64), errs):
        # the L1 error is at most the mean of the majorant, which is b_0 = 1/(2H+2)
        assert e <= 1 / (2 * H + 2) + 1e-12
    assert errs[0] > errs[1] > errs[2]


def test_vaaler_max_error_is_the_jump():
    # at t = 0 the sawtooth jumps by 1 while the polynomial is 0
    for H in (4, 64):
        assert analytic.vaaler_grid_check(H)["max_error"] == pytest.approx(analytic.JUMP_ERROR)


def test_vaaler_rows():
    rows = list(analytic.vaaler_coefficients(2).rows())
    assert [r[0] for r in rows] == [-2, -1, 0, 1, 2]
    assert rows[2][1:3] == (0.0, 0.0)


# --- Selberg --------------------------------------------------------------------

@pytest.mark.parametrize("D", [3, 10, 100, 1000])
def test_selberg_invariants(D):
    w = analytic.selberg_weights(D)
    assert w.lam[1] == 1.0
    assert all(abs(v) <= 1 + 1e-12 for v in w.lam.values())
    assert max(w.lam) <= D
    assert max(w.rho) <= D * D
    assert w.quadratic_form() == pytest.approx(1 / w.G, rel=1e-9)
    if D >= 10:
        assert w.quadratic_form() < 1 / math.log(D)
    for d, r in w.rho.items():
        assert abs(r) <= 3 ** omega(d) + 1e-9


@pytest.mark.parametrize("D", [3, 10, 100])
def test_selberg_primes_above_level(D):
    w = analytic.selberg_weights(D)
    for n in range(D + 1, 2 * D + 1):
        if all(n % p for p in range(2, math.isqrt(n) + 1)):
            assert w.divisor_sum(n) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_selberg_rho_brute_force():
    w = analytic.selberg_weights(30)
    ds = list(w.lam)
    for d in (1, 2, 6, 30, 35, 210):
        expected = math.fsum(w.lam[a] * w.lam[b] for a in ds for b in ds
                             if a * b // math.gcd(a, b) == d)
        assert w.rho.get(d, 0.0) == pytest.approx(expected, abs=1e-12)


def test_selberg_rejects_small_level():
    with pytest.raises(ValueError):
        analytic.selberg_weights(2)


# --- exponential sums ---------------------------------------------------------------

def test_exp_sum_trivial():
    assert analytic.exp_sum_direct(lambda n: 0, 0, 5) == pytest.approx(5)
    assert abs(analytic.exp_sum_direct(lambda n: n / 2, 0, 2)) < 1e-12


def test_exp_sum_against_high_precision():
    with mpmath.workdps(40):
        s2 = mpmath.sqrt(2)
        phase = lambda n: n * s2
        direct = analytic.exp_sum_direct(phase, 0, 100)
        ref = analytic.exp_sum_mp(phase, 0, 100, dps=40)
    assert abs(direct - ref) <= 1e-9 * 100


def test_exp_sum_large_phase_reduction():
    # phase values near 1e12 lose nothing when reduced in mpmath first
    with mpmath.workdps(50):
        phase = lambda n: mpmath.mpf(10) ** 12 * mpmath.sqrt(n)
        direct = analytic.exp_sum_direct(phase, 0, 200)
        ref = analytic.exp_sum_mp(phase, 0, 200, dps=50)
    assert abs(direct - ref) <= 1e-9 * 200


@given(st.floats(0.001, 10), st.integers(0, 100), st.integers(1, 300))
@settings(max_examples=50, deadline=None)
def test_exp_sum_triangle(alpha, a, length):
    s = analytic.exp_sum_direct(lambda n: alpha * n * n, a, a + length)
    assert abs(s) <= length + 1e-9


def test_vdc_bound_examples():
    assert analytic.vdc_bound(2, 0, 100, 1e-4) == pytest.approx(101)
    lam = 1e-3
    assert analytic.vdc_bound(3, 0, 100, lam) == pytest.approx(100 * lam ** (1 / 6) + 10 * lam ** (-1 / 6))
    assert analytic.vdc_bound(2, 0, 10**4, 1e-6) == pytest.approx(1010)
    with pytest.raises(ValueError):
        analytic.vdc_bound(5, 0, 10, 1.0)


def test_phase_sum_integer_exponent_is_range_length():
    # c = 1 and t | h: every phase is an integer
    s = analytic.proposition_phase_sum(10**4, "1", 1, 3, 3, 50)
    assert s == pytest.approx(50)


def test_phase_sum_matches_direct_sum():
    N, c, d, t, h, m_lo = 10**4, "1/2", 1, 3, 1, 50
    a, b = analytic.phase_range(N, c, d, m_lo)
    assert (a, b) == (50, 100)
    with mpmath.workdps(30):
        ref = analytic.exp_sum_mp(lambda m: mpmath.sqrt(m) * h / t, a, b)
    got = analytic.proposition_phase_sum(N, c, d, t, h, m_lo)
    assert abs(got - ref) < 1e-9
    lam = analytic.phase_second_derivative_min(N, c, d, t, h, m_lo)
    assert abs(got) <= 10 * analytic.vdc_bound(2, a, b, lam)


def test_phase_sum_empty_range():
    assert analytic.proposition_phase_sum(100, "1/2", 1, 3, 1, 10**5) == 0


def test_sieve_parameters():
    p = analytic.sieve_parameters(10**8, 1.0, "1/2")
    assert p["k"] == 2
    assert p["D"] == pytest.approx(10 ** (8 / 32))
    assert p["H"] == pytest.approx(p["D"] ** 3)
    assert analytic.sieve_parameters(10**8, 1.0, "3/2")["k"] == 3
