import math
import os

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from psprimes import zeta

HERE = os.path.dirname(__file__)
BIG_TABLE = os.path.join(HERE, "data", "zeros_10000.txt")


@pytest.fixture(scope="module")
def fixture():
    return zeta.fixture_zeros()


def test_fixture_against_mpmath(fixture):
    assert fixture.count == 100
    for k in (1, 2, 50, 100):
        assert fixture.gammas[k - 1] == pytest.approx(float(mpmath.zetazero(k).imag), abs=1e-9)


def test_load_zeros(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("# three zeros\n14.134725\n21.022040\n\n25.010858\n")
    assert zeta.load_zeros(str(p)).count == 3
    p.write_text("")
    assert zeta.load_zeros(str(p)).count == 0
    p.write_text("21.0\n14.1\n")
    with pytest.raises(zeta.ZeroTableError, match=":2:"):
        zeta.load_zeros(str(p))
    p.write_text("14.1\nfoo\n")
    with pytest.raises(zeta.ZeroTableError, match=":2:"):
        zeta.load_zeros(str(p))


def test_empty_table_is_unusable(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("")
    empty = zeta.load_zeros(str(p))
    with pytest.raises(zeta.ZeroTableError):
        zeta.psi_explicit(10.5, 20, empty)
    with pytest.raises(zeta.ZeroTableError):
        zeta.count_zeros(0.5, 20, empty)


def test_psi_explicit_small_x(fixture):
    r = zeta.psi_explicit(1.5, 30, fixture)
    assert r.direct == 0
    assert r.abs_error < r.r_budget
    assert r.zero_terms_used == 3  # 14.13, 21.02, 25.01; the next is 30.42


def test_psi_explicit_direct_value(fixture):
    r = zeta.psi_explicit(10.5, 50, fixture)
    assert r.direct == pytest.approx(3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7))
    assert r.abs_error == pytest.approx(abs(r.value - r.direct))


def test_psi0_midpoint_at_prime_power():
    assert zeta.psi0_direct(8) == pytest.approx(
        3 * math.log(2) + math.log(3) + math.log(5) + math.log(7) - 0.5 * math.log(2))


def test_zero_sum_pairs_conjugates(fixture):
    x = 30.5
    tab = fixture.up_to(40)
    with mpmath.workdps(30):
        both = sum(mpmath.power(x, r) / r
                   for g in tab.gammas for r in (mpmath.mpc(0.5, g), mpmath.mpc(0.5, -g)))
    assert zeta.zero_sum(x, tab) == pytest.approx(float(both.real), abs=1e-12)
    assert abs(float(both.imag)) < 1e-12


def test_psi_explicit_errors(fixture):
    with pytest.raises(ValueError):
        zeta.psi_explicit(1.0, 30, fixture)
    with pytest.raises(ValueError):
        zeta.psi_explicit(10.5, 1.5, fixture)
    with pytest.raises(zeta.TableExhaustedError):
        zeta.psi_explicit(10.5, 1000, fixture)


@pytest.mark.parametrize("x", [10.5, 50.5, 100.5, 500.5])
def test_error_within_budget(fixture, x):
    r = zeta.psi_explicit(x, fixture.max_gamma, fixture)
    assert r.abs_error <= 10 * r.r_budget


# The truncation error oscillates in T, so three-point monotonicity holds
# for some x and not others.
T_STEPS = (30, 100, 236.5)


def _monotone_within(errs, slack=1.2):
    return all(b <= a * slack for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize("x", [
    10.5,
    100.5,
    pytest.param(50.5, marks=pytest.mark.xfail(strict=True, reason="error oscillates with T")),
    pytest.param(500.5, marks=pytest.mark.xfail(strict=True, reason="error oscillates with T")),
])
def test_error_roughly_monotone_in_T(fixture, x):
    errs = [zeta.psi_explicit(x, T, fixture).abs_error for T in T_STEPS]
    assert _monotone_within(errs)


@pytest.mark.skipif(not os.path.exists(BIG_TABLE), reason="large zero table not generated")
def test_larger_table_improves_at_100_5():
    big = zeta.load_zeros(BIG_TABLE)
    e500 = zeta.psi_explicit(100.5, 500, big).abs_error
    e1000 = zeta.psi_explicit(100.5, 1000, big).abs_error
    assert e1000 < e500


def test_distance_to_prime_power():
    assert zeta.distance_to_prime_power(10.5) == 0.5
    assert zeta.distance_to_prime_power(8) == 1  # 7 and 9
    assert zeta.distance_to_prime_power(1.5) == 0.5
    assert zeta.distance_to_prime_power(24) == 1  # 23 and 25


def test_count_zeros_examples(fixture):
    assert zeta.count_zeros(0.4, 14, fixture) == 0
    assert zeta.count_zeros(0.4, 15, fixture) == 1
    assert zeta.count_zeros(0.6, 1e9, fixture) == 0


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(1, 300), st.floats(1, 300))
@settings(max_examples=100, deadline=None)
def test_count_zeros_monotone(s1, s2, T1, T2):
    z = zeta.fixture_zeros()
    s_lo, s_hi = sorted((s1, s2))
    T_lo, T_hi = sorted((T1, T2))
    assert zeta.count_zeros(s_lo, T_hi, z) >= zeta.count_zeros(s_hi, T_hi, z)
    assert zeta.count_zeros(s_lo, T_lo, z) <= zeta.count_zeros(s_lo, T_hi, z)


def test_gm_bound():
    assert zeta.gm_bound(1, 100) == 1
    assert zeta.gm_bound(0.5, 100) == pytest.approx(100 ** (15 / 13))
    assert zeta.gm_bound(0.9, 1e6) == pytest.approx(10 ** (18 / 13))


def test_zero_free_margin(fixture):
    tau = 16.1347
    expected = 1 - math.log(tau) ** (-2 / 3) * math.log(math.log(tau)) ** (-1 / 3)
    assert zeta.zero_free_margin(14.1347, 1.0) == pytest.approx(expected)
    assert zeta.zero_free_margin(14.1347, 1.0) == pytest.approx(0.498, abs=1e-3)
    with pytest.raises(ValueError):
        zeta.zero_free_margin(0.5, 1.0)
    for g, b in zip(fixture.gammas, fixture.betas):
        assert b <= zeta.zero_free_margin(g, 0.05)


def test_result_row(fixture):
    r = zeta.psi_explicit(10.5, 50, fixture)
    assert r.HEADER == ("x", "T", "value", "direct", "abs_error", "r_budget")
    assert len(r.row()) == 6
