import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperinv.errors import BetaPole, LengthMismatch, OutsideRadius, XZero
from hyperinv.genfun import (
    egf_S,
    egf_S_direct,
    ogf_S_from_T,
    ogf_T_from_S,
    omega_closed,
    omega_closed_series,
    omega_series,
    polya_szego_series,
    psi_nu,
    sigma_closed,
    sigma_coefficient,
    sigma_root_test,
    sigma_series,
    theta_coefficients,
    theta_newton,
    theta_residual,
    theta_series,
    u_kernel,
    u_kernel_closed,
    xi_series,
    xi_value,
)
from hyperinv.invpair import Params, apply, build_A, build_B
from hyperinv.numfield import DOUBLE, EXACT, float_mode
from hyperinv.powerseries import Series, binom_pow, compose

from conftest import off_negative_integers, rationals

THETA_NU_M1_W02 = 1.3819660112501051518  # (1 - sqrt(0.2)) / 0.4


def geometric(order, ratio=1):
    return Series([Fraction(ratio) ** n for n in range(order + 1)], EXACT)


# Xi and Omega


@given(rationals(), rationals())
def test_xi_leading_terms(x, nu):
    xi = xi_series(x, nu, 6)
    assert xi[0] == 0 and xi[1] == -1


@given(rationals())
def test_xi_special_cases(x):
    assert xi_series(x, 0, 8) == Series([0] + [-1] * 8, EXACT)
    nu = Fraction(2, 3)
    one_minus = Series([1, -1] + [0] * 8, EXACT)
    z_over = Series([0] + [-1] * 9, EXACT)  # z/(z-1)
    assert xi_series(1, nu, 9) == z_over * binom_pow(one_minus, nu)


def test_xi_series_matches_scalar():
    x, nu, z = 0.35, -0.8, 0.1 + 0.05j
    s = xi_series(x, nu, 40, DOUBLE)
    assert abs(s(z) - xi_value(x, nu, z)) < 1e-14


@given(rationals(-2, 2).filter(lambda q: q != 0), rationals(-2, 2))
def test_omega_reversion_matches_closed_form(x, nu):
    om = omega_series(x, nu, 12)
    assert om == omega_closed_series(x, nu, 12)
    assert om[1] == -1
    assert compose(xi_series(x, nu, 12), om) == Series.variable(12, EXACT)


@given(rationals(-2, 2).filter(lambda q: q != 0))
def test_omega_nu_zero(x):
    assert omega_series(x, 0, 10) == Series([0] + [-1] * 10, EXACT)


def test_omega_closed_examples():
    assert omega_closed(0.4, -0.5, 0) == 0
    xi = 0.3 - 0.2j
    assert abs(omega_closed(0.6, 0, xi) - xi / (xi - 1)) < 1e-14
    with pytest.raises(XZero):
        omega_closed(0, 0.5, 0.1)
    with pytest.raises(OutsideRadius):
        omega_closed(0.5, -1, 0.5)  # R(-1) = 1/4 so |x xi| must stay below 0.2375


def test_omega_closed_inverts_xi():
    rng = random.Random(11)
    for _ in range(100):
        x = rng.uniform(-1.5, 1.5)
        if abs(x) < 0.05:
            continue
        nu = rng.choice([-2.0, -1.0, -0.5, 0.3, 0.7, 1.5])
        reach = 0.8 * psi_nu(nu).radius / abs(x)
        xi = reach * rng.random() * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        om = omega_closed(x, nu, xi)
        assert abs(xi_value(x, nu, om) - xi) < 1e-10


# radius


def test_psi_nu_examples():
    r = psi_nu(0)
    assert r.psi_value == 0 and r.radius == 1
    r = psi_nu(0.5)
    assert abs(r.psi_value - math.log(0.5)) < 1e-15 and abs(r.radius - 2) < 1e-14
    r = psi_nu(-1)
    assert abs(r.psi_value - 2 * math.log(2)) < 1e-15 and abs(r.radius - 0.25) < 1e-15
    assert psi_nu(1).radius == 1
    assert psi_nu(2 + 1j).branch == "complex"
    assert psi_nu(-1).branch == "complex"
    assert psi_nu(0.3).branch == "0<=nu<1"
    assert psi_nu(1.5).branch == "nu>=1"
    for nu in (-2, 0.3, 1.5, 2 + 1j):
        r = psi_nu(nu)
        assert r.radius == pytest.approx(abs(cmath.exp(-r.psi_value)), rel=1e-15)


@pytest.mark.parametrize("nu", [-2, -1, -0.5, 1.5, 2 + 1j])
def test_root_test_at_400(nu):
    assert sigma_root_test(nu, 400) * psi_nu(nu).radius == pytest.approx(1, abs=0.02)


@pytest.mark.parametrize("nu", [0.3, 0.7])
def test_root_test_when_sigma_400_vanishes(nu):
    assert sigma_root_test(nu, 400) == 0
    assert sigma_root_test(nu, 400, window=10) * psi_nu(nu).radius == pytest.approx(1, abs=0.02)


# Theta and Sigma


@given(rationals(-2, 2), st.integers(0, 10))
def test_theta_routes_agree(nu, order):
    assert theta_series(nu, order) == theta_coefficients(nu, order)


def test_theta_examples():
    assert theta_series(1, 6) == Series([1, 1, 0, 0, 0, 0, 0], EXACT)
    assert theta_series(0, 6) == geometric(6)
    for nu in (Fraction(-3, 2), Fraction(1, 3), 2):
        assert theta_series(nu, 5)[0] == 1


@given(rationals(-2, 2), rationals(-2, 2))
def test_polya_szego(a, nu):
    th = theta_series(nu, 8)
    assert polya_szego_series(a, nu, 8) == th ** (a + 1) / (nu * th + 1 - nu)


def test_sigma_series_examples():
    assert list(sigma_series(-1, 5).coeffs) == [0, 1, 3, 10, 35, 126]
    for b in range(1, 8):
        assert sigma_coefficient(Fraction(-1), b) == math.comb(2 * b - 1, b)
    # nu = 1: Sigma = w / (1 + w)
    assert list(sigma_series(1, 6).coeffs) == [0, 1, -1, 1, -1, 1, -1]
    assert list(sigma_series(0, 4).coeffs) == [0, 1, 1, 1, 1]
    for nu in (Fraction(2, 7), Fraction(-5, 3), 3):
        assert sigma_coefficient(nu, 1) == 1


@given(rationals(-2, 2), st.integers(1, 10))
def test_sigma_gamma_ratio(nu, b):
    # Gamma(b(1-nu)) / (Gamma(b) Gamma(1-b nu)) via the reciprocal gamma in 120-bit floats
    from hyperinv.numfield import gamma_recip

    m = float_mode(120)
    top = b * (1 - m.convert(nu))
    if abs(complex(top) - round(complex(top).real)) < 1e-20 and complex(top).real <= 0:
        return
    want = gamma_recip(m.convert(b)) * gamma_recip(1 - b * m.convert(nu)) / gamma_recip(top)
    assert abs(complex(want) - float(sigma_coefficient(nu, b))) <= 1e-12 * max(1, abs(complex(want)))


@given(rationals(-2, 2))
def test_sigma_closed_series_form(nu):
    th = theta_series(nu, 8)
    assert sigma_series(nu, 8) == (th - 1) / (nu * th + 1 - nu)


def test_theta_newton_examples():
    assert theta_newton(0.7, 0) == 1
    assert abs(theta_newton(0, 0.25) - Fraction(4, 3)) < 1e-15
    assert abs(theta_newton(-1, 0.2) - THETA_NU_M1_W02) < 1e-15
    with pytest.raises(OutsideRadius):
        theta_newton(-1, 0.24)


@pytest.mark.parametrize("nu", [-2, -0.5, 0.3, 0.7, 1.5, 2 + 1j])
def test_theta_newton_residual(nu):
    rng = random.Random(hash(str(nu)) & 0xFFFF)
    R = psi_nu(nu).radius
    for _ in range(34):
        w = 0.94 * R * rng.random() ** 0.5 * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        th = theta_newton(nu, w)
        assert theta_residual(nu, w, th) < 1e-13


def test_theta_newton_extended():
    m = float_mode(200)
    w = m.context.mpf("0.2")
    th = theta_newton(m.convert(-1), w, m)
    exact = (1 - m.context.sqrt(w)) / (2 * w)
    assert abs(th - exact) < m.context.mpf(2) ** -180


def test_sigma_closed_examples():
    assert sigma_closed(0.4, 0) == 0
    assert abs(sigma_closed(0, 0.5) - 1) < 1e-15
    partial = sum(math.comb(2 * b - 1, b) * 0.1**b for b in range(1, 200))
    assert abs(sigma_closed(-1, 0.1) - partial) < 1e-14
    with pytest.raises(OutsideRadius):
        sigma_closed(0.5, 1.95)


def test_sigma_series_sums_to_closed_form():
    rng = random.Random(3)
    for nu in (-2, -1, -0.5, 0.3, 0.7, 1.5, 2 + 1j):
        s = sigma_series(nu, 250, DOUBLE)
        R = psi_nu(nu).radius
        for _ in range(10):
            w = 0.8 * R * rng.random() * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            assert abs(s(w) - sigma_closed(nu, w)) < 1e-10


# kernel U


@given(rationals(), rationals(), rationals().filter(lambda q: q.denominator > 1), rationals(-1, 1))
def test_u_kernel_closed_form(a1, a2, a3, x):
    assert u_kernel(a1, a2, a3, 12, x) == u_kernel_closed(a1, a2, a3, 12, x)


@given(rationals(), rationals().filter(lambda q: q.denominator > 1), rationals(-1, 1))
def test_u_kernel_trivial_cases(a1, a3, x):
    base = binom_pow(Series([1, -1] + [0] * 7, EXACT), -1 - a1)
    assert u_kernel(a1, Fraction(1, 2), a3, 8, 0) == base
    assert u_kernel(a1, 0, a3, 8, x) == base


# OGF


@st.composite
def ogf_case(draw, order=10):
    x = draw(rationals(-2, 2))
    nu = draw(rationals())
    beta = draw(rationals().filter(lambda q: off_negative_integers(q, order)))
    gamma = draw(rationals().filter(lambda q: off_negative_integers(q, order)))
    T = draw(st.lists(rationals(-5, 5), min_size=order, max_size=order))
    return x, nu, beta, gamma, T


@given(ogf_case())
def test_ogf_relations_against_matrices(case):
    x, nu, beta, gamma, T = case
    p = Params(x, nu, gamma, beta, gamma)
    S = apply(build_B(p, 10), T)
    assert list(ogf_S_from_T(T, x, nu, beta, gamma, 10).coeffs) == [0] + S
    assert list(ogf_T_from_S(S, x, nu, beta, gamma, 10).coeffs) == [0] + T
    assert list(ogf_T_from_S(T, x, nu, beta, gamma, 10).coeffs) == [0] + apply(build_A(p, 10), T)


def test_ogf_zero_and_special_case():
    zero = [0] * 6
    assert all(c == 0 for c in ogf_S_from_T(zero, Fraction(1, 3), Fraction(1, 2), 1, 2, 6).coeffs)
    assert all(c == 0 for c in ogf_T_from_S(zero, Fraction(1, 3), Fraction(1, 2), 1, 2, 6).coeffs)
    T = [Fraction(k, k + 2) for k in range(1, 9)]
    g_t = Series([0] + T, EXACT)
    z_over = Series([0] + [-1] * 8, EXACT)
    want = geometric(8) * compose(g_t, z_over)
    assert ogf_S_from_T(T, Fraction(2, 5), 0, 0, 0, 8) == want


def test_ogf_needs_enough_terms():
    with pytest.raises(LengthMismatch):
        ogf_S_from_T([1, 2], Fraction(1, 3), Fraction(1, 2), 0, 0, 5)


# EGF


def test_egf_unit_vector():
    x, nu, beta, gamma = Fraction(3, 10), Fraction(3, 5), Fraction(1, 2), Fraction(6, 5)
    for z in (0.1, 0.5, 1.0):
        closed = egf_S([1.0], 0.3, 0.6, 0.5, 1.2, z)
        direct = egf_S_direct([1], x, nu, beta, gamma, z)
        assert abs(closed - direct) < 1e-10


def test_egf_examples():
    assert egf_S([1.0, -2.0, 0.5], 0.3, 0.6, 0.5, 1.2, 0) == 0
    T, z = [1.0, -2.0, 0.5], 0.7
    want = cmath.exp(z) * sum((-1) ** k * t * z**k / math.factorial(k) for k, t in enumerate(T, start=1))
    assert abs(egf_S(T, 0.0, 0.6, 0.5, 1.2, z) - want) < 1e-15
    with pytest.raises(BetaPole):
        egf_S([1.0, 1.0], 0.3, 0.6, -2.0, 1.2, 0.5)


def test_egf_matches_direct_random():
    rng = random.Random(5)
    for _ in range(10):
        x = Fraction(rng.randint(-10, 10), 7)
        nu = Fraction(rng.randint(-10, 10), 5)
        beta = Fraction(rng.randint(1, 20), 3)
        gamma = Fraction(rng.randint(-20, 20), 9) + Fraction(1, 2)
        T = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.randint(1, 5))]
        for z in (0.1, 0.5, 1.0):
            closed = egf_S([float(t) for t in T], float(x), float(nu), float(beta), float(gamma), z)
            direct = egf_S_direct(T, x, nu, beta, gamma, z)
            assert abs(closed - direct) <= 1e-9 * max(1, abs(direct))
