from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperinv.errors import BetaPole, GammaPole, LengthMismatch, SingularDiagonal, SizeMismatch
from hyperinv.invpair import (
    Params,
    SequenceSpec,
    TriMatrix,
    apply,
    build_A,
    build_B,
    build_generic,
    criterion_check,
    forward_solve,
    genbinom,
    identity,
    is_identity,
    mat_mul,
    matrix_from_json,
    matrix_to_json,
    pair_sequences,
    u_sum,
    x_kernel,
)
from hyperinv.numfield import DOUBLE, EXACT, float_mode
from hyperinv.suites import perturb_sequence, predicted_cells

from conftest import off_negative_integers, rationals

N = 12


@st.composite
def params(draw, n_max=N, alpha_equals_gamma=False, nonzero_x=False):
    x = draw(rationals(-2, 2).filter(lambda q: q != 0 or not nonzero_x))
    nu = draw(rationals())
    beta = draw(rationals().filter(lambda q: off_negative_integers(q, n_max)))
    gamma = draw(rationals().filter(lambda q: off_negative_integers(q, n_max)))
    alpha = gamma if alpha_equals_gamma else draw(rationals())
    return Params(x, nu, alpha, beta, gamma)


def random_triangular(draw, n):
    return TriMatrix([[draw(rationals()) for _ in range(r)] for r in range(1, n + 1)], EXACT)


@given(params())
def test_diagonals(p):
    A, B = build_A(p, 8), build_B(p, 8)
    assert A.diagonal() == B.diagonal() == [(-1) ** k for k in range(1, 9)]


@given(rationals(), rationals())
def test_second_row_at_zero_parameters(x, nu):
    p = Params(x, nu)
    assert build_A(p, 2)[2, 1] == -2 * (1 - nu * x)
    assert build_B(p, 2)[2, 1] == -2 * (1 - nu * x)


@given(rationals(), rationals(), st.integers(1, 8))
def test_nu_zero_leaves_binomials(x, alpha, n):
    p = Params(x, 0, alpha, Fraction(1, 3), Fraction(1, 5))
    A = build_A(p, n)
    for k in range(1, n + 1):
        assert A[n, k] == (-1) ** k * genbinom(n, k, alpha)


def test_genbinom():
    assert genbinom(5, 2, 0) == 10
    assert genbinom(4, 4, Fraction(1, 3)) == 1
    assert genbinom(3, 1, Fraction(1, 2)) == Fraction(5, 2) * Fraction(7, 2) / 2


def test_above_diagonal_reads_zero():
    A = build_A(Params(Fraction(1, 3), Fraction(-1, 2)), 4)
    assert A[1, 3] == 0
    with pytest.raises(IndexError):
        A[5, 1]


@given(params(n_max=10))
def test_pair_is_inverse(p):
    A, B = build_A(p, 10), build_B(p, 10)
    assert is_identity(mat_mul(A, B))
    assert is_identity(mat_mul(B, A))


def test_pole_guards():
    with pytest.raises(BetaPole):
        build_B(Params(Fraction(1, 3), Fraction(1, 2), 0, -2, 0), 5)
    build_B(Params(Fraction(1, 3), Fraction(1, 2), 0, -6, 0), 5)
    with pytest.raises(GammaPole):
        build_A(Params(Fraction(1, 3), Fraction(1, 2), 0, 0, -3), 5)


@given(params(n_max=8))
def test_generic_reproduces_pair(p):
    a, b = pair_sequences(p)
    GA, GB = build_generic(a, b, p.alpha, 8, p.x)
    assert GA == build_A(p, 8)
    assert GB == build_B(p, 8)


@given(rationals(), rationals(), st.integers(1, 8))
def test_generic_with_delta_sequences(alpha, x, n):
    delta = lambda m, n_, k_: 1 if m == 0 else 0  # noqa: E731
    GA, GB = build_generic(SequenceSpec(delta, "n"), SequenceSpec(delta, "k"), alpha, n, x)
    for k in range(1, n + 1):
        assert GA[n, k] == GB[n, k] == (-1) ** k * genbinom(n, k, alpha)
    assert criterion_check(SequenceSpec(delta, "n"), SequenceSpec(delta, "k"), n).passed


@given(params(n_max=8))
def test_swapped_roles_still_invert(p):
    a, b = pair_sequences(p)
    a_swap = SequenceSpec(b.generator, "k")
    b_swap = SequenceSpec(a.generator, "n")
    GA, GB = build_generic(a_swap, b_swap, p.alpha, 8, p.x)
    assert is_identity(mat_mul(GA, GB))
    assert criterion_check(a_swap, b_swap, 8).passed


def test_criterion_passes_to_fifteen():
    p = Params(Fraction(2, 7), Fraction(-3, 5), Fraction(1, 4), Fraction(5, 3), Fraction(-1, 6))
    a, b = pair_sequences(p)
    assert criterion_check(a, b, 15).passed


def test_criterion_rejects_same_dependence():
    spec = SequenceSpec(lambda m, n, k: 1, "n")
    with pytest.raises(ValueError):
        criterion_check(spec, spec, 3)


@given(params(n_max=7, nonzero_x=True), st.integers(1, 3), st.integers(1, 7))
def test_perturbation_flips_predicted_cells(p, m, k0):
    a, b = pair_sequences(p)
    b_bad = perturb_sequence(b, m, k0, 1)
    rep = criterion_check(a, b_bad, 7)
    expected = predicted_cells(a, b_bad, m, k0, 7, which="b")
    assert sorted(rep.failures) == sorted(expected)
    GA, GB = build_generic(a, b_bad, p.alpha + Fraction(1, 11), 7, p.x)
    C = mat_mul(GA, GB)
    off = [(n, k) for n in range(1, 8) for k in range(1, n + 1) if C[n, k] != (1 if n == k else 0)]
    assert sorted(off) == sorted(rep.failures)


@given(st.lists(st.lists(rationals(), min_size=7, max_size=7), min_size=7, max_size=7),
       st.lists(st.lists(rationals(), min_size=7, max_size=7), min_size=7, max_size=7),
       rationals().filter(lambda q: q.denominator > 1), rationals().filter(lambda q: q != 0))
def test_criterion_equivalent_to_product(ta, tb, alpha, x):
    a = SequenceSpec(lambda m, n, k: 1 if m == 0 else ta[n - 1][m], "n")
    b = SequenceSpec(lambda m, n, k: 1 if m == 0 else tb[k - 1][m], "k")
    GA, GB = build_generic(a, b, alpha, 7, x)
    C = mat_mul(GA, GB)
    off = [(n, k) for n in range(1, 8) for k in range(1, n + 1) if C[n, k] != (1 if n == k else 0)]
    assert sorted(off) == sorted(criterion_check(a, b, 7).failures)


def test_mat_mul_examples():
    A = build_A(Params(Fraction(1, 3), Fraction(2, 5), 1, 2, 3), 6)
    assert mat_mul(A, identity(6)) == A
    with pytest.raises(SizeMismatch):
        mat_mul(A, identity(5))


@given(st.data())
def test_mat_mul_associative(data):
    A, B, C = (random_triangular(data.draw, 5) for _ in range(3))
    assert mat_mul(mat_mul(A, B), C) == mat_mul(A, mat_mul(B, C))


@given(params(), st.lists(rationals(), min_size=N, max_size=N))
def test_apply_and_solve_round_trips(p, s):
    A, B = build_A(p, N), build_B(p, N)
    assert apply(identity(N), s) == s
    assert forward_solve(identity(N), s) == s
    assert apply(B, apply(A, s)) == s
    assert apply(A, apply(B, s)) == s
    assert forward_solve(A, apply(A, s)) == s
    assert forward_solve(A, s) == apply(B, s)


def test_apply_and_solve_errors():
    with pytest.raises(LengthMismatch):
        apply(identity(3), [1, 2])
    with pytest.raises(SingularDiagonal):
        forward_solve(TriMatrix([[1], [2, 0]], EXACT), [1, 1])


def test_float_mode_pair():
    p = Params(0.3, -0.6, 0.2, 0.7, 1.1)
    assert p.mode == DOUBLE
    assert is_identity(mat_mul(build_A(p, 15), build_B(p, 15)), 1e-6)
    # entries reach ~1e9 by n = 30, so double precision no longer resolves the product
    wide = Params(0.3, -0.6, 0.2, 0.7, 1.1, mode=float_mode(128))
    assert is_identity(mat_mul(build_A(wide, 30), build_B(wide, 30)), 1e-6)


@given(rationals(), rationals(), rationals())
def test_x_kernel_is_beta_plus_n_delta(beta, nu, x):
    for n in range(1, 11):
        for k in range(1, n + 1):
            assert x_kernel(n, k, beta, nu) == ((beta + n) if n == k else 0)


@given(params(n_max=6))
def test_u_sum_is_delta(p):
    for n in range(1, 7):
        for k in range(1, n + 1):
            assert u_sum(n - k, n, k, p) == (1 if n == k else 0)


def test_t0ter_special_case():
    x, nu = Fraction(2, 5), Fraction(-7, 10)
    A = build_A(Params(x, nu), 6)
    from math import comb

    from hyperinv.hyperfun import gauss_poly

    for b in range(1, 7):
        for l in range(1, b + 1):
            assert A[b, l] == (-1) ** l * comb(b, l) * gauss_poly(b - l, -b * nu, -b, x)


def test_matrix_json_round_trip():
    A = build_A(Params(Fraction(1, 3), Fraction(-1, 2)), 5)
    assert matrix_from_json(matrix_to_json(A), EXACT) == A
    with pytest.raises(SizeMismatch):
        matrix_from_json({"n_max": 3, "rows": [[{"rat": "1/1"}]]}, EXACT)
