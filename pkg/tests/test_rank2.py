import pytest

from arrkit.arrangements import imprimitive_multiarrangement
from arrkit.derivations import constant_ratio, is_member
from arrkit.oracle import generator_degrees
from arrkit.poly import parse_poly
from arrkit.rank2 import (
    CoefficientVanishes,
    binom_int,
    binomial_difference_det,
    build_basis_imprimitive,
    even_rank2_basis,
    odd_rank2_basis,
    odd_supposition_determinants,
    rank2_general,
)


def P(text):
    return parse_poly(text, 2)


def test_binom_int_negative_upper():
    assert binom_int(3, 1) == 3
    assert binom_int(0, 2) == 0
    assert binom_int(-1, 2) == 1
    assert binom_int(-2, 3) == -4


def test_even_example_r2_m1_k0():
    res = even_rank2_basis(2, 1, 0)
    assert res.q1 == P("x1 + x2")
    assert res.q2 == P("2")
    assert res.theta1.coeffs[0] == P("x1^3 + x1*x2^2")
    assert res.theta1.coeffs[1] == P("2*x1^2*x2")
    assert res.theta1.apply(P("x1 - x2")) == P("x1*(x1 - x2)^2")
    assert res.exponents == [3, 3]
    assert res.verdict.certified


def test_even_degree_formula_and_certification():
    res = even_rank2_basis(3, 2, 1)
    assert res.theta1.pdeg() == res.theta2.pdeg() == (2 + 1) * 3 + 1
    assert res.verdict.certified
    assert all(c != 0 for c in res.a + res.b)


def test_odd_example_r2_m1_k0():
    res = odd_rank2_basis(2, 1, 0)
    assert res.q1 == P("x1 + 3*x2")
    assert res.q2 == P("3*x1 + x2")
    assert res.theta1.coeffs[0] == P("x1^3 + 3*x1*x2^2")
    assert res.theta1.coeffs[1] == P("3*x1^2*x2 + x2^3")
    assert res.theta1.apply(P("x1 - x2")) == P("(x1 - x2)^3")
    assert res.theta2.apply(P("x1 - x2")) == P("-x1*x2*(x1 - x2)^3")
    assert res.exponents == [3, 5]
    assert res.verdict.certified


def test_odd_exponents_r3_m1_k1():
    res = odd_rank2_basis(3, 1, 1)
    assert res.exponents == [(1 + 1) * 3 + 1, (1 + 1 + 1) * 3 + 1] == [7, 10]
    assert res.verdict.certified


def test_membership_over_all_roots_of_unity():
    # certification checks every x - zeta*y hyperplane over Q(zeta_r)
    res = odd_rank2_basis(4, 2, 0)
    for form, mult in zip(res.arrangement.forms, res.arrangement.mult):
        alpha = form.poly()
        from arrkit.poly import linear_power_divides

        assert linear_power_divides(res.theta1.apply(alpha), alpha, mult)


def test_binomial_difference_det():
    assert binomial_difference_det(3, 2, 2, 1) == 1
    assert binomial_difference_det(1, 4, 2, 2) != 0  # (kr+1, mr) for (2,2,0)
    assert binomial_difference_det(7, 3, 3, 2) != 0  # ((k+1)r+1, (m-1)r) for (3,2,1)
    with pytest.raises(ValueError):
        binomial_difference_det(5, 3, 2, 1)


def test_odd_supposition_determinants_nonzero_grid():
    for r in (2, 3):
        for m in (1, 2, 3):
            for k in (0, 1):
                dets = odd_supposition_determinants(r, m, k)
                assert all(v != 0 for v in dets.values()), (r, m, k, dets)


def test_rank2_general_even_division_to_zero():
    res = rank2_general(2, 1, 0, 0, "even")
    assert res.exponents == [2, 2]
    assert res.verdict.certified


def test_rank2_general_odd_matches_builder():
    res = rank2_general(2, 1, 1, 1, "odd")
    assert res.exponents == [3, 5]
    assert res.verdict.certified


def test_rank2_general_even_asymmetric():
    res = rank2_general(3, 1, 2, 4, "even")
    assert res.exponents == [5, 7]
    assert res.verdict.certified
    arrangement = imprimitive_multiarrangement(3, 2, [2, 4], 2)
    assert generator_degrees(arrangement, predicted=[5, 7]).degrees == [5, 7]


def test_rank2_general_precondition():
    with pytest.raises(ValueError):
        rank2_general(3, 1, 0, 5, "even")


def test_build_basis_imprimitive_examples():
    res = build_basis_imprimitive(2, 3, [0, 0, 0], 1, "even")
    assert res.exponents == [4, 4, 4]
    assert res.verdict.certified

    res = build_basis_imprimitive(2, 2, [1, 1], 1, "even")
    assert res.exponents == [3, 3]
    assert res.verdict.certified

    res = build_basis_imprimitive(2, 3, [1, 1, 1], 0, "odd")
    assert res.exponents == [1, 3, 5]
    assert res.verdict.certified


def test_basis_degree_sum_is_order():
    for r, m, k in [(2, 1, 0), (3, 2, 0), (4, 1, 2)]:
        even = even_rank2_basis(r, m, k)
        assert even.theta1.pdeg() + even.theta2.pdeg() == even.arrangement.order()
        odd = odd_rank2_basis(r, m, k)
        assert odd.theta1.pdeg() + odd.theta2.pdeg() == odd.arrangement.order()


def test_builder_members():
    res = even_rank2_basis(4, 2, 1)
    assert is_member(res.theta1, res.arrangement)
    assert is_member(res.theta2, res.arrangement)
    det = constant_ratio(res.verdict.determinant,
                         res.arrangement.defining_polynomial())
    assert det is not None
