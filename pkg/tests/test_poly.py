import pytest
from hypothesis import given, strategies as st

from arrkit.field import CyclotomicNumber, zeta
from arrkit.poly import (
    MultiPoly,
    NonDivisibleError,
    linear_power_divides,
    parse_poly,
    poly_to_str,
)


def P(text, names=None):
    return parse_poly(text, 2, names)


def T(text):
    return parse_poly(text, 2, ("t1", "t2"))


def test_ring_ops():
    assert P("x1 - x2") * P("x1 + x2") == P("x1^2 - x2^2")
    p = P("3*x1^2*x2 - 1/2*x2^3")
    assert p + MultiPoly.zero(2) == p
    assert P("(x1^3 + x2^3)^2") == P("x1^6 + 2*x1^3*x2^3 + x2^6")


def test_nvars_mismatch():
    with pytest.raises(ValueError):
        P("x1") * parse_poly("x1", 1)


def test_partial_derivative():
    g1 = T("1/18*t1^3 + t1*t2")
    assert g1.partial_derivative(0) == T("1/6*t1^2 + t2")
    assert T("5").partial_derivative(0) == T("0")
    g2 = T("1/54*t1^4 + 1/2*t2^2")
    assert g2.partial_derivative(0).partial_derivative(0) == T("2/9*t1^2")


def test_exact_divide():
    assert P("x1^2 - x2^2").exact_divide(P("x1 - x2")) == P("x1 + x2")
    with pytest.raises(NonDivisibleError) as err:
        P("x1").exact_divide(P("x1 - x2"))
    assert not err.value.remainder.is_zero()
    assert P("x1^3 + 3*x1*x2^2 - 3*x1^2*x2 - x2^3").exact_divide(P("(x1 - x2)^3")) == P("1")


def test_substitute():
    t_sq = T("t1^2")
    image = t_sq.substitute({0: P("x1^3 + x2^3"), 1: P("0")})
    assert image == P("(x1^3 + x2^3)^2")
    p = P("x1^2*x2 - x2")
    assert p.substitute({0: P("x1"), 1: P("x2")}) == p
    w = P("x1 - x2").substitute({1: P("z3*x1")})
    assert w == P("x1 - z3*x1")


def test_linear_power_divides_examples():
    alpha = P("x1 - x2")
    p = P("x1*(x1 - x2)^2")
    assert linear_power_divides(p, alpha, 2)
    assert not linear_power_divides(p, alpha, 3)
    assert linear_power_divides(MultiPoly.zero(2), alpha, 11)
    q = P("3*x1^3*x2^2 + x1*x2^4 - 3*x1^2*x2^3 - x1^4*x2")
    assert linear_power_divides(q, alpha, 3)
    assert not linear_power_divides(q, alpha, 4)
    assert linear_power_divides(q, alpha, 0)


def test_linear_power_divides_complex_form():
    alpha = P("x1 - z3*x2")
    p = alpha * alpha * P("x1 + 7*x2")
    assert linear_power_divides(p, alpha, 2)
    assert not linear_power_divides(p, alpha, 3)


_coeffs = st.integers(min_value=-4, max_value=4)


def _random_poly(draw_terms):
    terms = {}
    for (e1, e2), c in draw_terms:
        if c:
            terms[(e1, e2)] = CyclotomicNumber.from_rational(c)
    return MultiPoly(2, terms)


_polys = st.lists(
    st.tuples(st.tuples(st.integers(0, 4), st.integers(0, 4)), _coeffs),
    min_size=0, max_size=5).map(_random_poly)


@given(_polys, _polys)
def test_product_then_divide(p, q):
    if q.is_zero():
        return
    assert (p * q).exact_divide(q) == p


@given(_polys, _polys)
def test_leibniz_rule(p, q):
    for i in range(2):
        lhs = (p * q).partial_derivative(i)
        rhs = p.partial_derivative(i) * q + p * q.partial_derivative(i)
        assert lhs == rhs


@given(_polys, st.sampled_from(["x1 - x2", "x2", "x1 + 2*x2", "x1 - z4*x2"]),
       st.integers(0, 3))
def test_linear_power_divides_matches_repeated_division(p, alpha_text, k):
    alpha = P(alpha_text)
    expected = True
    work = p
    for _ in range(k):
        try:
            work = work.exact_divide(alpha)
        except NonDivisibleError:
            expected = False
            break
    assert linear_power_divides(p, alpha, k) == expected


@given(_polys)
def test_parse_print_round_trip(p):
    assert parse_poly(poly_to_str(p), 2) == p


def test_round_trip_with_cyclotomic_coefficients():
    p = P("x1^2 - z3*x1*x2 + (1/2 + 2*z3)*x2^2")
    assert parse_poly(poly_to_str(p), 2) == p
    one_third = MultiPoly.const(2, CyclotomicNumber.from_rational(1) / 3)
    assert parse_poly(poly_to_str(one_third), 2) == one_third


def test_homogeneity_and_degree():
    assert MultiPoly.zero(2).degree() is None
    assert MultiPoly.zero(2).is_homogeneous()
    assert P("x1^2 + x1*x2").homogeneous_degree() == 2
    with pytest.raises(ValueError):
        P("x1^2 + x1").homogeneous_degree()
