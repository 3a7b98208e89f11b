import pytest
from hypothesis import given, strategies as st

from arrkit.arrangements import (
    GroupSpec,
    HypothesisViolation,
    check_constant_h,
    imprimitive_multiarrangement,
    multi_arrangement,
    predict_exponents,
    predict_exponents_general,
    psi_exponents,
    reflection_arrangement,
)
from arrkit.derivations import constant_ratio
from arrkit.poly import parse_poly


def test_group_parsing_and_exclusions():
    spec = GroupSpec.parse("G(6,2,2)")
    assert (spec.d, spec.e, spec.ell) == (3, 2, 2)
    assert spec.name() == "G(6,2,2)"
    with pytest.raises(ValueError):
        GroupSpec.parse("G(1,1,3)")
    with pytest.raises(ValueError):
        GroupSpec.parse("G(4,1,1)")
    with pytest.raises(ValueError):
        GroupSpec.parse("G(4,3,2)")  # p must divide r


def test_reflection_arrangement_g312():
    spec = GroupSpec.parse("G(3,1,2)")
    arr = reflection_arrangement(spec)
    assert arr.size == 5
    assert sorted(arr.mult, reverse=True) == [3, 3, 2, 2, 2]
    assert arr.order() == 12
    assert spec.coxeter_number == 6


def test_reflection_arrangement_d_equals_1():
    spec = GroupSpec.parse("G(3,3,2)")
    arr = reflection_arrangement(spec)
    assert arr.size == 3
    assert set(arr.mult) == {2}
    assert spec.coxeter_number == 3


def test_reflection_arrangement_g212():
    spec = GroupSpec.parse("G(2,1,2)")
    arr = reflection_arrangement(spec)
    assert arr.size == 4
    assert set(arr.mult) == {2}
    assert spec.coxeter_number == 4


def test_defining_polynomial_catalog():
    q = reflection_arrangement(GroupSpec.parse("G(3,1,2)")).defining_polynomial()
    target = parse_poly("x1^3*x2^3*(x1^3 - x2^3)^2", 2)
    assert constant_ratio(q, target) is not None

    from arrkit.arrangements import MultiArrangement

    empty = MultiArrangement(2, (), ())
    assert empty.defining_polynomial() == parse_poly("1", 2)

    arr = multi_arrangement(GroupSpec.parse("G(2,1,2)"), 1, 1)
    target = parse_poly("x1^3*x2^3*(x1^2 - x2^2)^3", 2)
    assert constant_ratio(arr.defining_polynomial(), target) is not None
    assert arr.defining_polynomial().degree() == arr.order()


def test_localization():
    from arrkit.arrangements import LinearForm, MultiArrangement
    from arrkit.field import CyclotomicNumber as C

    one, zero = C.one(), C.zero()
    a2 = MultiArrangement(2, (LinearForm([one, zero]), LinearForm([zero, one]),
                              LinearForm([one, -one])), (1, 1, 1))
    loc, rank = a2.localization([0, 2])
    assert loc.size == 3 and rank == 2
    loc, rank = a2.localization([1])
    assert loc.size == 1 and rank == 1

    arr = reflection_arrangement(GroupSpec.parse("G(2,1,3)"))
    # ker x1 and ker(x2 - x3)
    loc, rank = arr.localization([0, 7])
    assert rank == 2
    assert {str(f) for f in loc.forms} == {str(arr.forms[0]), str(arr.forms[7])}
    assert loc.size == 2


def test_predict_exponents_examples():
    assert predict_exponents(GroupSpec.parse("G(3,1,2)"), 1, 0) == [6, 6]
    assert predict_exponents(GroupSpec.parse("G(3,3,2)"), 1, 1) == [4, 5]
    assert predict_exponents(GroupSpec.parse("G(4,2,2)"), 1, 1) == [9, 9]
    # coexponents per family
    assert predict_exponents(GroupSpec.parse("G(3,1,2)"), 0, 1) == [1, 4]
    assert predict_exponents(GroupSpec.parse("G(2,1,3)"), 0, 1) == [1, 3, 5]
    assert predict_exponents(GroupSpec.parse("G(2,2,3)"), 0, 1) == [1, 2, 3]
    assert predict_exponents(GroupSpec.parse("G(4,2,2)"), 0, 1) == [1, 5]


def test_predict_exponents_general_examples():
    assert predict_exponents_general(2, 2, 1, (3, 3), "odd") == [5, 7]
    assert predict_exponents_general(3, 2, 1, (0, 0), "even") == [3, 3]
    # q = -1, a = 4, c = 3: the three exponents are {3+0+3, 3+2, 3+4}
    assert predict_exponents_general(2, 3, 1, (0, 0, 0), "odd") == [5, 6, 7]
    with pytest.raises(HypothesisViolation):
        predict_exponents_general(2, 2, 1, (1, 3), "odd")


def test_psi_exponents_examples():
    assert psi_exponents(2, 2, 2, 0) == [3, 3]
    assert psi_exponents(2, 2, 2, 1) == [1, 5]
    for d in (2, 3):
        for e in (2, 3):
            for ell in (2, 3):
                spec = GroupSpec(d=d, e=e, ell=ell)
                total = ell * spec.coxeter_number - spec.num_hyperplanes()
                for s in range(e):
                    assert sum(psi_exponents(d, e, ell, s)) == total


def test_check_constant_h_examples():
    g422 = GroupSpec.parse("G(4,2,2)")
    assert check_constant_h(g422, 0)
    assert check_constant_h(g422, 1)
    g632 = GroupSpec.parse("G(6,3,2)")
    for m in range(6):
        assert check_constant_h(g632, m)


CATALOG = ["G(2,1,2)", "G(3,1,2)", "G(4,1,2)", "G(2,2,2)", "G(3,3,2)",
           "G(4,4,2)", "G(4,2,2)", "G(6,2,2)", "G(6,3,2)", "G(2,1,3)",
           "G(2,2,3)", "G(3,3,3)"]


@pytest.mark.parametrize("name", CATALOG)
def test_coxeter_number_identity(name):
    spec = GroupSpec.parse(name)
    arr = reflection_arrangement(spec)
    assert arr.order() == spec.ell * spec.coxeter_number
    assert arr.size == spec.num_hyperplanes()
    assert arr.defining_polynomial().degree() == arr.order()


@pytest.mark.parametrize("name", CATALOG)
@pytest.mark.parametrize("m,shift", [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (3, 1)])
def test_exponent_sum_identity(name, m, shift):
    spec = GroupSpec.parse(name)
    exps = predict_exponents(spec, m, shift)
    arr = reflection_arrangement(spec)
    assert sum(exps) == m * spec.ell * spec.coxeter_number + shift * arr.size
    assert len(exps) == spec.ell


@pytest.mark.parametrize("name", CATALOG)
@pytest.mark.parametrize("m,shift", [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (3, 1)])
def test_predict_matches_general_formula(name, m, shift):
    spec = GroupSpec.parse(name)
    coord = spec.d * m + shift if spec.d > 1 else 0
    m_vec = [coord] * spec.ell
    parity = "odd" if shift == 1 else "even"
    general = predict_exponents_general(spec.r, spec.ell, m, m_vec, parity)
    assert general == predict_exponents(spec, m, shift)


def test_multi_arrangement_drops_zero_multiplicities():
    arr = multi_arrangement(GroupSpec.parse("G(3,3,2)"), 0, 0)
    assert arr.size == 0
    arr = imprimitive_multiarrangement(2, 3, [0, 1, 0], 2)
    assert arr.size == 1 + 6


@given(st.integers(2, 4), st.integers(2, 3), st.integers(0, 2), st.integers(0, 2))
def test_general_formula_sum(r, ell, m, q):
    import random

    rng = random.Random(q * 100 + r * 10 + ell)
    if q == 0:
        m_vec = [0] * ell
    else:
        lo, hi = (q - 1) * r + 1, q * r
        m_vec = [rng.randint(lo, hi) for _ in range(ell)]
    pairs = ell * (ell - 1) // 2
    for parity, pair_mult in (("even", 2 * m), ("odd", 2 * m + 1)):
        exps = predict_exponents_general(r, ell, m, m_vec, parity)
        assert sum(exps) == sum(m_vec) + pairs * r * pair_mult
