from fractions import Fraction

import pytest

from arrkit.arrangements import GroupSpec, multi_arrangement
from arrkit.derivations import Derivation, euler_derivation
from arrkit.flat import (
    FlatValidationError,
    apply_primitive,
    build_basis_wellgen,
    jacobians,
    lifting_check,
    load_flat_structure,
    nabla_d_base,
    nabla_d_inverse,
    nabla_d_inverse_m_euler,
    nabla_theta,
    shipped_config_path,
    to_x_coordinates,
)
from arrkit.oracle import extract_basis
from arrkit.poly import MultiPoly, linear_power_divides, parse_poly


def T(text):
    return parse_poly(text, 2, ("t1", "t2"))


def X(text):
    return parse_poly(text, 2)


@pytest.fixture(scope="module")
def fs():
    return load_flat_structure(shipped_config_path("g312"))


GOOD_CONFIG = """
group = G(3,1,2)
degrees = 3, 6
invariant = x1^3 + x2^3
invariant = 1/6*x1^6 - 5/3*x1^3*x2^3 + 1/6*x2^6
potential = 1/18*t1^3 + t1*t2
potential = 1/54*t1^4 + 1/2*t2^2
"""


def test_load_from_text_matches_shipped(fs):
    other = load_flat_structure(GOOD_CONFIG)
    assert other.m_xi == fs.m_xi
    assert other.degrees == fs.degrees


def test_validation_rejects_nonhomogeneous_invariant():
    bad = GOOD_CONFIG.replace("invariant = x1^3 + x2^3", "invariant = x1^3 + x2^2")
    with pytest.raises(FlatValidationError) as err:
        load_flat_structure(bad)
    assert err.value.invariant == "invariant_homogeneity"


def test_validation_rejects_corrupted_potential():
    bad = GOOD_CONFIG.replace("potential = 1/54*t1^4 + 1/2*t2^2",
                              "potential = 1/54*t1^4 + 1/2*t2^3")
    with pytest.raises(FlatValidationError):
        load_flat_structure(bad)


def test_validation_rejects_wrong_invariant():
    bad = GOOD_CONFIG.replace("invariant = 1/6*x1^6 - 5/3*x1^3*x2^3 + 1/6*x2^6",
                              "invariant = x1^6")
    with pytest.raises(FlatValidationError) as err:
        load_flat_structure(bad)
    assert err.value.invariant == "jacobian_factorization"


def test_non_flat_invariants_fail_at_transfer():
    # (x1^6 + x2^6)/6 is a valid fundamental invariant but not the flat one;
    # the load-time checks cannot see that, the exact transfer can.
    from arrkit.flat import NonPolynomialTransfer

    subtle = GOOD_CONFIG.replace("invariant = 1/6*x1^6 - 5/3*x1^3*x2^3 + 1/6*x2^6",
                                 "invariant = 1/6*x1^6 + 1/6*x2^6")
    fs_bad = load_flat_structure(subtle)
    with pytest.raises(NonPolynomialTransfer):
        to_x_coordinates(fs_bad, nabla_d_inverse_m_euler(fs_bad, 1))


def test_derived_matrices(fs):
    assert list(fs.btilde[0][0]) == [T("1/3*t1"), T("2/9*t1^2")]
    assert list(fs.btilde[1][0]) == [T("1"), T("0")]
    assert fs.m_xi[0][0] == T("1/6*t1^2 + t2")
    assert fs.m_xi[1][0] == T("1/2*t1")
    assert [-b for b in fs.b_inf_diagonal()] == [Fraction(2, 3), Fraction(1, 6)]
    assert fs.m_tilde[1][1] == T("0")


def test_inverse_primitive_round_trip(fs):
    memo = {}
    for k in range(4):
        for i in range(2):
            mono = (0, k)
            theta = Derivation([
                MultiPoly.monomial(2, mono, 1, ("t1", "t2")) if c == i
                else MultiPoly.zero(2, ("t1", "t2")) for c in range(2)])
            assert apply_primitive(fs, nabla_d_inverse(fs, theta, memo)) == theta


def test_inverse_primitive_euler_weights(fs):
    # weighted homogeneity: the m-fold image has weight m + 1
    memo = {}
    for m in range(4):
        theta = nabla_d_inverse_m_euler(fs, m, memo)
        for i, poly in enumerate(theta.coeffs):
            for mono in poly.terms:
                w = sum(e * fs.weight(t) for t, e in enumerate(mono))
                assert w - fs.weight(i) + 1 == m + 1


def test_primitive_connection_agrees_with_x_side(fs):
    # Independent route: in x-coordinates the connection along the primitive
    # field is the componentwise directional derivative with the rational
    # coefficient vector (last adjugate row)/det.
    jac = jacobians(fs)
    memo = {}
    theta = nabla_d_inverse(fs, nabla_d_inverse_m_euler(fs, 1, memo), memo)
    applied_t = apply_primitive(fs, theta)
    lhs = to_x_coordinates(fs, applied_t, jac)
    theta_x = to_x_coordinates(fs, theta, jac)
    for j in range(2):
        directional = MultiPoly.zero(2)
        for a in range(2):
            directional = directional + jac.adjugate[1][a] * theta_x.coeffs[j].partial_derivative(a)
        assert directional.exact_divide(jac.det) == lhs.coeffs[j]


def test_commutation_with_invariant_directions(fs):
    jac = jacobians(fs)
    memo = {}
    inv_e_x = to_x_coordinates(fs, nabla_d_inverse(fs, fs.euler_t(), memo), jac)
    for i in range(2):
        lhs = []
        for j in range(2):
            directional = MultiPoly.zero(2)
            for a in range(2):
                directional = directional + jac.adjugate[i][a] * \
                    inv_e_x.coeffs[j].partial_derivative(a)
            lhs.append(directional.exact_divide(jac.det))
        rhs = to_x_coordinates(
            fs, Derivation([c.scale(Fraction(1, fs.h))
                            for c in nabla_d_base(fs, 0, i, memo).coeffs]), jac)
        assert Derivation(lhs) == rhs


def test_euler_transfer(fs):
    jac = jacobians(fs)
    e_x = to_x_coordinates(fs, fs.euler_t(), jac)
    assert e_x == euler_derivation(2, fs.h)
    # Euler identity through the transfer: E(t_j(x)) = wt(t_j) t_j(x)
    for j in range(2):
        assert e_x.apply(fs.invariants[j]) == fs.invariants[j].scale(fs.weight(j))


def test_worked_example_theta(fs):
    jac = jacobians(fs)
    lam = to_x_coordinates(fs, nabla_d_inverse_m_euler(fs, 1), jac)
    assert lam == Derivation([X("1/28*x1^7 - 1/4*x1^4*x2^3"),
                              X("1/28*x2^7 - 1/4*x1^3*x2^4")])
    d1 = Derivation([X("1"), X("0")])
    theta1 = nabla_theta(d1, lam)
    assert theta1 == Derivation([X("1/4*x1^6 - x1^3*x2^3"), X("-3/4*x1^2*x2^4")])


def test_nabla_on_constant_directions(fs):
    jac = jacobians(fs)
    lam = to_x_coordinates(fs, nabla_d_inverse_m_euler(fs, 1), jac)
    any_direction = Derivation([X("x1^2"), X("x2^2 - x1*x2")])
    assert nabla_theta(any_direction, Derivation([X("1"), X("0")])).is_zero()
    assert not nabla_theta(any_direction, lam).is_zero()


def test_build_m0_returns_scaled_basis(fs):
    simple = multi_arrangement(fs.group, 0, 1)
    mu_basis = extract_basis(simple).basis
    built, verdict, exps = build_basis_wellgen(fs, mu_basis, [1] * fs.arrangement.size, 0)
    assert verdict.certified
    assert exps == [1, 4]
    scale = Fraction(1, fs.h)
    for theta, result in zip(mu_basis, built):
        assert result == theta.scale(scale)


def test_build_mu1_m1(fs):
    simple = multi_arrangement(fs.group, 0, 1)
    mu_basis = extract_basis(simple).basis
    built, verdict, exps = build_basis_wellgen(fs, mu_basis, [1] * fs.arrangement.size, 1)
    assert verdict.certified
    assert exps == [7, 10]
    target = multi_arrangement(fs.group, 1, 1)
    from arrkit.derivations import constant_ratio, saito_det

    q = parse_poly("x1^4*x2^4*(x1^3 - x2^3)^3", 2)
    assert constant_ratio(target.defining_polynomial(), q) is not None
    assert constant_ratio(saito_det(built), q) is not None


def test_build_rejects_uncertified_mu_basis(fs):
    bogus = [Derivation([X("1"), X("0")]), Derivation([X("0"), X("1")])]
    with pytest.raises(ValueError):
        build_basis_wellgen(fs, bogus, [1] * fs.arrangement.size, 1)


def test_lifting_check_examples(fs):
    jac = jacobians(fs)
    lam = to_x_coordinates(fs, nabla_d_inverse_m_euler(fs, 1), jac)
    # divisibility at the coordinate hyperplane: x1^4 divides the x1-component
    alpha = fs.arrangement.forms[0].poly()
    assert linear_power_divides(lam.apply(alpha), alpha, 4)
    for h_index in range(fs.arrangement.size):
        assert lifting_check(fs, 1, h_index, jac, lam)
        assert lifting_check(fs, 0, h_index, jac)


def test_shipped_config_lookup():
    assert shipped_config_path("g312").endswith("g312.flat")
    with pytest.raises(FileNotFoundError):
        shipped_config_path("does-not-exist")
