import random
from math import comb

import pytest

from arrkit.arrangements import (
    GroupSpec,
    LinearForm,
    MultiArrangement,
    imprimitive_multiarrangement,
    multi_arrangement,
)
from arrkit.derivations import constant_ratio, is_member
from arrkit.field import CyclotomicNumber as C
from arrkit.field import zeta
from arrkit.oracle import (
    OracleInconsistency,
    addition_deletion_pattern,
    euler_multiplicity,
    extract_basis,
    generator_degrees,
    membership_kernel,
    module_dimension,
    oracle_report,
    scaling_symmetry,
    triple,
)
from arrkit.poly import parse_poly


def boolean2():
    return imprimitive_multiarrangement(2, 2, [1, 1], 0)


def a2_double():
    one, zero = C.one(), C.zero()
    return MultiArrangement(2, (LinearForm([one, zero]), LinearForm([zero, one]),
                                LinearForm([one, -one])), (2, 2, 2))


def test_module_dimension_examples():
    assert module_dimension(boolean2(), 1) == 2
    omega = multi_arrangement(GroupSpec.parse("G(3,1,2)"), 1, 0)
    for p in range(6):
        assert module_dimension(omega, p) == 0
    assert module_dimension(omega, 6) == 2
    assert module_dimension(a2_double(), 3) == 2


@pytest.mark.parametrize("name,m,shift,p", [
    ("G(2,1,2)", 1, 0, 4),
    ("G(3,3,2)", 1, 1, 5),
    ("G(4,2,2)", 1, 1, 9),
    ("G(2,1,3)", 0, 1, 3),
    ("G(3,3,3)", 0, 1, 4),
])
def test_block_decomposition_matches_full_solve(name, m, shift, p):
    arrangement = multi_arrangement(GroupSpec.parse(name), m, shift)
    assert module_dimension(arrangement, p, decompose=True) == \
        module_dimension(arrangement, p, decompose=False)


def test_scaling_symmetry_detection():
    assert scaling_symmetry(a2_double()) == 1
    assert scaling_symmetry(multi_arrangement(GroupSpec.parse("G(4,2,2)"), 1, 0)) == 4
    assert scaling_symmetry(boolean2()) == 1


def test_generator_degrees_examples():
    omega = multi_arrangement(GroupSpec.parse("G(2,1,2)"), 1, 0)
    assert generator_degrees(omega, predicted=[4, 4]).degrees == [4, 4]
    assert generator_degrees(boolean2()).degrees == [1, 1]
    arr = multi_arrangement(GroupSpec.parse("G(3,3,2)"), 1, 1)
    assert generator_degrees(arr, predicted=[4, 5]).degrees == [4, 5]


def test_generator_degrees_reports_nonfree():
    one, zero = C.one(), C.zero()
    generic = MultiArrangement(3, (
        LinearForm([one, zero, zero]),
        LinearForm([zero, one, zero]),
        LinearForm([zero, zero, one]),
        LinearForm([one, one, one]),
    ), (1, 1, 1, 1))
    with pytest.raises(OracleInconsistency):
        generator_degrees(generic)


def test_extract_basis_examples():
    omega = multi_arrangement(GroupSpec.parse("G(3,1,2)"), 1, 0)
    res = extract_basis(omega, predicted=[6, 6])
    assert res.degrees == [6, 6] and res.verdict.certified
    target = parse_poly("x1^3*x2^3*(x1^3 - x2^3)^2", 2)
    assert constant_ratio(res.verdict.determinant, target) is not None
    for theta in res.basis:
        assert is_member(theta, omega)

    res = extract_basis(boolean2())
    assert res.degrees == [1, 1] and res.verdict.certified
    assert constant_ratio(res.verdict.determinant, parse_poly("x1*x2", 2)) is not None

    ladder = imprimitive_multiarrangement(2, 2, [3, 3], 2)
    res = extract_basis(ladder)
    assert res.degrees == [5, 5] and res.verdict.certified


def test_free_module_hilbert_identity():
    for name, m, shift in [("G(2,1,2)", 1, 0), ("G(3,1,2)", 1, 0), ("G(3,3,2)", 1, 1)]:
        arrangement = multi_arrangement(GroupSpec.parse(name), m, shift)
        report = generator_degrees(arrangement)
        assert report.complete
        ell = arrangement.ell
        for p, dim in report.profile.dims.items():
            expected = sum(comb(p - e + ell - 1, ell - 1)
                           for e in report.degrees if p >= e)
            assert dim == expected


def test_membership_kernel_is_deterministic_and_members():
    omega = multi_arrangement(GroupSpec.parse("G(3,1,2)"), 1, 0)
    first = membership_kernel(omega, 6)
    second = membership_kernel(omega, 6)
    assert first == second
    for theta in first:
        assert is_member(theta, omega)


def test_euler_multiplicity_size_two_flat():
    arr = multi_arrangement(GroupSpec.parse("G(2,1,3)"), 1, 0)
    # hyperplanes: 0,1,2 coordinates; 7 is x2 - x3
    loc, rank = arr.localization([0, 7])
    assert loc.size == 2 and rank == 2
    assert euler_multiplicity(arr, 0, 7) == arr.mult[7]
    assert euler_multiplicity(arr, 7, 0) == arr.mult[0]


def test_euler_multiplicity_interior_even():
    for r, m, m_i, m_l in [(2, 1, 1, 3), (3, 1, 2, 4)]:
        arrangement = imprimitive_multiarrangement(r, 2, [m_i, m_l], 2 * m)
        assert euler_multiplicity(arrangement, 1, 0) == r * m + m_i


def test_euler_multiplicity_interior_odd():
    r, m, k = 2, 1, 1
    mt_i, mt_l = 1, 2
    m_i = (k - 1) * r + 1 + mt_i
    m_l = (k - 1) * r + 1 + mt_l
    arrangement = imprimitive_multiarrangement(r, 2, [m_i, m_l], 2 * m + 1)
    assert euler_multiplicity(arrangement, 1, 0) == (k + m) * r + 1


def test_euler_multiplicity_invariant_under_essentialization():
    arr = multi_arrangement(GroupSpec.parse("G(2,1,3)"), 1, 1)
    rng = random.Random(11)
    baseline = euler_multiplicity(arr, 0, 3)
    for _ in range(2):
        while True:
            entries = [C.from_rational(rng.randint(-3, 3)) for _ in range(4)]
            a, b, c, d = entries
            if not (a * d - b * c).is_zero():
                break
        mixed = euler_multiplicity(arr, 0, 3, mix=[[a, b], [c, d]])
        assert mixed == baseline


def test_triple_boolean():
    result = triple(boolean2(), 0)
    assert result.deletion.size == 1
    assert result.restriction.ell == 1
    assert result.restriction.size == 1
    assert result.restriction.mult == (1,)


def test_triple_g212():
    arr = multi_arrangement(GroupSpec.parse("G(2,1,2)"), 1, 0)
    result = triple(arr, 1)  # delete at ker x2
    assert list(result.deletion.mult) == [2, 1, 2, 2]
    # all flats H cap ker(x2) coincide at the origin of ker(x2)
    assert result.restriction.size == 1
    assert result.restriction.mult == (4,)
    exp_full = generator_degrees(arr).degrees
    exp_del = generator_degrees(result.deletion).degrees
    exp_res = generator_degrees(result.restriction).degrees
    assert exp_full == [4, 4] and exp_del == [3, 4] and exp_res == [4]
    assert addition_deletion_pattern(exp_full, exp_del, exp_res)


def test_triple_even_theorem_instance():
    # Q = x1^1 x2^1 x3^2 prod (x_i^2 - x_j^2)^2, delete at ker x3
    arrangement = imprimitive_multiarrangement(2, 3, [1, 1, 2], 2)
    h0 = 2
    result = triple(arrangement, h0)
    q_res = result.restriction.defining_polynomial()
    target = parse_poly("x1^3*x2^3*(x1^2 - x2^2)^2", 2)
    assert constant_ratio(q_res, target) is not None


def test_triple_dedup_with_cyclotomic_forms():
    # delete at a pair hyperplane of G(3,3,3); the restricted flats must be
    # grouped correctly even though their forms mix root-of-unity orders
    arr = multi_arrangement(GroupSpec.parse("G(3,3,3)"), 1, 0)
    h0 = 0  # x1 - x2
    result = triple(arr, h0)
    # independent flat count: group the other hyperplanes by the rank-2 span
    # they generate together with alpha_{h0}
    reps = []
    for idx in range(arr.size):
        if idx == h0:
            continue
        loc, rank = arr.localization([h0, idx])
        assert rank == 2
        key = sorted(str(f) for f in loc.forms)
        if key not in reps:
            reps.append(key)
    assert result.restriction.size == len(reps) == 4
    assert set(result.restriction.mult) == {3}
    exp_full = generator_degrees(arr, predicted=[6, 6, 6]).degrees
    exp_del = generator_degrees(result.deletion, bound=8).degrees
    exp_res = generator_degrees(result.restriction).degrees
    assert addition_deletion_pattern(exp_full, exp_del, exp_res)


def test_addition_deletion_pattern():
    assert addition_deletion_pattern([4, 4], [3, 4], [4])
    assert addition_deletion_pattern([5, 6, 7], [5, 6, 6], [5, 6])
    assert not addition_deletion_pattern([5, 6, 7], [5, 6, 6], [5, 5])
    assert not addition_deletion_pattern([4, 4], [3, 3], [4])


def test_oracle_report_shape():
    report = oracle_report(boolean2())
    assert report["verdict"] == "certified-basis"
    assert report["generator_degrees"] == [1, 1]
    assert set(report) == {"arrangement", "degree_profile", "generator_degrees",
                           "verdict", "wall_time_seconds"}


def test_twisted_branch_beyond_one_period():
    # m >= e exercises the wrap-around of the twist in the shift-1 formula
    from arrkit.arrangements import predict_exponents

    for name, m in [("G(4,2,2)", 2), ("G(6,3,2)", 3)]:
        spec = GroupSpec.parse(name)
        predicted = predict_exponents(spec, m, 1)
        arrangement = multi_arrangement(spec, m, 1)
        assert generator_degrees(arrangement, predicted=predicted).degrees == predicted


def test_complex_coefficient_kernel():
    # r = 3 catalog arrangement forces zeta_3 arithmetic in the elimination
    arr = multi_arrangement(GroupSpec.parse("G(3,3,2)"), 1, 0)
    assert generator_degrees(arr, predicted=[3, 3]).degrees == [3, 3]
    res = extract_basis(arr, predicted=[3, 3])
    assert res.verdict.certified
    q = arr.defining_polynomial()
    assert constant_ratio(res.verdict.determinant, q) is not None
