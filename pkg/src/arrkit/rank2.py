"""Closed-form rank-2 bases from binomial linear systems, and their ladders.

For Q = x^(kr+1) y^(kr+1) (x^r - y^r)^(2m) the basis coefficients q1, q2
solve an integer system whose entries are binomial coefficients; for the
odd power 2m+1 the entries are differences of binomial coefficients and
only the odd-order Taylor conditions are imposed (the even ones follow
from antisymmetry, which is re-verified cheaply).  General coordinate
multiplicities are reached by exact division of the ceiling-multiplicity
basis, and everything is certified against the defining polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Sequence

from .arrangements import GroupSpec, MultiArrangement, imprimitive_multiarrangement, \
    multi_arrangement, predict_exponents, predict_exponents_general
from .derivations import Derivation, Verdict, ziegler_check
from .field import CyclotomicNumber
from .linalg import primitive_integer_nullvector
from .oracle import ExtractionFailure, extract_basis
from .poly import MultiPoly, default_names


class CoefficientVanishes(AssertionError):
    """A solved coefficient that the construction requires nonzero is zero."""


def binom_int(n: int, k: int) -> int:
    """Binomial coefficient as the falling-factorial polynomial, any integer n."""
    if k < 0:
        raise ValueError("k must be non-negative")
    num = 1
    for t in range(k):
        num *= n - t
    return num // factorial(k)


@dataclass
class BinomialSystem:
    """The integer condition matrix the rank-2 constructions solve."""

    parity: str
    r: int
    m: int
    k: int
    rows: list[list[int]]
    unknowns: list[str]


def _even_system(r: int, m: int, k: int) -> BinomialSystem:
    # Unknowns a_0..a_m, b_0..b_{m-1}; Taylor orders j = 0..2m-1 of
    # theta_1(x - y) at y = x, divided by j!.
    rows = []
    for j in range(2 * m):
        row = [binom_int((i + k) * r + 1, j) for i in range(m + 1)]
        row += [-binom_int((i + 1) * r, j) for i in range(m)]
        rows.append(row)
    unknowns = [f"a{i}" for i in range(m + 1)] + [f"b{i}" for i in range(m)]
    return BinomialSystem("even", r, m, k, rows, unknowns)


def _odd_system_theta1(r: int, m: int, k: int) -> BinomialSystem:
    # Unknowns a_0..a_m; odd Taylor orders j = 1, 3, ..., 2m-1 only.
    rows = []
    for j in range(1, 2 * m, 2):
        rows.append([binom_int((i + k) * r + 1, j) - binom_int((m - i) * r, j)
                     for i in range(m + 1)])
    return BinomialSystem("odd", r, m, k, rows, [f"a{i}" for i in range(m + 1)])


def _odd_system_theta2(r: int, m: int, k: int) -> BinomialSystem:
    rows = []
    for j in range(1, 2 * m, 2):
        rows.append([binom_int((i + k) * r + 1, j) - binom_int((m - i + 1) * r, j)
                     for i in range(m + 1)])
    return BinomialSystem("odd", r, m, k, rows, [f"b{i}" for i in range(m + 1)])


def _solve_primitive(system: BinomialSystem, pivot_index: int) -> list[int]:
    """Primitive integer nullvector, sign-fixed so entry pivot_index is positive."""
    ncols = len(system.unknowns)
    if not system.rows:
        vec = [0] * ncols
        vec[pivot_index] = 1
        return vec
    vec = primitive_integer_nullvector(system.rows, ncols)
    if vec[pivot_index] < 0:
        vec = [-v for v in vec]
    return vec


def _coeff_poly(coeffs: Sequence[int], degree: int) -> MultiPoly:
    """q(x, y) = sum coeffs[i] x^i y^(degree - i) as a 2-variable polynomial."""
    terms = {}
    for i, c in enumerate(coeffs):
        if c:
            terms[(i, degree - i)] = CyclotomicNumber.from_rational(c)
    return MultiPoly(2, terms)


def _sub_powers(q: MultiPoly, r: int, swap: bool) -> MultiPoly:
    """q(x^r, y^r), or q(y^r, x^r) when swap is set."""
    terms = {}
    for (i, j), c in q.terms.items():
        mono = (j * r, i * r) if swap else (i * r, j * r)
        terms[mono] = c
    return MultiPoly(2, terms)


def _mono(i: int, j: int) -> MultiPoly:
    return MultiPoly.monomial(2, (i, j))


def rank2_arrangement(r: int, m1: int, m2: int, pair_mult: int) -> MultiArrangement:
    return imprimitive_multiarrangement(r, 2, [m1, m2], pair_mult)


@dataclass
class Rank2Basis:
    theta1: Derivation
    theta2: Derivation
    q1: MultiPoly
    q2: MultiPoly
    a: list[int]
    b: list[int]
    exponents: list[int]
    verdict: Verdict
    arrangement: MultiArrangement


def even_rank2_basis(r: int, m: int, k: int = 0) -> Rank2Basis:
    """Certified basis for Q = x^(kr+1) y^(kr+1) (x^r - y^r)^(2m), m >= 1.

    All 2m+1 solved coefficients must be nonzero; a vanishing one would
    contradict the invertibility of the reduced binomial matrix.
    """
    if r < 2 or m < 1 or k < 0:
        raise ValueError("need r >= 2, m >= 1, k >= 0")
    system = _even_system(r, m, k)
    sol = _solve_primitive(system, pivot_index=m)  # a_m positive
    a, b = sol[:m + 1], sol[m + 1:]
    if any(c == 0 for c in sol):
        raise CoefficientVanishes(f"even system r={r} m={m} k={k}: solution {sol}")
    q1 = _coeff_poly(a, m)
    q2 = _coeff_poly(b, m - 1)
    theta1 = Derivation([
        _mono(k * r + 1, 0) * _sub_powers(q1, r, swap=False),
        _mono(r, k * r + 1) * _sub_powers(q2, r, swap=False),
    ])
    theta2 = Derivation([
        _mono(k * r + 1, r) * _sub_powers(q2, r, swap=True),
        _mono(0, k * r + 1) * _sub_powers(q1, r, swap=True),
    ])
    arrangement = rank2_arrangement(r, k * r + 1, k * r + 1, 2 * m)
    verdict = ziegler_check([theta1, theta2], arrangement)
    return Rank2Basis(theta1, theta2, q1, q2, a, b,
                      [(m + k) * r + 1, (m + k) * r + 1], verdict, arrangement)


def odd_rank2_basis(r: int, m: int, k: int = 0) -> Rank2Basis:
    """Certified basis for Q = x^(kr+1) y^(kr+1) (x^r - y^r)^(2m+1), m >= 0.

    The end coefficients a_0, a_m, b_0, b_m must be nonzero; each vanishing
    case is excluded by a nonzero difference-of-binomials determinant.
    """
    if r < 2 or m < 0 or k < 0:
        raise ValueError("need r >= 2, m >= 0, k >= 0")
    a = _solve_primitive(_odd_system_theta1(r, m, k), pivot_index=m)
    b = _solve_primitive(_odd_system_theta2(r, m, k), pivot_index=m)
    for name, vec in (("a", a), ("b", b)):
        if vec[0] == 0 or vec[m] == 0:
            raise CoefficientVanishes(f"odd system r={r} m={m} k={k}: {name} = {vec}")
    q1 = _coeff_poly(a, m)
    q2 = _coeff_poly(b, m)
    theta1 = Derivation([
        _mono(k * r + 1, 0) * _sub_powers(q1, r, swap=False),
        _mono(0, k * r + 1) * _sub_powers(q1, r, swap=True),
    ])
    theta2 = Derivation([
        _mono(k * r + 1, r) * _sub_powers(q2, r, swap=False),
        _mono(r, k * r + 1) * _sub_powers(q2, r, swap=True),
    ])
    # Antisymmetry re-check: theta1(x - y) and theta2(x - y) vanish on x = y.
    x_minus_y = _mono(1, 0) - _mono(0, 1)
    for theta in (theta1, theta2):
        p = theta.apply(x_minus_y)
        diag = p.substitute({0: _mono(1, 0), 1: _mono(1, 0)})
        if not diag.is_zero():
            raise AssertionError("antisymmetry failed; odd construction is broken")
    arrangement = rank2_arrangement(r, k * r + 1, k * r + 1, 2 * m + 1)
    verdict = ziegler_check([theta1, theta2], arrangement)
    return Rank2Basis(theta1, theta2, q1, q2, a, b,
                      [(m + k) * r + 1, (m + k + 1) * r + 1], verdict, arrangement)


def binomial_difference_det(A: int, B: int, r: int, m: int) -> int:
    """det over 0 <= i, j <= m-1 of C(A+ri, 2j+1) - C(B-ri, 2j+1).

    Requires A - B not divisible by r, the hypothesis under which the
    closed-form evaluation shows the determinant is not identically zero.
    """
    if (A - B) % r == 0:
        raise ValueError("requires A - B not congruent to 0 mod r")
    if m == 0:
        return 1
    rows = [[binom_int(A + r * i, 2 * j + 1) - binom_int(B - r * i, 2 * j + 1)
             for j in range(m)] for i in range(m)]
    return _int_det(rows)


def odd_supposition_determinants(r: int, m: int, k: int) -> dict[str, int]:
    """The four determinants excluding a_m = 0, a_0 = 0, b_m = 0, b_0 = 0."""
    return {
        "a_m": binomial_difference_det(k * r + 1, m * r, r, m),
        "a_0": binomial_difference_det((k + 1) * r + 1, (m - 1) * r, r, m),
        "b_m": binomial_difference_det(k * r + 1, (m + 1) * r, r, m),
        "b_0": binomial_difference_det((k + 1) * r + 1, m * r, r, m),
    }


def _int_det(rows: list[list[int]]) -> int:
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for kk in range(n - 1):
        if m[kk][kk] == 0:
            swap = next((i for i in range(kk + 1, n) if m[i][kk] != 0), None)
            if swap is None:
                return 0
            m[kk], m[swap] = m[swap], m[kk]
            sign = -sign
        for i in range(kk + 1, n):
            for j in range(kk + 1, n):
                m[i][j] = (m[kk][kk] * m[i][j] - m[i][kk] * m[kk][j]) // prev
            m[i][kk] = 0
        prev = m[kk][kk]
    return sign * m[n - 1][n - 1]


def _divide_derivation(theta: Derivation, divisors: Sequence[MultiPoly]) -> Derivation:
    return Derivation([c if d.is_zero() else c.exact_divide(d)
                       for c, d in zip(theta.coeffs, divisors)])


def rank2_general(r: int, m: int, m1: int, m2: int, parity: str) -> Rank2Basis:
    """Certified basis for Q = x^m1 y^m2 (x^r - y^r)^(2m [+1]).

    Builds the basis at the ceiling multiplicities kr+1 on both coordinates
    and divides it down to (m1, m2) by exact monomial division.  Even
    multiplicities on the binomial factor need (k-1)r+1 <= m1, m2 <= kr+1
    for a common k; odd ones need m_i = (k-1)r+1+mt_i with 0 <= mt_i <= r.
    """
    if m1 < 0 or m2 < 0 or m < 0:
        raise ValueError("multiplicities must be non-negative")
    one = MultiPoly.const(2, 1)
    if parity == "even":
        if m == 0:
            theta1 = Derivation([_mono(m1, 0), MultiPoly.zero(2)])
            theta2 = Derivation([MultiPoly.zero(2), _mono(0, m2)])
            arrangement = rank2_arrangement(r, m1, m2, 0)
            verdict = ziegler_check([theta1, theta2], arrangement)
            return Rank2Basis(theta1, theta2, one, one, [1], [1],
                              sorted([m1, m2]), verdict, arrangement)
        k = max(0, -(-(max(m1, m2) - 1) // r))  # smallest k with m_i <= kr+1
        if not ((k - 1) * r + 1 <= min(m1, m2) and max(m1, m2) <= k * r + 1):
            raise ValueError(f"(m1, m2) = ({m1}, {m2}) do not fit a common window for r = {r}")
        base = even_rank2_basis(r, m, k)
        theta1 = _divide_derivation(base.theta1, [_mono(k * r + 1 - m1, 0)] * 2)
        theta2 = _divide_derivation(base.theta2, [_mono(0, k * r + 1 - m2)] * 2)
        arrangement = rank2_arrangement(r, m1, m2, 2 * m)
        verdict = ziegler_check([theta1, theta2], arrangement)
        return Rank2Basis(theta1, theta2, base.q1, base.q2, base.a, base.b,
                          sorted([r * m + m1, r * m + m2]), verdict, arrangement)
    if parity == "odd":
        ks = []
        for k in range(0, max(m1, m2, 1) + 2):
            mt1 = m1 - ((k - 1) * r + 1)
            mt2 = m2 - ((k - 1) * r + 1)
            if 0 <= mt1 <= r and 0 <= mt2 <= r:
                ks.append(k)
        if not ks:
            raise ValueError(f"(m1, m2) = ({m1}, {m2}) do not fit the odd ladder for r = {r}")
        k = ks[0]
        mt1 = m1 - ((k - 1) * r + 1)
        mt2 = m2 - ((k - 1) * r + 1)
        base = odd_rank2_basis(r, m, k)
        theta1 = base.theta1
        theta2 = _divide_derivation(
            base.theta2, [_mono(r - mt1, 0) * _mono(0, r - mt2)] * 2)
        arrangement = rank2_arrangement(r, m1, m2, 2 * m + 1)
        verdict = ziegler_check([theta1, theta2], arrangement)
        c = (k - 1 + m) * r + 1
        return Rank2Basis(theta1, theta2, base.q1, base.q2, base.a, base.b,
                          sorted([c + mt1 + mt2, c + r]), verdict, arrangement)
    raise ValueError("parity must be 'even' or 'odd'")


@dataclass
class ImprimitiveBasis:
    basis: list[Derivation]
    exponents: list[int]
    verdict: Verdict
    arrangement: MultiArrangement


def build_basis_imprimitive(r: int, ell: int, m_vec: Sequence[int], m: int,
                            parity: str) -> ImprimitiveBasis:
    """Certified basis for x1^m1...xl^ml prod (x_i^r - x_j^r)^(2m [+1]).

    Rank 2 uses the closed-form builders; higher rank has no closed form and
    delegates to oracle extraction bounded by the predicted exponents.
    """
    predicted = predict_exponents_general(r, ell, m, m_vec, parity)
    if ell == 2:
        res = rank2_general(r, m, m_vec[0], m_vec[1], parity)
        basis = sorted([res.theta1, res.theta2], key=lambda t: t.pdeg())
        if sorted(res.exponents) != predicted:
            raise AssertionError("builder exponents disagree with the closed form")
        return ImprimitiveBasis(basis, sorted(res.exponents), res.verdict, res.arrangement)
    pair_mult = 2 * m + (1 if parity == "odd" else 0)
    arrangement = imprimitive_multiarrangement(r, ell, m_vec, pair_mult)
    result = extract_basis(arrangement, predicted=predicted)
    if sorted(result.degrees) != predicted:
        raise ExtractionFailure(
            f"oracle degrees {sorted(result.degrees)} != predicted {predicted}")
    return ImprimitiveBasis(result.basis, sorted(result.degrees), result.verdict, arrangement)


def build_basis_for_group(spec: GroupSpec, m: int, shift: int) -> ImprimitiveBasis:
    """Dispatch a catalog multi-arrangement (A(W), m*omega + shift) to the builders."""
    parity = "odd" if shift == 1 else "even"
    coord = (spec.d * m + shift) if spec.d > 1 else 0
    m_vec = [coord] * spec.ell
    result = build_basis_imprimitive(spec.r, spec.ell, m_vec, m, parity)
    predicted = predict_exponents(spec, m, shift)
    if result.exponents != predicted:
        raise AssertionError("family formulas disagree with the general construction")
    return result
