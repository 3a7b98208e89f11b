"""Polynomial derivations, membership in D(A,nu), and basis certification.

A derivation theta = sum f_i d/dx_i is stored as its vector of coefficient
polynomials.  Membership in D(A,nu) means theta(alpha_H) is divisible by
alpha_H^nu(H) for every hyperplane; a family of ell members is a certified
basis when the determinant of its Saito matrix equals Q(A,nu) up to a
nonzero constant (checked by exact division both ways).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arrangements import MultiArrangement
from .field import CyclotomicNumber
from .poly import MultiPoly, NonDivisibleError, default_names, linear_power_divides, parse_poly, poly_to_str


class Derivation:
    """theta = sum coeffs[i] * d/dx_i; immutable."""

    __slots__ = ("ell", "coeffs")

    def __init__(self, coeffs: Sequence[MultiPoly]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("derivation needs at least one coefficient")
        ell = coeffs[0].nvars
        if len(coeffs) != ell:
            raise ValueError("need exactly one coefficient polynomial per variable")
        for c in coeffs:
            if c.nvars != ell:
                raise ValueError("coefficient nvars mismatch")
        self.ell = ell
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_homogeneous(self) -> bool:
        degrees = {c.homogeneous_degree() for c in self.coeffs
                   if not c.is_zero() and c.is_homogeneous()}
        if any(not c.is_homogeneous() for c in self.coeffs):
            return False
        return len(degrees) <= 1

    def pdeg(self) -> int | None:
        """Common degree of the nonzero coefficients; None for the zero derivation."""
        if not self.is_homogeneous():
            raise ValueError("polynomial degree is only defined for homogeneous derivations")
        degrees = {c.homogeneous_degree() for c in self.coeffs if not c.is_zero()}
        return degrees.pop() if degrees else None

    def apply(self, p: MultiPoly) -> MultiPoly:
        if p.nvars != self.ell:
            raise ValueError("nvars mismatch")
        out = MultiPoly.zero(p.nvars, p.names)
        for i, f in enumerate(self.coeffs):
            if not f.is_zero():
                out = out + f * p.partial_derivative(i)
        return out

    def scale(self, value) -> "Derivation":
        return Derivation([c.scale(value) for c in self.coeffs])

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self) -> str:
        body = ", ".join(poly_to_str(c) for c in self.coeffs)
        return f"Derivation([{body}])"

    def to_dict(self) -> dict:
        record = {"ell": self.ell, "coeffs": [poly_to_str(c) for c in self.coeffs]}
        if self.is_homogeneous():
            record["degree"] = self.pdeg()
        return record

    @staticmethod
    def from_dict(record: dict, names: Sequence[str] | None = None) -> "Derivation":
        ell = record["ell"]
        names = names or default_names(ell)
        return Derivation([parse_poly(s, ell, names) for s in record["coeffs"]])


def euler_derivation(ell: int, h: int, names: Sequence[str] | None = None) -> Derivation:
    """The scaled Euler derivation (1/h) sum x_i d/dx_i."""
    if h < 1:
        raise ValueError("h must be positive")
    scale = CyclotomicNumber.from_rational(Fraction(1, h))
    return Derivation([MultiPoly.variable(ell, i, names).scale(scale) for i in range(ell)])


def is_member(theta: Derivation, arrangement: MultiArrangement) -> bool:
    """theta in D(A,nu): alpha_H^nu(H) divides theta(alpha_H) for every H."""
    if theta.ell != arrangement.ell:
        raise ValueError("dimension mismatch")
    for form, m in zip(arrangement.forms, arrangement.mult):
        if m == 0:
            continue
        alpha = form.poly()
        if not linear_power_divides(theta.apply(alpha), alpha, m):
            return False
    return True


def first_membership_failure(theta: Derivation,
                             arrangement: MultiArrangement) -> int | None:
    for idx, (form, m) in enumerate(zip(arrangement.forms, arrangement.mult)):
        if m == 0:
            continue
        alpha = form.poly()
        if not linear_power_divides(theta.apply(alpha), alpha, m):
            return idx
    return None


def saito_matrix(thetas: Sequence[Derivation]) -> list[list[MultiPoly]]:
    """Row i holds the coefficients of thetas[i]."""
    return [list(t.coeffs) for t in thetas]


def saito_det(thetas: Sequence[Derivation]) -> MultiPoly:
    """Determinant of the Saito matrix by fraction-free Bareiss elimination."""
    thetas = list(thetas)
    ell = thetas[0].ell
    if len(thetas) != ell:
        raise ValueError(f"need exactly {ell} derivations")
    return poly_matrix_det(saito_matrix(thetas))


def poly_matrix_det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Exact determinant of a square polynomial matrix (Bareiss with pivoting)."""
    n = len(matrix)
    m = [list(row) for row in matrix]
    nvars = m[0][0].nvars
    names = m[0][0].names
    if n == 1:
        return m[0][0]
    sign = 1
    prev = MultiPoly.const(nvars, 1, names)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(nvars, names)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_divide(prev)
            m[i][k] = MultiPoly.zero(nvars, names)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def constant_ratio(p: MultiPoly, q: MultiPoly) -> CyclotomicNumber | None:
    """c with p = c*q and c a nonzero constant, else None (decides p =. q)."""
    if p.is_zero() or q.is_zero():
        return None
    try:
        ratio = p.exact_divide(q)
    except NonDivisibleError:
        return None
    if ratio.degree() != 0:
        return None
    try:
        back = q.exact_divide(p)
    except NonDivisibleError:
        return None
    if back.degree() != 0:
        return None
    return ratio.constant_value()


@dataclass(frozen=True)
class Verdict:
    """Outcome of a basis certification run."""

    kind: str  # certified-basis | not-member | determinant-mismatch | degree-mismatch
    detail: str = ""
    determinant: MultiPoly | None = None
    failing_hyperplane: int | None = None

    @property
    def certified(self) -> bool:
        return self.kind == "certified-basis"

    def __str__(self) -> str:
        return self.kind if not self.detail else f"{self.kind} ({self.detail})"


def ziegler_check(thetas: Sequence[Derivation], arrangement: MultiArrangement) -> Verdict:
    """Certify that thetas form a basis of D(A,nu).

    Membership of each theta is checked first, then det M =. Q(A,nu) by
    two-sided exact division.  For homogeneous inputs the degree-count
    criterion (independence plus sum of degrees = |nu|) is cross-validated
    against the determinant route.
    """
    thetas = list(thetas)
    ell = arrangement.ell
    if len(thetas) != ell:
        return Verdict("degree-mismatch", detail=f"expected {ell} derivations, got {len(thetas)}")
    for idx, theta in enumerate(thetas):
        bad = first_membership_failure(theta, arrangement)
        if bad is not None:
            return Verdict("not-member", detail=f"derivation {idx} fails at hyperplane {bad}",
                           failing_hyperplane=bad)
    det = saito_det(thetas)
    q = arrangement.defining_polynomial()
    ratio = constant_ratio(det, q)

    all_homogeneous = all(t.is_homogeneous() and not t.is_zero() for t in thetas)
    if all_homogeneous:
        total = sum(t.pdeg() for t in thetas)
        criterion_iii = (not det.is_zero()) and total == arrangement.order()
        if (ratio is not None) != criterion_iii:
            raise AssertionError(
                "determinant route and degree-count route disagree; this should be impossible")
        if ratio is None:
            if det.is_zero():
                return Verdict("determinant-mismatch", detail="Saito determinant vanishes",
                               determinant=det)
            if total != arrangement.order():
                return Verdict("degree-mismatch",
                               detail=f"sum of degrees {total} != |nu| = {arrangement.order()}",
                               determinant=det)
            return Verdict("determinant-mismatch", detail="det not proportional to Q",
                           determinant=det)
        return Verdict("certified-basis", determinant=det)

    if ratio is None:
        return Verdict("determinant-mismatch", detail="det not proportional to Q", determinant=det)
    return Verdict("certified-basis", determinant=det)
