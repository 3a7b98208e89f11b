"""Reflection multi-arrangements of the groups G(r,p,l) and exponent formulas.

The catalog covers the imprimitive groups G(de,e,l) with r = de >= 2 and
l >= 2 (symmetric groups G(1,1,l) and cyclic groups G(d,1,1) are refused).
Hyperplanes are ker(x_i) for d > 1 and ker(x_i - zeta*x_j) for all r-th
roots of unity zeta; the order multiplicity omega is d on coordinate
hyperplanes and 2 elsewhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .field import CyclotomicNumber, zeta
from .poly import MultiPoly, default_names


class HypothesisViolation(ValueError):
    """A closed-form exponent formula was called outside its hypotheses."""


class LinearForm:
    """A nonzero linear form, canonicalized so its first nonzero coefficient is 1."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[CyclotomicNumber]):
        coeffs = list(coeffs)
        pivot = next((i for i, c in enumerate(coeffs) if not c.is_zero()), None)
        if pivot is None:
            raise ValueError("linear form must be nonzero")
        scale = coeffs[pivot].inverse()
        self.coeffs = tuple(c * scale for c in coeffs)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def poly(self, names: Sequence[str] | None = None) -> MultiPoly:
        n = self.nvars
        terms = {}
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return MultiPoly(n, terms, names or default_names(n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        from .poly import poly_to_str

        return f"LinearForm({poly_to_str(self.poly())!r})"


@dataclass(frozen=True)
class MultiArrangement:
    """A central multi-arrangement: pairwise distinct hyperplanes with multiplicities."""

    ell: int
    forms: tuple[LinearForm, ...]
    mult: tuple[int, ...]

    def __post_init__(self):
        if len(self.forms) != len(self.mult):
            raise ValueError("forms and multiplicities must have equal length")
        for f in self.forms:
            if f.nvars != self.ell:
                raise ValueError("form dimension mismatch")
        if any(m < 0 for m in self.mult):
            raise ValueError("multiplicities must be non-negative")
        if len(set(self.forms)) != len(self.forms):
            raise ValueError("hyperplanes must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.forms)

    def order(self) -> int:
        return sum(self.mult)

    def defining_polynomial(self, names: Sequence[str] | None = None) -> MultiPoly:
        q = MultiPoly.const(self.ell, 1, names or default_names(self.ell))
        for f, m in zip(self.forms, self.mult):
            if m:
                q = q * (f.poly(names) ** m)
        return q

    def with_mult(self, mult: Sequence[int]) -> "MultiArrangement":
        return MultiArrangement(self.ell, self.forms, tuple(mult))

    def drop_zero_mult(self) -> "MultiArrangement":
        kept = [(f, m) for f, m in zip(self.forms, self.mult) if m > 0]
        return MultiArrangement(self.ell, tuple(f for f, _ in kept), tuple(m for _, m in kept))

    def canonical_key(self) -> str:
        from .poly import poly_to_str

        rows = sorted(f"{poly_to_str(f.poly())}^{m}" for f, m in zip(self.forms, self.mult))
        return f"ell={self.ell};" + ";".join(rows)

    def localization(self, subset: Sequence[int]) -> tuple["MultiArrangement", int]:
        """Hyperplanes containing the intersection of the chosen ones, plus its rank."""
        if not subset:
            raise ValueError("subset must be non-empty")
        from .linalg import rank_of_rows, row_in_span

        span_rows = [self.forms[i].coeffs for i in subset]
        rank = rank_of_rows(span_rows)
        kept = [i for i in range(self.size)
                if row_in_span(self.forms[i].coeffs, span_rows)]
        return (MultiArrangement(self.ell,
                                 tuple(self.forms[i] for i in kept),
                                 tuple(self.mult[i] for i in kept)), rank)


_GROUP_RE = re.compile(r"\s*G\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


@dataclass(frozen=True)
class GroupSpec:
    """The group G(r,p,l) written as G(de,e,l) with d = r/p, e = p."""

    d: int
    e: int
    ell: int

    def __post_init__(self):
        if self.d < 1 or self.e < 1:
            raise ValueError("d and e must be positive")
        if self.d * self.e < 2:
            raise ValueError("excluded group: G(1,1,l) is the symmetric group")
        if self.ell < 2:
            raise ValueError("excluded group: rank-1 (cyclic) groups are not supported")

    @staticmethod
    def parse(text: str) -> "GroupSpec":
        m = _GROUP_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse group name {text!r}; expected G(r,p,l)")
        r, p, ell = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if p < 1 or r % p != 0:
            raise ValueError(f"invalid group G({r},{p},{ell}): p must divide r")
        return GroupSpec(d=r // p, e=p, ell=ell)

    @property
    def r(self) -> int:
        return self.d * self.e

    def name(self) -> str:
        return f"G({self.r},{self.e},{self.ell})"

    @property
    def coxeter_number(self) -> int:
        if self.d == 1:
            return (self.ell - 1) * self.r
        return (self.ell - 1) * self.r + self.d

    def num_hyperplanes(self) -> int:
        coords = self.ell if self.d > 1 else 0
        return coords + self.r * self.ell * (self.ell - 1) // 2

    def is_well_generated(self) -> bool:
        return self.e == 1 or self.d == 1

    def coexponents(self) -> list[int]:
        """Exponents of the simple reflection arrangement (multiplicity 1)."""
        return predict_exponents(self, 0, 1)

    def __str__(self) -> str:
        return self.name()


def reflection_arrangement(spec: GroupSpec) -> MultiArrangement:
    """The reflection arrangement of G(r,p,l) carrying the order multiplicity."""
    ell, r, d = spec.ell, spec.r, spec.d
    one = CyclotomicNumber.one()
    z = CyclotomicNumber.zero()
    forms: list[LinearForm] = []
    mult: list[int] = []
    if d > 1:
        for i in range(ell):
            forms.append(LinearForm([one if j == i else z for j in range(ell)]))
            mult.append(d)
    for i in range(ell):
        for j in range(i + 1, ell):
            for k in range(r):
                coeffs = [z] * ell
                coeffs[i] = one
                coeffs[j] = -zeta(r, k)
                forms.append(LinearForm(coeffs))
                mult.append(2)
    return MultiArrangement(ell, tuple(forms), tuple(mult))


def multi_arrangement(spec: GroupSpec, m: int, shift: int) -> MultiArrangement:
    """(A(W), m*omega + shift) with zero-multiplicity hyperplanes dropped."""
    base = reflection_arrangement(spec)
    mult = tuple(m * w + shift for w in base.mult)
    return base.with_mult(mult).drop_zero_mult()


def imprimitive_multiarrangement(r: int, ell: int, m_vec: Sequence[int],
                                 pair_mult: int) -> MultiArrangement:
    """Defining polynomial x1^m1 ... xl^ml * prod (x_i^r - x_j^r)^pair_mult."""
    if len(m_vec) != ell:
        raise ValueError("m_vec length must equal ell")
    one = CyclotomicNumber.one()
    z = CyclotomicNumber.zero()
    forms: list[LinearForm] = []
    mult: list[int] = []
    for i, mi in enumerate(m_vec):
        if mi > 0:
            forms.append(LinearForm([one if j == i else z for j in range(ell)]))
            mult.append(mi)
    if pair_mult > 0:
        for i in range(ell):
            for j in range(i + 1, ell):
                for k in range(r):
                    coeffs = [z] * ell
                    coeffs[i] = one
                    coeffs[j] = -zeta(r, k)
                    forms.append(LinearForm(coeffs))
                    mult.append(pair_mult)
    return MultiArrangement(ell, tuple(forms), tuple(mult))


def predict_exponents(spec: GroupSpec, m: int, shift: int) -> list[int]:
    """Exponents of (A(W), m*omega + shift), sorted ascending.

    shift=0 gives the constant multiset {mh}; shift=1 adds the coexponents
    of the appropriate twist of the dual reflection representation, by the
    three-way case split on (d, e).
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if shift not in (0, 1):
        raise ValueError("shift must be 0 or 1")
    ell, r, d, e = spec.ell, spec.r, spec.d, spec.e
    h = spec.coxeter_number
    if shift == 0:
        return [m * h] * ell
    if d == 1:
        coexp = [(ell - 1) * r - ell + 1] + [j * r + 1 for j in range(ell - 1)]
        return sorted(m * h + n for n in coexp)
    if e == 1:
        coexp = [j * d + 1 for j in range(ell)]
        return sorted(m * h + n for n in coexp)
    # d, e >= 2: the twist has period e, with b = m // e.
    b = m // e
    exps = [(m - b) * (ell - 1) * r + ell * d * m + 1]
    exps += [(m * (ell - 1) + b + j) * r + 1 for j in range(1, ell)]
    return sorted(exps)


def predict_exponents_general(r: int, ell: int, m: int, m_vec: Sequence[int],
                              parity: str) -> list[int]:
    """Exponents of x1^m1...xl^ml * prod (x_i^r - x_j^r)^(2m or 2m+1).

    Requires q = floor((m_i - 1)/r) to be independent of i.
    """
    if r < 2 or ell < 2:
        raise ValueError("need r >= 2 and ell >= 2")
    if len(m_vec) != ell or any(mi < 0 for mi in m_vec) or m < 0:
        raise ValueError("invalid multiplicity data")
    qs = {(mi - 1) // r for mi in m_vec}
    if len(qs) != 1:
        raise HypothesisViolation(
            f"floor((m_i-1)/r) must not depend on i; got {sorted(qs)} for m_vec={list(m_vec)}")
    q = qs.pop()
    a = (ell - 1) * r
    if parity == "even":
        return sorted(m * a + mi for mi in m_vec)
    if parity == "odd":
        c = m * a + q * r + 1
        m_total = sum(m_vec)
        return sorted([c + m_total - ell * (q * r + 1)] + [c + j * r for j in range(1, ell)])
    raise ValueError("parity must be 'even' or 'odd'")


def psi_exponents(d: int, e: int, ell: int, s: int) -> list[int]:
    """Exponents of the s-th twist of the dual reflection representation, dualized.

    The twist has order e, so s is reduced mod e before the closed form
    {d(s(l-1)+l)-1} + {d(ke-s)-1 : k=1..l-1} is applied.
    """
    if d < 2 or e < 2 or ell < 2:
        raise ValueError("requires d >= 2, e >= 2, ell >= 2")
    s %= e
    exps = [d * (s * (ell - 1) + ell) - 1]
    exps += [d * (k * e - s) - 1 for k in range(1, ell)]
    return sorted(exps)


def check_constant_h(spec: GroupSpec, m: int) -> bool:
    """Cross-check the shift-1 exponents against the dual-twist closed form.

    True iff predict_exponents(spec, m, 1) equals
    {(m+1)h - n : n in psi_exponents(d, e, ell, e-1-(m mod e))}.
    """
    if spec.d < 2 or spec.e < 2:
        raise ValueError("requires d >= 2 and e >= 2")
    h = spec.coxeter_number
    lhs = predict_exponents(spec, m, 1)
    s = spec.e - 1 - (m % spec.e)
    rhs = sorted((m + 1) * h - n for n in psi_exponents(spec.d, spec.e, spec.ell, s))
    return lhs == rhs
