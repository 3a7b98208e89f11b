"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element of Q(zeta_n) is stored in the power basis 1, z, ..., z^(phi(n)-1)
of the field, reduced modulo the n-th cyclotomic polynomial.  Coefficients
are kept as a tuple of integer numerators over one positive common
denominator, with overall content 1, so equality is plain tuple comparison
and the hot arithmetic paths stay in machine integers.

Mixing elements of different orders embeds both into Q(zeta_lcm) first.
Q itself is the order-1 field (phi(1) = 1), so rationals are just the
degenerate case and need no separate coefficient type.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, "CyclotomicNumber"]


def _euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_int(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Divide dense integer polynomials (ascending coefficients); den must be monic."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        quot[i - dn] = c
        for j, d in enumerate(den):
            num[i - dn + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, all divisions exact.
    num = [0] * (n + 1)
    num[0] = -1
    num[n] = 1
    coeffs = num
    for d in range(1, n):
        if n % d == 0:
            coeffs, rem = _poly_divmod_int(coeffs, cyclotomic_coeffs(d))
            if rem:
                raise ArithmeticError("cyclotomic division must be exact")
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _reduction_rows(n: int, max_power: int) -> tuple[tuple[int, ...], ...]:
    """Power-basis expansions of zeta_n^t for t = 0..max_power.

    Phi_n is monic with integer coefficients, so every row is integral.
    """
    phi = _euler_phi(n)
    coeffs = cyclotomic_coeffs(n)
    rows: list[tuple[int, ...]] = []
    for t in range(max_power + 1):
        if t < phi:
            row = [0] * phi
            row[t] = 1
            rows.append(tuple(row))
        else:
            # zeta^t = zeta * zeta^(t-1), then substitute
            # zeta^phi = -(coeffs[0] + ... + coeffs[phi-1] z^(phi-1)).
            prev = rows[t - 1]
            shifted = [0] + list(prev[:-1])
            top = prev[-1]
            if top:
                for s in range(phi):
                    shifted[s] -= top * coeffs[s]
            rows.append(tuple(shifted))
    return tuple(rows)


def _reduce_power_vector(n: int, vec: list[int]) -> list[int]:
    """Reduce an integer vector of zeta_n powers into the power basis."""
    phi = _euler_phi(n)
    if len(vec) <= phi:
        return vec + [0] * (phi - len(vec))
    rows = _reduction_rows(n, len(vec) - 1)
    out = [0] * phi
    for t, c in enumerate(vec):
        if c == 0:
            continue
        row = rows[t]
        for s in range(phi):
            out[s] += c * row[s]
    return out


class CyclotomicNumber:
    """An element of Q(zeta_n), immutable and reduced mod the n-th cyclotomic polynomial."""

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, num: Iterable[int], den: int = 1):
        num = list(num)
        phi = _euler_phi(order)
        if len(num) != phi:
            raise ValueError(f"expected {phi} coefficients for order {order}, got {len(num)}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den = -den
            num = [-c for c in num]
        g = 0
        for c in num:
            g = math.gcd(g, c)
        if g == 0:
            den = 1
        else:
            g = math.gcd(g, den)
            if g > 1:
                num = [c // g for c in num]
                den //= g
        self.order = order
        self.num = tuple(num)
        self.den = den

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_rational(value: Union[int, Fraction]) -> "CyclotomicNumber":
        f = Fraction(value)
        return CyclotomicNumber(1, (f.numerator,), f.denominator)

    @staticmethod
    def zero() -> "CyclotomicNumber":
        return _ZERO

    @staticmethod
    def one() -> "CyclotomicNumber":
        return _ONE

    # -- predicates and conversions ---------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def embed(self, order: int) -> "CyclotomicNumber":
        """Embed into Q(zeta_order); requires self.order | order."""
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError(f"cannot embed order {self.order} into order {order}")
        step = order // self.order
        vec = [0] * ((len(self.num) - 1) * step + 1) if self.num else [0]
        for t, c in enumerate(self.num):
            if c:
                vec[t * step] = c
        return CyclotomicNumber(order, _reduce_power_vector(order, vec), self.den)

    def _common(self, other: "CyclotomicNumber") -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if self.order == other.order:
            return self, other
        n = self.order * other.order // math.gcd(self.order, other.order)
        return self.embed(n), other.embed(n)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value: Scalar) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value
        return CyclotomicNumber.from_rational(value)

    def __add__(self, other: Scalar) -> "CyclotomicNumber":
        other = self._coerce(other)
        a, b = self._common(other)
        da, db = a.den, b.den
        num = [x * db + y * da for x, y in zip(a.num, b.num)]
        return CyclotomicNumber(a.order, num, da * db)

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.order, tuple(-c for c in self.num), self.den)

    def __sub__(self, other: Scalar) -> "CyclotomicNumber":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "CyclotomicNumber":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "CyclotomicNumber":
        other = self._coerce(other)
        a, b = self._common(other)
        if a.order == 1:
            return CyclotomicNumber(1, (a.num[0] * b.num[0],), a.den * b.den)
        la, lb = a.num, b.num
        conv = [0] * (len(la) + len(lb) - 1)
        for i, x in enumerate(la):
            if x == 0:
                continue
            for j, y in enumerate(lb):
                if y:
                    conv[i + j] += x * y
        return CyclotomicNumber(a.order, _reduce_power_vector(a.order, conv), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended Euclidean algorithm mod Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber(1, (self.den * (1 if self.num[0] > 0 else -1),), abs(self.num[0]))
        # Extended Euclid over Q[x] between the representative and Phi_n.
        phi_poly = [Fraction(c) for c in cyclotomic_coeffs(self.order)]
        a = [Fraction(c, self.den) for c in self.num]
        while a and a[-1] == 0:
            a.pop()
        r0, r1 = phi_poly, a
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def poly_deg(p: list[Fraction]) -> int:
            return len(p) - 1

        while poly_deg(r1) > 0:
            q, rem = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s_new = _frac_poly_sub(s0, _frac_poly_mul(q, s1))
            s0, s1 = s1, s_new
            if not r1:
                raise ArithmeticError("representative shares a factor with the cyclotomic polynomial")
        lead = r1[0]
        inv_coeffs = [c / lead for c in s1]
        den = 1
        for c in inv_coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        vec = [int(c * den) for c in inv_coeffs]
        vec = _reduce_power_vector(self.order, vec)
        return CyclotomicNumber(self.order, vec, den)

    def __truediv__(self, other: Scalar) -> "CyclotomicNumber":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "CyclotomicNumber":
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "CyclotomicNumber":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = _ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self) -> int:
        # Equal values can live in different orders (zeta_6^2 == zeta_3), so
        # the hash must not depend on the representation: rationals hash as
        # fractions, all other values share one bucket and equality decides.
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return 0x5D138A5

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.to_str()!r})"

    def to_str(self) -> str:
        """Render in the text syntax understood by the polynomial parser."""
        if self.is_rational():
            f = self.as_fraction()
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        parts = []
        for power, c in enumerate(self.num):
            if c == 0:
                continue
            coeff = Fraction(c, self.den)
            mag = abs(coeff)
            mag_str = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if power == 0:
                term = mag_str
            else:
                z = f"z{self.order}" if power == 1 else f"z{self.order}^{power}"
                term = z if mag == 1 else f"{mag_str}*{z}"
            if not parts:
                parts.append(term if coeff > 0 else f"-{term}")
            else:
                parts.append(f" + {term}" if coeff > 0 else f" - {term}")
        return "(" + "".join(parts) + ")"


def _frac_poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    inv_lead = 1 / b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] == 0:
            continue
        c = a[i] * inv_lead
        q[i - db] = c
        for j, d in enumerate(b):
            a[i - db + j] -= c * d
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _frac_poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _frac_poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    out = [x - y for x, y in zip(a, b)]
    while out and out[-1] == 0:
        out.pop()
    return out if out else [Fraction(0)]


def zeta(order: int, power: int = 1) -> CyclotomicNumber:
    """The root of unity zeta_order^power as a field element."""
    if order < 1:
        raise ValueError("order must be positive")
    power %= order
    vec = [0] * (power + 1)
    vec[power] = 1
    return CyclotomicNumber(order, _reduce_power_vector(order, vec))


def euler_phi(n: int) -> int:
    return _euler_phi(n)


_ZERO = CyclotomicNumber(1, (0,))
_ONE = CyclotomicNumber(1, (1,))
