"""Sparse multivariate polynomials over cyclotomic fields.

A polynomial is a dict mapping exponent tuples to nonzero CyclotomicNumber
coefficients.  The monomial order used everywhere (division, leading terms,
canonical printing) is graded lexicographic: compare total degree first,
then the exponent tuple lexicographically.

Text syntax (round-trips exactly through parse_poly / poly_to_str):
terms joined by + and -, rational coefficients as a/b, variables x1..xN or
t1..tN, powers with ^, explicit * between factors, z{n} for the primitive
n-th root of unity.  Example: 1/18*t1^3 + t1*t2.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .field import CyclotomicNumber, zeta

Monomial = tuple[int, ...]
ScalarLike = Union[int, Fraction, CyclotomicNumber]


class NonDivisibleError(ArithmeticError):
    """Raised by exact_divide when the division leaves a remainder."""

    def __init__(self, remainder: "MultiPoly"):
        super().__init__("polynomial division left a nonzero remainder")
        self.remainder = remainder


def _grlex_key(mono: Monomial) -> tuple[int, Monomial]:
    return (sum(mono), mono)


def default_names(nvars: int, letter: str = "x") -> tuple[str, ...]:
    return tuple(f"{letter}{i + 1}" for i in range(nvars))


class MultiPoly:
    """Immutable sparse polynomial; do not mutate .terms after construction."""

    __slots__ = ("nvars", "terms", "names")

    def __init__(self, nvars: int, terms: Mapping[Monomial, CyclotomicNumber] | None = None,
                 names: Sequence[str] | None = None):
        self.nvars = nvars
        self.names = tuple(names) if names is not None else default_names(nvars)
        if len(self.names) != nvars:
            raise ValueError("names length must equal nvars")
        clean: dict[Monomial, CyclotomicNumber] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != nvars:
                    raise ValueError("monomial length mismatch")
                if not coeff.is_zero():
                    clean[mono] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int, names: Sequence[str] | None = None) -> "MultiPoly":
        return MultiPoly(nvars, {}, names)

    @staticmethod
    def const(nvars: int, value: ScalarLike, names: Sequence[str] | None = None) -> "MultiPoly":
        c = value if isinstance(value, CyclotomicNumber) else CyclotomicNumber.from_rational(value)
        return MultiPoly(nvars, {(0,) * nvars: c}, names)

    @staticmethod
    def variable(nvars: int, index: int, names: Sequence[str] | None = None) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise IndexError("variable index out of range")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return MultiPoly(nvars, {mono: CyclotomicNumber.one()}, names)

    @staticmethod
    def monomial(nvars: int, mono: Monomial, coeff: ScalarLike = 1,
                 names: Sequence[str] | None = None) -> "MultiPoly":
        c = coeff if isinstance(coeff, CyclotomicNumber) else CyclotomicNumber.from_rational(coeff)
        return MultiPoly(nvars, {tuple(mono): c}, names)

    def with_names(self, names: Sequence[str]) -> "MultiPoly":
        return MultiPoly(self.nvars, self.terms, names)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Total degree; None is the degree of the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(m) for m in self.terms}
        return len(degrees) <= 1

    def homogeneous_degree(self) -> int | None:
        """Degree if homogeneous and nonzero, else raises/None for zero."""
        if not self.terms:
            return None
        degrees = {sum(m) for m in self.terms}
        if len(degrees) != 1:
            raise ValueError("polynomial is not homogeneous")
        return degrees.pop()

    def leading(self) -> tuple[Monomial, CyclotomicNumber]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms, key=_grlex_key)
        return mono, self.terms[mono]

    def coefficient(self, mono: Monomial) -> CyclotomicNumber:
        return self.terms.get(tuple(mono), CyclotomicNumber.zero())

    def constant_value(self) -> CyclotomicNumber:
        """The value of a degree-0 polynomial."""
        if self.is_zero():
            return CyclotomicNumber.zero()
        if self.degree() != 0:
            raise ValueError("polynomial is not constant")
        return self.terms[(0,) * self.nvars]

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            cur = out.get(mono)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return MultiPoly(self.nvars, out, self.names)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()}, self.names)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.nvars, self.names)
        out: dict[Monomial, CyclotomicNumber] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                cur = out.get(mono)
                s = prod if cur is None else cur + prod
                if s.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return MultiPoly(self.nvars, out, self.names)

    def scale(self, value: ScalarLike) -> "MultiPoly":
        c = value if isinstance(value, CyclotomicNumber) else CyclotomicNumber.from_rational(value)
        if c.is_zero():
            return MultiPoly.zero(self.nvars, self.names)
        return MultiPoly(self.nvars, {m: co * c for m, co in self.terms.items()}, self.names)

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.nvars, 1, self.names)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset((m, c) for m, c in self.terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({poly_to_str(self)!r})"

    # -- calculus and division ---------------------------------------------

    def partial_derivative(self, index: int) -> "MultiPoly":
        if not 0 <= index < self.nvars:
            raise IndexError("variable index out of range")
        out: dict[Monomial, CyclotomicNumber] = {}
        for mono, coeff in self.terms.items():
            e = mono[index]
            if e == 0:
                continue
            new = list(mono)
            new[index] = e - 1
            out[tuple(new)] = coeff * e
        return MultiPoly(self.nvars, out, self.names)

    def divide_with_remainder(self, divisor: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        """Single-divisor reduction in graded-lex order."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_mono, lead_coeff = divisor.leading()
        lead_inv = lead_coeff.inverse()
        quot: dict[Monomial, CyclotomicNumber] = {}
        rem: dict[Monomial, CyclotomicNumber] = {}
        work = dict(self.terms)
        while work:
            mono = max(work, key=_grlex_key)
            coeff = work.pop(mono)
            if all(a >= b for a, b in zip(mono, lead_mono)):
                q_mono = tuple(a - b for a, b in zip(mono, lead_mono))
                q_coeff = coeff * lead_inv
                quot[q_mono] = quot.get(q_mono, CyclotomicNumber.zero()) + q_coeff
                for d_mono, d_coeff in divisor.terms.items():
                    if d_mono == lead_mono:
                        continue
                    t = tuple(a + b for a, b in zip(q_mono, d_mono))
                    s = work.get(t, CyclotomicNumber.zero()) - q_coeff * d_coeff
                    if s.is_zero():
                        work.pop(t, None)
                    else:
                        work[t] = s
            else:
                rem[mono] = coeff
        return (MultiPoly(self.nvars, quot, self.names),
                MultiPoly(self.nvars, rem, self.names))

    def exact_divide(self, divisor: "MultiPoly") -> "MultiPoly":
        """Quotient self / divisor, raising NonDivisibleError on a remainder."""
        quot, rem = self.divide_with_remainder(divisor)
        if not rem.is_zero():
            raise NonDivisibleError(rem)
        return quot

    def substitute(self, assignments: Mapping[int, "MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials for variables (exact composition).

        All assigned polynomials must share one nvars; unassigned variables
        pass through, which requires the target space to match self.
        """
        if not assignments:
            return self
        targets = list(assignments.values())
        target_nvars = targets[0].nvars
        target_names = targets[0].names
        for t in targets:
            if t.nvars != target_nvars:
                raise ValueError("assigned polynomials disagree on nvars")
        full = {}
        for i in range(self.nvars):
            if i in assignments:
                full[i] = assignments[i]
            else:
                if target_nvars != self.nvars:
                    raise ValueError(f"variable {i} unassigned but target space differs")
                full[i] = MultiPoly.variable(target_nvars, i, target_names)
        power_cache: dict[tuple[int, int], MultiPoly] = {}

        def var_power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = full[i] ** e
            return power_cache[key]

        result = MultiPoly.zero(target_nvars, target_names)
        for mono, coeff in self.terms.items():
            term = MultiPoly.const(target_nvars, coeff, target_names)
            for i, e in enumerate(mono):
                if e:
                    term = term * var_power(i, e)
            result = result + term
        return result


def linear_power_divides(p: MultiPoly, alpha: MultiPoly, k: int) -> bool:
    """Whether alpha^k divides p exactly, for alpha homogeneous of degree 1.

    Uses the Taylor-coefficient criterion: change coordinates so alpha becomes
    a coordinate and check that the k lowest-order coefficients in that
    coordinate all vanish.  No full expansion is performed beyond order k.
    """
    if k < 0:
        raise ValueError("power must be non-negative")
    if k == 0 or p.is_zero():
        return True
    if alpha.is_zero() or alpha.degree() != 1 or not alpha.is_homogeneous():
        raise ValueError("divisor must be a nonzero linear form")
    coeffs = [alpha.coefficient(tuple(1 if j == i else 0 for j in range(alpha.nvars)))
              for i in range(alpha.nvars)]
    pivot = next(i for i, c in enumerate(coeffs) if not c.is_zero())
    pivot_inv = coeffs[pivot].inverse()
    # Normalize so the pivot coefficient is 1 (divisibility is scale-invariant).
    rest = [(i, c * pivot_inv) for i, c in enumerate(coeffs) if i != pivot and not c.is_zero()]
    # In coordinates y1 = alpha(x) (scaled), y_t = x_t for t != pivot:
    # x_pivot = y1 - sum rest_c * y_t.  Collect coefficients of y1^j, j < k.
    low: dict[tuple[int, Monomial], CyclotomicNumber] = {}
    for mono, coeff in p.terms.items():
        a = mono[pivot]
        base = list(mono)
        base[pivot] = 0
        for j in range(min(k, a + 1)):
            c_j = coeff * comb(a, j)
            power = a - j
            # Expand (-sum rest)^power over the nonzero off-pivot coefficients.
            for split, split_coeff in _multinomial_terms(rest, power):
                resid = list(base)
                for (var, _), e in zip(rest, split):
                    resid[var] += e
                key = (j, tuple(resid))
                val = c_j * split_coeff
                cur = low.get(key)
                s = val if cur is None else cur + val
                if s.is_zero():
                    low.pop(key, None)
                else:
                    low[key] = s
    return not low


def _multinomial_terms(rest: list[tuple[int, CyclotomicNumber]], power: int):
    """Terms of (-(c_1 y_1 + ... + c_r y_r))^power as (exponent split, coefficient)."""
    sign = CyclotomicNumber.from_rational((-1) ** power)
    if power == 0:
        yield (0,) * len(rest), CyclotomicNumber.one()
        return
    if not rest:
        return  # (0)^power with power > 0 contributes nothing
    if len(rest) == 1:
        yield (power,), sign * (rest[0][1] ** power)
        return
    # Small number of variables only; enumerate compositions directly.
    for split in _compositions(power, len(rest)):
        coeff = sign * CyclotomicNumber.from_rational(_multinomial(power, split))
        for (_, c), e in zip(rest, split):
            if e:
                coeff = coeff * (c ** e)
        yield split, coeff


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _multinomial(total: int, split: Sequence[int]) -> int:
    out = 1
    rem = total
    for e in split:
        out *= comb(rem, e)
        rem -= e
    return out


def cyclotomic_polynomial(n: int) -> MultiPoly:
    """The n-th cyclotomic polynomial as a univariate polynomial over Q."""
    from .field import cyclotomic_coeffs

    coeffs = cyclotomic_coeffs(n)
    terms = {(e,): CyclotomicNumber.from_rational(c) for e, c in enumerate(coeffs) if c}
    return MultiPoly(1, terms)


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z]\w*|\*\*|[-+*/^()])")


class PolyParseError(ValueError):
    pass


class _Parser:
    def __init__(self, text: str, nvars: int, names: Sequence[str]):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.nvars = nvars
        self.names = {name: i for i, name in enumerate(names)}
        self.display = tuple(names)

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise PolyParseError(f"unexpected character at: {text[pos:pos + 10]!r}")
            tok = m.group(1)
            tokens.append("^" if tok == "**" else tok)
            pos = m.end()
        return tokens

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of input")
        self.pos += 1
        return tok

    def parse(self) -> MultiPoly:
        result = self.expr()
        if self.peek() is not None:
            raise PolyParseError(f"trailing input near {self.peek()!r}")
        return result

    def expr(self) -> MultiPoly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        result = self.term().scale(sign)
        while self.peek() in ("+", "-"):
            sign = 1
            while self.peek() in ("+", "-"):
                if self.take() == "-":
                    sign = -sign
            result = result + self.term().scale(sign)
        return result

    def term(self) -> MultiPoly:
        result = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op == "*":
                result = result * rhs
            else:
                value = rhs.constant_value()
                if value.is_zero():
                    raise PolyParseError("division by zero in coefficient")
                result = result.scale(value.inverse())
        return result

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp_tok = self.take()
            neg = False
            if exp_tok == "-":
                neg, exp_tok = True, self.take()
            if not exp_tok.isdigit():
                raise PolyParseError(f"expected integer exponent, got {exp_tok!r}")
            if neg:
                raise PolyParseError("negative exponents are not allowed")
            return base ** int(exp_tok)
        return base

    def atom(self) -> MultiPoly:
        tok = self.take()
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise PolyParseError("expected closing parenthesis")
            return inner
        if tok == "-":
            return -self.atom()
        if tok.isdigit():
            return MultiPoly.const(self.nvars, int(tok), self.display)
        if tok in self.names:
            return MultiPoly.variable(self.nvars, self.names[tok], self.display)
        m = re.fullmatch(r"z(\d+)", tok)
        if m:
            return MultiPoly.const(self.nvars, zeta(int(m.group(1))), self.display)
        raise PolyParseError(f"unknown token {tok!r}")


def parse_poly(text: str, nvars: int, names: Sequence[str] | None = None) -> MultiPoly:
    names = tuple(names) if names is not None else default_names(nvars)
    return _Parser(text, nvars, names).parse()


def poly_to_str(p: MultiPoly) -> str:
    """Canonical rendering, graded-lex descending; inverse of parse_poly."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for mono in sorted(p.terms, key=_grlex_key, reverse=True):
        coeff = p.terms[mono]
        factors = [f"{p.names[i]}^{e}" if e > 1 else p.names[i]
                   for i, e in enumerate(mono) if e > 0]
        if coeff.is_rational():
            f = coeff.as_fraction()
            sign = "-" if f < 0 else "+"
            mag = abs(f)
            mag_str = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if factors:
                body = "*".join(factors) if mag == 1 else "*".join([mag_str] + factors)
            else:
                body = mag_str
        else:
            sign = "+"
            body = "*".join([coeff.to_str()] + factors) if factors else coeff.to_str()
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)
