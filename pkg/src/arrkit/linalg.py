"""Exact fraction-free linear algebra over cyclotomic fields.

Rows are converted to integer vectors (one machine-integer block of length
phi(n) per entry, common denominators cleared per row) and eliminated
fraction-free: each update row' = pivot_value * row - row_value * pivot_row
is followed by division of the row by its integer content, which keeps
coefficient growth tame without ever leaving exact arithmetic.

Pivot rows are kept in insertion order.  Every stored pivot row was reduced
against all pivots existing at its insertion, so reducing a fresh row in
insertion order never reintroduces a previously eliminated column, and
back-substitution in reverse insertion order sees only already-solved
pivot columns.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .field import CyclotomicNumber, _reduction_rows, euler_phi

Entry = object  # int when phi == 1, list[int] of length phi otherwise


class FieldOps:
    """Arithmetic on raw integer-vector entries of Q(zeta_order)."""

    def __init__(self, order: int):
        self.order = order
        self.phi = euler_phi(order)
        self.red = _reduction_rows(order, 2 * self.phi - 2) if self.phi > 1 else None

    def zero(self) -> Entry:
        return 0 if self.phi == 1 else [0] * self.phi

    def is_zero(self, a: Entry) -> bool:
        return a == 0 if self.phi == 1 else not any(a)

    def mul(self, a: Entry, b: Entry) -> Entry:
        if self.phi == 1:
            return a * b
        phi = self.phi
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = conv[:phi]
        for t in range(phi, 2 * phi - 1):
            c = conv[t]
            if c:
                row = self.red[t]
                for s in range(phi):
                    out[s] += c * row[s]
        return out

    def from_cyclotomic(self, value: CyclotomicNumber) -> tuple[Entry, int]:
        """Entry plus the denominator that was cleared."""
        v = value.embed(self.order) if value.order != self.order else value
        if self.phi == 1:
            return v.num[0], v.den
        return list(v.num), v.den

    def to_cyclotomic(self, a: Entry, den: int = 1) -> CyclotomicNumber:
        if self.phi == 1:
            return CyclotomicNumber(self.order, (a,), den)
        return CyclotomicNumber(self.order, list(a), den)


def _row_content(row: Sequence[Entry], phi: int) -> int:
    g = 0
    if phi == 1:
        for v in row:
            if v:
                g = math.gcd(g, v)
                if g == 1:
                    return 1
    else:
        for v in row:
            for c in v:
                if c:
                    g = math.gcd(g, c)
                    if g == 1:
                        return 1
    return g


def _normalize_row(row: list[Entry], phi: int) -> None:
    g = _row_content(row, phi)
    if g > 1:
        if phi == 1:
            for i, v in enumerate(row):
                if v:
                    row[i] = v // g
        else:
            for v in row:
                for s in range(phi):
                    if v[s]:
                        v[s] //= g


class Echelon:
    """Incremental fraction-free Gaussian elimination over Q(zeta_order)."""

    def __init__(self, ncols: int, order: int):
        self.ncols = ncols
        self.ops = FieldOps(order)
        self.pivot_cols: list[int] = []   # insertion order
        self.pivot_rows: list[list[Entry]] = []

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def reduce_row(self, row: list[Entry]) -> list[Entry]:
        """Reduce a row against the current pivots (row is consumed)."""
        ops = self.ops
        phi = ops.phi
        if phi == 1:
            for pc, prow in zip(self.pivot_cols, self.pivot_rows):
                v = row[pc]
                if v:
                    pv = prow[pc]
                    for i in range(self.ncols):
                        row[i] = pv * row[i] - v * prow[i]
                    _normalize_row(row, 1)
        else:
            for pc, prow in zip(self.pivot_cols, self.pivot_rows):
                v = row[pc]
                if any(v):
                    pv = prow[pc]
                    for i in range(self.ncols):
                        row[i] = [a - b for a, b in
                                  zip(ops.mul(pv, row[i]), ops.mul(v, prow[i]))]
                    _normalize_row(row, phi)
        return row

    def add_row(self, row: list[Entry]) -> bool:
        """Insert a row; returns True if it increased the rank."""
        row = self.reduce_row(row)
        ops = self.ops
        pc = next((i for i in range(self.ncols) if not ops.is_zero(row[i])), None)
        if pc is None:
            return False
        self.pivot_cols.append(pc)
        self.pivot_rows.append(row)
        return True

    def kernel_basis(self) -> list[list[Entry]]:
        """Primitive integer kernel vectors, one per free column."""
        ops = self.ops
        phi = ops.phi
        pivot_set = set(self.pivot_cols)
        free_cols = [c for c in range(self.ncols) if c not in pivot_set]
        order_desc = list(range(len(self.pivot_cols) - 1, -1, -1))
        basis: list[list[Entry]] = []
        one: Entry = 1 if phi == 1 else [1] + [0] * (phi - 1)
        for f in free_cols:
            v: list[Entry] = [ops.zero() for _ in range(self.ncols)]
            v[f] = one if phi == 1 else list(one)
            for k in order_desc:
                prow = self.pivot_rows[k]
                pc = self.pivot_cols[k]
                if phi == 1:
                    s = 0
                    for c in range(self.ncols):
                        if c != pc and prow[c] and v[c]:
                            s += prow[c] * v[c]
                    if s == 0:
                        continue
                    pv = prow[pc]
                    for c in range(self.ncols):
                        if v[c]:
                            v[c] *= pv
                    v[pc] = -s
                else:
                    s = ops.zero()
                    for c in range(self.ncols):
                        if c != pc and not ops.is_zero(prow[c]) and not ops.is_zero(v[c]):
                            prod = ops.mul(prow[c], v[c])
                            s = [a + b for a, b in zip(s, prod)]
                    if ops.is_zero(s):
                        continue
                    pv = prow[pc]
                    for c in range(self.ncols):
                        if not ops.is_zero(v[c]):
                            v[c] = ops.mul(pv, v[c])
                    v[pc] = [-a for a in s]
                _normalize_row(v, phi)
            _normalize_row(v, phi)
            basis.append(v)
        return basis


def cyclotomic_rows_to_entries(rows: Iterable[Sequence[CyclotomicNumber]],
                               order: int) -> list[list[Entry]]:
    ops = FieldOps(order)
    out = []
    for row in rows:
        pairs = [ops.from_cyclotomic(c) for c in row]
        common = 1
        for _, den in pairs:
            common = common * den // math.gcd(common, den)
        if ops.phi == 1:
            out.append([num * (common // den) for num, den in pairs])
        else:
            out.append([[c * (common // den) for c in num] for num, den in pairs])
    return out


def common_order(values: Iterable[CyclotomicNumber]) -> int:
    n = 1
    for v in values:
        n = n * v.order // math.gcd(n, v.order)
    return n


def rank_of_rows(rows: Sequence[Sequence[CyclotomicNumber]]) -> int:
    rows = list(rows)
    if not rows:
        return 0
    order = common_order(c for row in rows for c in row)
    ech = Echelon(len(rows[0]), order)
    for row in cyclotomic_rows_to_entries(rows, order):
        ech.add_row(row)
    return ech.rank


def row_in_span(row: Sequence[CyclotomicNumber],
                span_rows: Sequence[Sequence[CyclotomicNumber]]) -> bool:
    span_rows = list(span_rows)
    base = rank_of_rows(span_rows)
    return rank_of_rows(span_rows + [list(row)]) == base


def solve_linear(rows: Sequence[Sequence[CyclotomicNumber]],
                 rhs: Sequence[CyclotomicNumber]) -> list[CyclotomicNumber] | None:
    """One solution of rows * x = rhs over Q(zeta), or None if inconsistent."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    order = common_order([c for row in rows for c in row] + list(rhs))
    # Homogenize: append -rhs as an extra column and find a kernel vector
    # with nonzero last coordinate.
    ech = Echelon(ncols + 1, order)
    aug = cyclotomic_rows_to_entries(
        [list(row) + [-r] for row, r in zip(rows, rhs)], order)
    for row in aug:
        ech.add_row(row)
    ops = ech.ops
    for vec in ech.kernel_basis():
        if not ops.is_zero(vec[ncols]):
            scale = ops.to_cyclotomic(vec[ncols]).inverse()
            return [ops.to_cyclotomic(vec[i]) * scale for i in range(ncols)]
    return None


def primitive_integer_nullvector(matrix: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """A primitive integer vector spanning part of the nullspace.

    Raises ValueError if the matrix has full column rank.  The returned
    vector is content-free; the caller fixes the sign convention.
    """
    ech = Echelon(ncols, 1)
    for row in matrix:
        ech.add_row(list(row))
    basis = ech.kernel_basis()
    if not basis:
        raise ValueError("system has only the trivial solution")
    return list(basis[0])
