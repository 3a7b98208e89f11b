"""Brute-force ground truth for D(A,nu) by degreewise exact linear algebra.

For each degree p the membership conditions are assembled as a linear
system on the coefficient vectors of degree-p derivations: for every
hyperplane, the truncated Taylor coefficients of theta(alpha_H) of orders
0..nu(H)-1 along alpha_H must vanish (the same coordinate-change criterion
as linear_power_divides).  Kernel dimensions and kernel vectors come from
exact fraction-free elimination over Q(zeta).

When the arrangement is stable under coordinatewise scaling by n-th roots
of unity (all forms touch at most two coordinates and each pair's
coefficient multiset is rotation-closed with multiplicities), the system
block-diagonalizes over the joint eigenspaces of that scaling action; the
blocks are solved independently and their kernel dimensions added.  This
is a mechanical change of basis, equivalent to the full solve, and is
cross-checked against it in the test suite.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .arrangements import LinearForm, MultiArrangement
from .derivations import Derivation, Verdict, ziegler_check
from .field import CyclotomicNumber, zeta
from .linalg import Echelon, FieldOps, common_order, cyclotomic_rows_to_entries, solve_linear
from .poly import MultiPoly, default_names, linear_power_divides


class OracleInconsistency(RuntimeError):
    """The degree profile contradicts freeness (or the bound was too small)."""


class ExtractionFailure(RuntimeError):
    def __init__(self, message: str, profile: "DegreeProfile | None" = None):
        super().__init__(message)
        self.profile = profile


@dataclass
class DegreeProfile:
    dims: dict[int, int] = field(default_factory=dict)
    bound: int = -1


@dataclass
class GeneratorReport:
    degrees: list[int]
    profile: DegreeProfile
    complete: bool


@dataclass
class ExtractResult:
    basis: list[Derivation]
    degrees: list[int]
    verdict: Verdict
    profile: DegreeProfile


def _monomials(ell: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of the given total degree, graded-lex descending."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, ell)
    return out


def _split_hyperplanes(A: MultiArrangement):
    """(coordinate multiplicities by variable, list of (form, mult) others)."""
    coord: dict[int, int] = {}
    others: list[tuple[LinearForm, int]] = []
    for f, m in zip(A.forms, A.mult):
        if m == 0:
            continue
        support = [i for i, c in enumerate(f.coeffs) if not c.is_zero()]
        if len(support) == 1:
            coord[support[0]] = m
        else:
            others.append((f, m))
    return coord, others


def scaling_symmetry(A: MultiArrangement) -> int:
    """Largest n >= 2 such that coordinatewise scaling by n-th roots of unity
    permutes the hyperplanes with multiplicities, or 1 when none applies."""
    coord, others = _split_hyperplanes(A)
    if not others:
        return 1
    pairs: dict[tuple[int, int], list[tuple[CyclotomicNumber, int]]] = {}
    for f, m in others:
        support = [i for i, c in enumerate(f.coeffs) if not c.is_zero()]
        if len(support) != 2:
            return 1
        i, j = support
        pairs.setdefault((i, j), []).append((f.coeffs[j], m))
    max_n = min(len(v) for v in pairs.values())
    for n in range(max_n, 1, -1):
        zn = zeta(n)
        ok = True
        for entries in pairs.values():
            for c, m in entries:
                rotated = c * zn
                if not any(rotated == c2 and m == m2 for c2, m2 in entries):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return n
    return 1


def _field_order(A: MultiArrangement) -> int:
    return common_order(c for f in A.forms for c in f.coeffs)


def _columns(A: MultiArrangement, p: int) -> list[tuple[int, tuple[int, ...]]]:
    """Unknowns (component i, monomial) after applying coordinate-hyperplane
    divisibility as a monomial filter."""
    coord, _ = _split_hyperplanes(A)
    cols = []
    monos = _monomials(A.ell, p)
    for i in range(A.ell):
        need = coord.get(i, 0)
        for mono in monos:
            if mono[i] >= need:
                cols.append((i, mono))
    return cols


def _row_entries_for_column(form: LinearForm, mult: int, i: int, mono: tuple[int, ...]):
    """Yield (row_key, coefficient) pairs for one unknown against one hyperplane.

    row_key = (taylor order j, residual monomial over the non-pivot variables);
    the coefficient multiplies the unknown's value in that condition row.
    """
    alpha_i = form.coeffs[i]
    if alpha_i.is_zero():
        return
    support = [t for t, c in enumerate(form.coeffs) if not c.is_zero()]
    s = support[0]
    rest = [(t, form.coeffs[t]) for t in support[1:]]
    a_s = mono[s]
    base = list(mono)
    base[s] = 0
    if len(rest) == 1:
        u, c_u = rest[0]
        for j in range(min(mult, a_s + 1)):
            coeff = alpha_i * comb(a_s, j) * ((-c_u) ** (a_s - j))
            resid = list(base)
            resid[u] += a_s - j
            yield (j, tuple(resid)), coeff
    else:
        from .poly import _multinomial_terms

        for j in range(min(mult, a_s + 1)):
            c_j = alpha_i * comb(a_s, j)
            for split, split_coeff in _multinomial_terms(rest, a_s - j):
                resid = list(base)
                for (t, _), e in zip(rest, split):
                    resid[t] += e
                yield (j, tuple(resid)), c_j * split_coeff


def _class_key(i: int, mono: tuple[int, ...], n: int) -> tuple[int, ...]:
    return tuple((e - (1 if t == i else 0)) % n for t, e in enumerate(mono))


def _solve_blocks(A: MultiArrangement, p: int, decompose: bool, want_vectors: bool):
    """Shared worker: kernel dimension and optionally kernel vectors at degree p."""
    order = _field_order(A)
    cols = _columns(A, p)
    _, others = _split_hyperplanes(A)
    n = scaling_symmetry(A) if decompose else 1

    blocks: dict[tuple[int, ...], list[int]] = {}
    for idx, (i, mono) in enumerate(cols):
        blocks.setdefault(_class_key(i, mono, n), []).append(idx)

    total_dim = 0
    vectors: list[list[CyclotomicNumber]] = []
    for block_cols in blocks.values():
        local_index = {cols[c]: k for k, c in enumerate(block_cols)}
        rows: dict[tuple, dict[int, CyclotomicNumber]] = {}
        for k, c in enumerate(block_cols):
            i, mono = cols[c]
            for h_idx, (form, mult) in enumerate(others):
                for key, coeff in _row_entries_for_column(form, mult, i, mono):
                    row = rows.setdefault((h_idx,) + key, {})
                    cur = row.get(k)
                    s = coeff if cur is None else cur + coeff
                    if s.is_zero():
                        row.pop(k, None)
                    else:
                        row[k] = s
        ncols = len(block_cols)
        ech = Echelon(ncols, order)
        zero = CyclotomicNumber.zero()
        dense_rows = []
        for row in rows.values():
            if row:
                dense_rows.append([row.get(k, zero) for k in range(ncols)])
        for entry_row in cyclotomic_rows_to_entries(dense_rows, order):
            ech.add_row(entry_row)
        total_dim += ncols - ech.rank
        if want_vectors:
            ops = ech.ops
            for vec in ech.kernel_basis():
                full = [CyclotomicNumber.zero()] * len(cols)
                for k, c in enumerate(block_cols):
                    if not ops.is_zero(vec[k]):
                        full[c] = ops.to_cyclotomic(vec[k])
                vectors.append(full)
    if not want_vectors:
        return total_dim, None, cols
    # Deterministic order and sign: sort by leading column, normalize leading
    # entry's first nonzero integer component to be positive.
    def leading(vec):
        return next(i for i, c in enumerate(vec) if not c.is_zero())

    normalized = []
    for vec in vectors:
        lead = vec[leading(vec)]
        first = next(c for c in lead.num if c != 0)
        if first < 0:
            vec = [-c for c in vec]
        normalized.append(vec)
    normalized.sort(key=leading)
    return total_dim, normalized, cols


def module_dimension(A: MultiArrangement, p: int, decompose: bool = True) -> int:
    """dim over the coefficient field of the degree-p part of D(A,nu)."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    dim, _, _ = _solve_blocks(A, p, decompose, want_vectors=False)
    return dim


def membership_kernel(A: MultiArrangement, p: int,
                      decompose: bool = True) -> list[Derivation]:
    """A deterministic basis of the degree-p part of D(A,nu)."""
    _, vectors, cols = _solve_blocks(A, p, decompose, want_vectors=True)
    names = default_names(A.ell)
    out = []
    for vec in vectors:
        comp_terms: list[dict] = [dict() for _ in range(A.ell)]
        for (i, mono), c in zip(cols, vec):
            if not c.is_zero():
                comp_terms[i][mono] = c
        out.append(Derivation([MultiPoly(A.ell, t, names) for t in comp_terms]))
    return out


def default_bound(A: MultiArrangement, predicted: Sequence[int] | None) -> int:
    if predicted:
        return max(predicted) + 1
    return A.order()


def generator_degrees(A: MultiArrangement, bound: int | None = None,
                      predicted: Sequence[int] | None = None,
                      decompose: bool = True) -> GeneratorReport:
    """Degrees of new generators of D(A,nu), assuming a free graded module.

    At each degree p the expected dimension from already-found generators is
    sum over gens of C(p - e + ell - 1, ell - 1); any surplus is a new
    generator, and a deficit means the module is not free (or the bound was
    too small), which raises OracleInconsistency rather than guessing.
    """
    if bound is None:
        bound = default_bound(A, predicted)
    ell = A.ell
    target = A.order()
    profile = DegreeProfile(bound=bound)
    gens: list[int] = []
    for p in range(bound + 1):
        dim = module_dimension(A, p, decompose)
        profile.dims[p] = dim
        expected = sum(comb(p - e + ell - 1, ell - 1) for e in gens if p >= e)
        new = dim - expected
        if new < 0:
            raise OracleInconsistency(
                f"degree {p}: dimension {dim} below free-module count {expected}")
        gens.extend([p] * new)
        if len(gens) > ell:
            raise OracleInconsistency(
                f"degree {p}: found {len(gens)} generators in rank {ell}")
        if len(gens) == ell:
            if sum(gens) != target:
                raise OracleInconsistency(
                    f"found {ell} generators of total degree {sum(gens)} != |nu| = {target}")
            return GeneratorReport(sorted(gens), profile, complete=True)
    return GeneratorReport(sorted(gens), profile, complete=False)


def extract_basis(A: MultiArrangement, bound: int | None = None,
                  predicted: Sequence[int] | None = None,
                  decompose: bool = True) -> ExtractResult:
    """A certified homogeneous basis of D(A,nu), or an ExtractionFailure.

    Kernel vectors at each generator degree are taken in graded-lex order of
    their leading coefficient positions, skipping those inside the submodule
    generated so far (checked degreewise by exact elimination).
    """
    report = generator_degrees(A, bound=bound, predicted=predicted, decompose=decompose)
    if not report.complete:
        raise ExtractionFailure(
            f"only generators {report.degrees} found up to degree {report.profile.bound}",
            report.profile)
    order = _field_order(A)
    names = default_names(A.ell)
    chosen: list[Derivation] = []
    for p in sorted(set(report.degrees)):
        count = report.degrees.count(p)
        cols = _columns(A, p)
        col_index = {col: k for k, col in enumerate(cols)}
        ech = Echelon(len(cols), order)
        # Span of S-multiples of previously chosen generators in degree p.
        for g in chosen:
            e = g.pdeg()
            for shift in _monomials(A.ell, p - e):
                row = [CyclotomicNumber.zero()] * len(cols)
                for i, poly in enumerate(g.coeffs):
                    for mono, c in poly.terms.items():
                        key = (i, tuple(a + b for a, b in zip(mono, shift)))
                        row[col_index[key]] = c
                ech.add_row(cyclotomic_rows_to_entries([row], order)[0])
        taken = 0
        for candidate in membership_kernel(A, p, decompose):
            row = [CyclotomicNumber.zero()] * len(cols)
            for i, poly in enumerate(candidate.coeffs):
                for mono, c in poly.terms.items():
                    row[col_index[(i, mono)]] = c
            if ech.add_row(cyclotomic_rows_to_entries([row], order)[0]):
                chosen.append(candidate)
                taken += 1
                if taken == count:
                    break
        if taken < count:
            raise ExtractionFailure(
                f"could not select {count} independent generators at degree {p}",
                report.profile)
    verdict = ziegler_check(chosen, A)
    return ExtractResult(chosen, report.degrees, verdict, report.profile)


# -- Euler multiplicities and triples ----------------------------------------


def _essential_rank2(A: MultiArrangement, h0: int, h1: int,
                     mix: Sequence[Sequence[CyclotomicNumber]] | None = None):
    """Localize at the codim-2 flat of hyperplanes h0, h1 and express all
    localized forms in an exact basis (beta1, beta2) of their span.

    Returns (2-dim arrangement, image of alpha_{h0} as a LinearForm).
    """
    loc, rank = A.localization([h0, h1])
    if rank != 2:
        raise ValueError("chosen hyperplanes do not define a rank-2 flat")
    alpha0 = A.forms[h0].coeffs
    alpha1 = A.forms[h1].coeffs
    if mix is None:
        beta1, beta2 = list(alpha0), list(alpha1)
    else:
        (a, b), (c, d) = mix
        if (a * d - b * c).is_zero():
            raise ValueError("mixing matrix must be invertible")
        beta1 = [a * u + b * v for u, v in zip(alpha0, alpha1)]
        beta2 = [c * u + d * v for u, v in zip(alpha0, alpha1)]
    rows = [[beta1[t], beta2[t]] for t in range(A.ell)]
    forms2 = []
    for f in loc.forms:
        sol = solve_linear(rows, list(f.coeffs))
        if sol is None:
            raise ArithmeticError("localized form left the rank-2 span")
        forms2.append(LinearForm(sol))
    alpha0_sol = solve_linear(rows, list(alpha0))
    arr2 = MultiArrangement(2, tuple(forms2), loc.mult)
    return arr2, LinearForm(alpha0_sol)


def euler_multiplicity(A: MultiArrangement, h0: int, h1: int,
                       mix: Sequence[Sequence[CyclotomicNumber]] | None = None) -> int:
    """The Euler multiplicity at the flat of hyperplanes h0 and h1.

    Extracts a homogeneous basis of the essentialized rank-2 localization and
    returns the degree of the lowest basis element with a coefficient vector
    not divisible by the image of alpha_{h0} (the normal form that pairs one
    generator outside alpha0*Der with one inside).
    """
    if A.mult[h0] < 1:
        raise ValueError("the distinguished hyperplane needs multiplicity >= 1")
    arr2, alpha0 = _essential_rank2(A, h0, h1, mix)
    result = extract_basis(arr2)
    if not result.verdict.certified:
        raise ExtractionFailure(f"rank-2 localization not certified: {result.verdict}")
    alpha0_poly = alpha0.poly()
    for theta in sorted(result.basis, key=lambda t: t.pdeg()):
        divisible = all(linear_power_divides(c, alpha0_poly, 1) for c in theta.coeffs)
        if not divisible:
            return theta.pdeg()
    raise ArithmeticError("no basis element outside alpha0*Der; basis cannot be valid")


@dataclass
class TripleResult:
    deletion: MultiArrangement
    restriction: MultiArrangement
    chosen_hyperplane: int
    restriction_reps: list[int]  # representative hyperplane index per restricted flat


def triple(A: MultiArrangement, h0: int) -> TripleResult:
    """Deletion and Euler-restriction of (A,nu) with respect to hyperplane h0."""
    if A.mult[h0] < 1:
        raise ValueError("deletion needs multiplicity >= 1 at the chosen hyperplane")
    new_mult = list(A.mult)
    new_mult[h0] -= 1
    deletion = A.with_mult(new_mult).drop_zero_mult()

    alpha0 = A.forms[h0].coeffs
    s = next(t for t, c in enumerate(alpha0) if not c.is_zero())
    keep = [t for t in range(A.ell) if t != s]
    groups: dict[LinearForm, int] = {}
    for idx in range(A.size):
        if idx == h0:
            continue
        coeffs = A.forms[idx].coeffs
        restricted = [coeffs[t] - coeffs[s] * alpha0[t] for t in keep]
        form = LinearForm(restricted)
        if form not in groups:
            groups[form] = idx
    forms = list(groups.keys())
    reps = [groups[f] for f in forms]
    mult = [euler_multiplicity(A, h0, rep) for rep in reps]
    restriction = MultiArrangement(A.ell - 1, tuple(forms), tuple(mult))
    return TripleResult(deletion, restriction, h0, reps)


def addition_deletion_pattern(exp_full: Sequence[int], exp_del: Sequence[int],
                              exp_res: Sequence[int]) -> bool:
    """Whether the three exponent multisets match the addition-deletion shape
    {b_1..b_l}, {b_1..b_{l-1}, b_l - 1}, {b_1..b_{l-1}}."""
    full = sorted(exp_full)
    res = sorted(exp_res)
    remaining = list(full)
    for b in res:
        if b in remaining:
            remaining.remove(b)
        else:
            return False
    if len(remaining) != 1:
        return False
    b_l = remaining[0]
    return sorted(exp_del) == sorted(res + [b_l - 1])


def arrangement_hash(A: MultiArrangement) -> str:
    return hashlib.sha256(A.canonical_key().encode()).hexdigest()[:16]


def oracle_report(A: MultiArrangement, bound: int | None = None,
                  predicted: Sequence[int] | None = None) -> dict:
    """Machine-readable record of an oracle run."""
    start = time.perf_counter()
    verdict = "certified-basis"
    degrees: list[int] = []
    profile = DegreeProfile()
    try:
        result = extract_basis(A, bound=bound, predicted=predicted)
        degrees = result.degrees
        profile = result.profile
        verdict = result.verdict.kind
    except (OracleInconsistency, ExtractionFailure) as exc:
        verdict = f"inconclusive: {exc}"
        if isinstance(exc, ExtractionFailure) and exc.profile is not None:
            profile = exc.profile
    elapsed = time.perf_counter() - start
    return {
        "arrangement": arrangement_hash(A),
        "degree_profile": {str(p): d for p, d in sorted(profile.dims.items())},
        "generator_degrees": degrees,
        "verdict": verdict,
        "wall_time_seconds": round(elapsed, 6),
    }
