"""Basis construction through flat systems of invariants.

A validated FlatStructure bundles, for a well-generated group, the flat
fundamental invariants t_i(x), the potential vector field g(t), and the
matrices derived from them: Btilde_i with entries d^2 g_k / dt_i dt_j, the
Saito matrix M_xi = sum wt(t_i) t_i Btilde_i of the flat derivation system,
and the constant diagonal B_inf with entries (d_i - h - 1)/h.

The primitive vector field is d/dt_last.  Its inverse connection acts
C[t']-linearly on derivations written in the t-coordinates; iterating it m
times on the Euler field and pushing the result into x-coordinates yields,
after one application of the flat connection per basis direction, certified
bases of the multi-arrangements with multiplicity m*omega + mu.

Flat data is ingested from config files (it is tabulated input, not derived
here).  Config format, one key per line, # comments allowed:

    group = G(3,1,2)
    degrees = 3, 6
    invariant = x1^3 + x2^3          # repeated, degree-ordered
    potential = 1/18*t1^3 + t1*t2    # repeated, in t-variables
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .arrangements import GroupSpec, MultiArrangement, reflection_arrangement
from .derivations import Derivation, Verdict, constant_ratio, poly_matrix_det, ziegler_check
from .poly import MultiPoly, NonDivisibleError, default_names, linear_power_divides, parse_poly

TDerivation = Derivation  # coefficients live in the t-variables


class FlatValidationError(ValueError):
    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class NonPolynomialTransfer(ArithmeticError):
    """Transfer to x-coordinates required a division that is not exact."""


@dataclass
class FlatStructure:
    group: GroupSpec
    degrees: tuple[int, ...]
    invariants: tuple[MultiPoly, ...]   # t_i(x)
    potential: tuple[MultiPoly, ...]    # g_i(t)
    btilde: tuple[tuple[tuple[MultiPoly, ...], ...], ...]
    m_xi: tuple[tuple[MultiPoly, ...], ...]
    m_tilde: tuple[tuple[MultiPoly, ...], ...]
    arrangement: MultiArrangement

    @property
    def ell(self) -> int:
        return self.group.ell

    @property
    def h(self) -> int:
        return self.degrees[-1]

    def weight(self, i: int) -> Fraction:
        return Fraction(self.degrees[i], self.h)

    def b_inf_diagonal(self) -> list[Fraction]:
        return [Fraction(d - self.h - 1, self.h) for d in self.degrees]

    def t_names(self) -> tuple[str, ...]:
        return default_names(self.ell, "t")

    def euler_t(self) -> TDerivation:
        """xi_1 = sum wt(t_i) t_i d/dt_i."""
        names = self.t_names()
        return Derivation([
            MultiPoly.variable(self.ell, i, names).scale(self.weight(i))
            for i in range(self.ell)
        ])


def _parse_flat_text(text: str) -> dict:
    data: dict[str, list[str]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, value = line.split("=", 1)
        data.setdefault(key.strip(), []).append(value.strip())
    return data


def shipped_config_path(name: str) -> str:
    """Path of a config distributed with the package, by bare name (e.g. 'g312')."""
    base = resources.files("arrkit").joinpath("configs")
    candidate = base.joinpath(f"{name}.flat")
    if not candidate.is_file():
        raise FileNotFoundError(f"no shipped flat config named {name!r}")
    return str(candidate)


def resolve_flat_config(spec_or_name) -> str | None:
    """Best-effort lookup of a shipped config for a group (None if absent)."""
    if isinstance(spec_or_name, GroupSpec):
        name = f"g{spec_or_name.r}{spec_or_name.e}{spec_or_name.ell}"
    else:
        name = str(spec_or_name)
    try:
        return shipped_config_path(name)
    except FileNotFoundError:
        return None


def load_flat_structure(source: str) -> FlatStructure:
    """Load and validate a flat structure from a config path or literal text.

    Validation covers: homogeneous invariants of the stated degrees, the
    last Btilde being the identity, M_xi - t_last * 1 being free of t_last,
    weight homogeneity of the M_xi entries, and the Jacobian determinant
    factoring as the product of the hyperplane forms to the power e_H - 1.
    """
    if os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    data = _parse_flat_text(text)
    for required in ("group", "degrees", "invariant", "potential"):
        if required not in data:
            raise ValueError(f"flat config is missing the {required!r} field")
    group = GroupSpec.parse(data["group"][0])
    ell = group.ell
    degrees = tuple(int(v) for v in data["degrees"][0].split(","))
    if len(degrees) != ell or sorted(degrees) != list(degrees):
        raise FlatValidationError("degrees", "need ell ascending degrees")
    if degrees[-1] != group.coxeter_number:
        raise FlatValidationError("degrees", "largest degree must be the Coxeter number")
    x_names = default_names(ell, "x")
    t_names = default_names(ell, "t")
    invariants = tuple(parse_poly(s, ell, x_names) for s in data["invariant"])
    potential = tuple(parse_poly(s, ell, t_names) for s in data["potential"])
    if len(invariants) != ell or len(potential) != ell:
        raise FlatValidationError("degrees", "need ell invariants and ell potential entries")
    for i, (t_poly, d) in enumerate(zip(invariants, degrees)):
        if t_poly.is_zero() or not t_poly.is_homogeneous() or t_poly.homogeneous_degree() != d:
            raise FlatValidationError(
                "invariant_homogeneity", f"invariant {i + 1} is not homogeneous of degree {d}")

    h = degrees[-1]
    weights = [Fraction(d, h) for d in degrees]
    zero = MultiPoly.zero(ell, t_names)
    btilde = []
    for i in range(ell):
        matrix = []
        for j in range(ell):
            row = []
            for k in range(ell):
                row.append(potential[k].partial_derivative(i).partial_derivative(j))
            matrix.append(tuple(row))
        btilde.append(tuple(matrix))
    m_xi = []
    for j in range(ell):
        row = []
        for k in range(ell):
            entry = zero
            for i in range(ell):
                entry = entry + (MultiPoly.variable(ell, i, t_names).scale(weights[i])
                                 * btilde[i][j][k])
            row.append(entry)
        m_xi.append(tuple(row))

    identity = [[MultiPoly.const(ell, 1 if a == b else 0, t_names) for b in range(ell)]
                for a in range(ell)]
    for a in range(ell):
        for b in range(ell):
            if btilde[ell - 1][a][b] != identity[a][b]:
                raise FlatValidationError(
                    "btilde_last_identity", "the last Btilde matrix must be the identity")

    t_last = MultiPoly.variable(ell, ell - 1, t_names)
    m_tilde = []
    for a in range(ell):
        row = []
        for b in range(ell):
            entry = m_xi[a][b] - (t_last if a == b else zero)
            if any(mono[ell - 1] != 0 for mono in entry.terms):
                raise FlatValidationError(
                    "mtilde_free_of_last", f"M_xi - t_{ell}*1 entry ({a + 1},{b + 1}) involves t_{ell}")
            row.append(entry)
        m_tilde.append(tuple(row))

    for a in range(ell):
        for b in range(ell):
            target = 1 - weights[a] + weights[b]
            for mono in m_xi[a][b].terms:
                w = sum(e * weights[t] for t, e in enumerate(mono))
                if w != target:
                    raise FlatValidationError(
                        "weight_homogeneity",
                        f"M_xi entry ({a + 1},{b + 1}) has a monomial of weight {w}, expected {target}")

    arrangement = reflection_arrangement(group)
    fs = FlatStructure(group, degrees, invariants, potential,
                       tuple(btilde), tuple(m_xi), tuple(m_tilde), arrangement)
    jac = jacobians(fs, validate=True)  # raises FlatValidationError on mismatch
    del jac
    return fs


@dataclass
class Jacobians:
    j_tx: list[list[MultiPoly]]   # entry (i, j) = d t_j / d x_i
    det: MultiPoly
    adjugate: list[list[MultiPoly]]


def jacobians(fs: FlatStructure, validate: bool = False) -> Jacobians:
    ell = fs.ell
    j_tx = [[fs.invariants[j].partial_derivative(i) for j in range(ell)]
            for i in range(ell)]
    det = poly_matrix_det(j_tx)
    if det.is_zero():
        raise FlatValidationError("jacobian_factorization", "Jacobian determinant vanishes")
    if validate:
        target = MultiPoly.const(ell, 1)
        for form, e_h in zip(fs.arrangement.forms, fs.arrangement.mult):
            target = target * (form.poly() ** (e_h - 1))
        if constant_ratio(det, target) is None:
            raise FlatValidationError(
                "jacobian_factorization",
                "det J_tx is not the product of hyperplane forms to the powers e_H - 1")
    adj = _adjugate(j_tx)
    return Jacobians(j_tx, det, adj)


def _adjugate(matrix: list[list[MultiPoly]]) -> list[list[MultiPoly]]:
    n = len(matrix)
    nvars = matrix[0][0].nvars
    names = matrix[0][0].names
    if n == 1:
        return [[MultiPoly.const(nvars, 1, names)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[matrix[a][b] for b in range(n) if b != j]
                     for a in range(n) if a != i]
            cof = poly_matrix_det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def nabla_d_base(fs: FlatStructure, k: int, i: int,
                 memo: dict[tuple[int, int], TDerivation]) -> TDerivation:
    """inverse-primitive-connection image of t_last^k d/dt_i."""
    key = (k, i)
    cached = memo.get(key)
    if cached is not None:
        return cached
    ell, h = fs.ell, fs.h
    t_names = fs.t_names()
    if k == 0:
        scale = Fraction(h, h + 1 - fs.degrees[i])
        result = Derivation([fs.m_xi[i][j].scale(scale) for j in range(ell)])
    else:
        t_last_k = MultiPoly.monomial(ell, tuple(0 if t < ell - 1 else k for t in range(ell)),
                                      1, t_names)
        xi_row = [t_last_k * fs.m_xi[i][j] for j in range(ell)]
        acc = [MultiPoly.zero(ell, t_names) for _ in range(ell)]
        for j in range(ell):
            factor = fs.m_tilde[i][j]
            if factor.is_zero():
                continue
            prev = nabla_d_base(fs, k - 1, j, memo)
            for c in range(ell):
                acc[c] = acc[c] + factor * prev.coeffs[c]
        scale = Fraction(h, (k + 1) * h + 1 - fs.degrees[i])
        result = Derivation([(xi_row[c] - acc[c].scale(k)).scale(scale) for c in range(ell)])
    memo[key] = result
    return result


def nabla_d_inverse(fs: FlatStructure, theta: TDerivation,
                    memo: dict | None = None) -> TDerivation:
    """C[t']-linear inverse of the primitive direction of the flat connection."""
    if memo is None:
        memo = {}
    ell = fs.ell
    t_names = fs.t_names()
    out = [MultiPoly.zero(ell, t_names) for _ in range(ell)]
    for i, poly in enumerate(theta.coeffs):
        for mono, coeff in poly.terms.items():
            k = mono[ell - 1]
            tprime = mono[:ell - 1] + (0,)
            base = nabla_d_base(fs, k, i, memo)
            factor = MultiPoly.monomial(ell, tprime, coeff, t_names)
            for c in range(ell):
                out[c] = out[c] + factor * base.coeffs[c]
    return Derivation(out)


def nabla_d_inverse_m_euler(fs: FlatStructure, m: int,
                            memo: dict | None = None) -> TDerivation:
    """m-fold inverse-primitive image of the Euler field, in t-coordinates."""
    if m < 0:
        raise ValueError("m must be non-negative")
    theta = fs.euler_t()
    if memo is None:
        memo = {}
    for _ in range(m):
        theta = nabla_d_inverse(fs, theta, memo)
    return theta


def apply_primitive(fs: FlatStructure, theta: TDerivation) -> TDerivation:
    """The flat connection along the primitive direction, on the t-side.

    In x-coordinates the connection is the componentwise directional
    derivative; pulled back to t-coordinates it acquires a correction from
    the non-constant frame:

        g = d f / dt_last - (M_xi^{-1} (B_inf + 1))^T f,

    computed exactly through the adjugate.  The result is polynomial on the
    image of the inverse map (and in particular inverts it); a failed
    division means theta was outside that domain.
    """
    ell = fs.ell
    f = list(theta.coeffs)
    det = poly_matrix_det([list(row) for row in fs.m_xi])
    adj = _adjugate([list(row) for row in fs.m_xi])
    out = []
    for j in range(ell):
        # n_j = (adj^T f)_j = sum_i adj[i][j] * f_i
        n_j = MultiPoly.zero(ell, fs.t_names())
        for i in range(ell):
            if not f[i].is_zero():
                n_j = n_j + adj[i][j] * f[i]
        correction = n_j.scale(Fraction(fs.degrees[j] - 1, fs.h))
        numerator = f[j].partial_derivative(ell - 1) * det - correction
        try:
            out.append(numerator.exact_divide(det) if not numerator.is_zero() else numerator)
        except NonDivisibleError as exc:
            raise NonPolynomialTransfer(
                "derivation is outside the domain of the primitive connection") from exc
    return Derivation(out)


def to_x_coordinates(fs: FlatStructure, theta: TDerivation,
                     jac: Jacobians | None = None) -> Derivation:
    """Transfer a t-coordinate derivation into x-coordinates.

    Substitutes t_i -> t_i(x), multiplies by the inverse Jacobian through the
    adjugate, and divides each entry by det J exactly; a failed division
    signals invalid flat data.
    """
    if jac is None:
        jac = jacobians(fs)
    ell = fs.ell
    subs = {i: fs.invariants[i] for i in range(ell)}
    g_hat = [c.substitute(subs) for c in theta.coeffs]
    x_names = default_names(ell, "x")
    out = []
    for j in range(ell):
        num = MultiPoly.zero(ell, x_names)
        for i in range(ell):
            if not g_hat[i].is_zero():
                num = num + jac.adjugate[i][j] * g_hat[i]
        try:
            out.append(num.exact_divide(jac.det) if not num.is_zero() else num)
        except NonDivisibleError as exc:
            raise NonPolynomialTransfer(
                f"component {j + 1} is not polynomial after transfer") from exc
    return Derivation(out)


def nabla_theta(theta: Derivation, delta: Derivation) -> Derivation:
    """Flat connection in x-coordinates: apply theta to delta's coefficients."""
    return Derivation([theta.apply(c) for c in delta.coeffs])


def build_basis_wellgen(fs: FlatStructure, mu_basis: Sequence[Derivation],
                        mu: Sequence[int], m: int) -> tuple[list[Derivation], Verdict, list[int]]:
    """Basis of D(A, m*omega + mu) from a certified basis of D(A, mu).

    mu maps each hyperplane of the reflection arrangement to 0 or 1.  The
    returned family is nabla_{theta_i} of the m-fold inverse-primitive Euler
    field, certified against the target multiplicity; its exponents are
    m*h + pdeg(theta_i).
    """
    base = fs.arrangement
    if len(mu) != base.size or any(v not in (0, 1) for v in mu):
        raise ValueError("mu must assign 0 or 1 to every hyperplane")
    mu_arr = base.with_mult(tuple(mu)).drop_zero_mult()
    pre = ziegler_check(list(mu_basis), mu_arr)
    if not pre.certified:
        raise ValueError(f"mu-basis is not certified for (A, mu): {pre}")
    jac = jacobians(fs)
    lam = to_x_coordinates(fs, nabla_d_inverse_m_euler(fs, m), jac)
    built = [nabla_theta(theta, lam) for theta in mu_basis]
    target_mult = tuple(m * w + v for w, v in zip(base.mult, mu))
    target = base.with_mult(target_mult).drop_zero_mult()
    verdict = ziegler_check(built, target)
    exponents = sorted(m * fs.h + theta.pdeg() for theta in mu_basis)
    return built, verdict, exponents


def lifting_check(fs: FlatStructure, m: int, h_index: int,
                  jac: Jacobians | None = None,
                  lam: Derivation | None = None) -> bool:
    """Divisibility alpha_H^(m e_H + 1) | (inverse-primitive^m Euler)(alpha_H)."""
    base = fs.arrangement
    if lam is None:
        lam = to_x_coordinates(fs, nabla_d_inverse_m_euler(fs, m), jac)
    alpha = base.forms[h_index].poly()
    e_h = base.mult[h_index]
    return linear_power_divides(lam.apply(alpha), alpha, m * e_h + 1)
