#!/usr/bin/env python3
"""Walk through the full G(3,1,2) flat-pipeline computation, printing every
intermediate object: derived matrices, the inverse-primitive images of the
Euler field, the Jacobians, and the certified basis of D(A, omega)."""

from fractions import Fraction

from arrkit.derivations import Derivation
from arrkit.flat import (
    build_basis_wellgen,
    jacobians,
    load_flat_structure,
    nabla_d_base,
    nabla_d_inverse,
    nabla_d_inverse_m_euler,
    shipped_config_path,
    to_x_coordinates,
)
from arrkit.poly import MultiPoly, parse_poly, poly_to_str


def show_matrix(label, rows):
    print(f"{label}:")
    for row in rows:
        print("   [" + ", ".join(poly_to_str(e) for e in row) + "]")


def show_derivation(label, theta, letter="t"):
    body = " , ".join(f"({poly_to_str(c)}) d/d{letter}{i + 1}"
                      for i, c in enumerate(theta.coeffs))
    print(f"{label}: {body}")


def main():
    fs = load_flat_structure(shipped_config_path("g312"))
    print(f"group {fs.group.name()}, degrees {list(fs.degrees)}, "
          f"weights {[str(fs.weight(i)) for i in range(fs.ell)]}")
    for i, mat in enumerate(fs.btilde):
        show_matrix(f"Btilde_{i + 1}", mat)
    show_matrix("M_xi", fs.m_xi)
    print("-B_inf diagonal:", [str(-b) for b in fs.b_inf_diagonal()])

    memo = {}
    for i in range(fs.ell):
        show_derivation(f"inverse-primitive of d/dt{i + 1}", nabla_d_base(fs, 0, i, memo))
    t2d2 = Derivation([parse_poly("0", 2, ("t1", "t2")), parse_poly("t2", 2, ("t1", "t2"))])
    show_derivation("inverse-primitive of t2 d/dt2", nabla_d_inverse(fs, t2d2, memo))
    e_in = nabla_d_inverse_m_euler(fs, 1, memo)
    show_derivation("inverse-primitive of the Euler field", e_in)

    jac = jacobians(fs)
    show_matrix("J_tx", jac.j_tx)
    print("det J_tx:", poly_to_str(jac.det))
    lam = to_x_coordinates(fs, e_in, jac)
    show_derivation("same, in x-coordinates", lam, letter="x")

    ell = fs.ell
    partials = [Derivation([MultiPoly.const(ell, 1) if c == i else MultiPoly.zero(ell)
                            for c in range(ell)]) for i in range(ell)]
    built, verdict, exps = build_basis_wellgen(fs, partials, [0] * fs.arrangement.size, 1)
    for i, theta in enumerate(built):
        show_derivation(f"Theta_{i + 1}", theta, letter="x")
    print(f"verdict: {verdict.kind}; exponents {exps}")


if __name__ == "__main__":
    main()
