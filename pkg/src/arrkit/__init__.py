"""arrkit: exact certified bases of derivation modules of reflection multi-arrangements."""

from .field import CyclotomicNumber, cyclotomic_coeffs, euler_phi, zeta
from .poly import (
    MultiPoly,
    NonDivisibleError,
    cyclotomic_polynomial,
    linear_power_divides,
    parse_poly,
    poly_to_str,
)
from .arrangements import (
    GroupSpec,
    HypothesisViolation,
    LinearForm,
    MultiArrangement,
    check_constant_h,
    imprimitive_multiarrangement,
    multi_arrangement,
    predict_exponents,
    predict_exponents_general,
    psi_exponents,
    reflection_arrangement,
)
from .derivations import (
    Derivation,
    Verdict,
    euler_derivation,
    is_member,
    saito_det,
    saito_matrix,
    ziegler_check,
)
from .oracle import (
    DegreeProfile,
    ExtractionFailure,
    OracleInconsistency,
    TripleResult,
    euler_multiplicity,
    extract_basis,
    generator_degrees,
    module_dimension,
    oracle_report,
    triple,
)
from .rank2 import (
    binomial_difference_det,
    build_basis_imprimitive,
    even_rank2_basis,
    odd_rank2_basis,
    rank2_general,
)
from .flat import (
    FlatStructure,
    FlatValidationError,
    NonPolynomialTransfer,
    build_basis_wellgen,
    jacobians,
    lifting_check,
    load_flat_structure,
    nabla_d_inverse,
    nabla_d_inverse_m_euler,
    nabla_theta,
    shipped_config_path,
    to_x_coordinates,
)

__version__ = "0.1.0"
