"""Multi-soliton machinery for the Benjamin-Ono equation on the line."""

from .action_angle import (
    ActionAngles,
    aa_from_spectral,
    evolve_aa,
    explicit_solution,
    forward_map,
    inverse_map,
    m_from_aa,
    pi_u_resolvent,
)
from .invariants import (
    e1_quadrature,
    e_n_from_spectrum,
    h_lambda,
    h_lambda_resolvent,
    omega_matrix,
    poisson_bracket_table,
    symplectomorphism_check,
)
from .pde import PdeConfig, compare, run, step, write_snapshots
from .profiles import (
    GridField,
    MonicPolynomial,
    SolitonParameters,
    char_poly,
    one_minus_theta,
    pi_u,
    poly_roots,
    profile,
    torus_potential,
    u_rational,
    viete_coeffs,
)
from .rational import (
    PoleResidueForm,
    derivative,
    evaluate,
    inner_product,
    multiply,
    multiply_by_x,
    pf_decompose,
    szego_project,
)
from .spectral import (
    SpectralData,
    g_apply,
    hpp_basis,
    lax_apply,
    spectral_decompose,
    verify_m_matrix,
)

__version__ = "0.1.0"
