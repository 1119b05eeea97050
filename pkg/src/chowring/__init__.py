"""Finite Chow-ring models and exact Hard-Lefschetz-type injectivity checks."""

__version__ = "0.1.0"

from .errors import InputError
from .linalg import Matrix, determinant, rank, rank_and_kernel, rref, solve
from .ring import (
    GeneratorSpec,
    LinearMapMatrix,
    RingElement,
    RingHom,
    RingPresentation,
    TruncationBlock,
    build_presentation,
    graded_basis,
    isomorphic_by_renaming,
    mult_operator_matrix,
    multiply,
    normal_form,
)
from .model import Model, as_model
from .abelian import (
    beauville_decomposition,
    beauville_project,
    build_model,
    cohomology_model,
    cycle_class,
    divisor_model,
    fourier,
    kstar_apply,
    pontryagin,
    pontryagin_power,
    theta_model,
    w_and_v_classes,
)
from .constructions import (
    BlowupData,
    BlowupRing,
    blowup_ring,
    blowup_transfer_check,
    bundle_model,
    curve_model,
    linear_blowup,
    product_model,
    product_with_projective_space,
    projective_bundle,
    projective_model,
    projective_space,
)
from .lefschetz import (
    IsoReport,
    LefschetzReport,
    check_2imply1,
    check_conj1,
    check_conj2,
    check_hl_cohomology,
    check_hl_target,
    check_kunnemann,
    check_triangular_descent,
)
from .sympow import (
    SymPowRing,
    SystemReport,
    extract_system,
    i_pushforward,
    minimal_equation,
    pbig_det,
    pbig_matrix,
    strong_stability_check,
    sympow_ring,
)
from .modelspec import load_model
