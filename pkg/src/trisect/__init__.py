"""Exact homology and intersection-form calculator for trisection diagrams
of closed oriented 4-manifolds."""

from .diagram import (
    CurveSystem,
    InvalidDiagramError,
    MatrixDiagram,
    SymplecticSurface,
    TrisectionDiagram,
    as_matrix_diagram,
    heegaard_homology,
    intersection_matrix,
    linking_number,
    standard_pairing,
    validate,
)
from .form import (
    BilinearForm,
    FormInvariants,
    H2Basis,
    form_by_definition,
    form_fast,
    form_general,
    form_invariants,
    h2_basis,
    phi,
)
from .homology import (
    ChainComplex,
    HomologyProfile,
    build_complex,
    h2_kernel_formula,
    h2_symmetric,
    h3_direct,
    homology_of_complex,
    homology_profile,
    reduced_complex,
)
from .linalg import (
    AbelianGroup,
    Subgroup,
    hermite_normal_form,
    kernel_basis,
    membership,
    quotient_invariants,
    smith_normal_form,
    solve_integer,
    subgroup_intersection,
    subgroup_sum,
)
from .moves import (
    CongruenceReport,
    Move,
    MoveState,
    apply,
    apply_all,
    congruence_reduce,
    format_move_log,
    normalize_pair,
    parse_move_log,
    reduce_gamma_beta,
    verify_move_invariance,
)

__version__ = "0.1.0"
