"""galekit: exact integer linear algebra for lattices, Gale duality,
simplicial fans and toric invariants."""

from .matrix import (
    DomainError,
    GaleKitError,
    Mat,
    ParseError,
    check_index_set,
    det_exact,
    format_matrix,
    parse_matrix,
    rank_exact,
    submatrix_cols,
)
from .normal_forms import (
    HnfResult,
    SnfResult,
    hnf,
    is_row_echelon,
    left_kernel_rows,
    positive_row_echelon,
    snf,
)
from .lattices import (
    Lattice,
    QuotientStructure,
    dual_lattice,
    gcd_max_minors,
    has_cotorsion,
    lattice_intersection,
    quotient_structure,
    transverse,
)
from .gale import (
    GaleDualPair,
    det_duality_check,
    double_gale,
    gale_dual,
    quotient_iso_check,
    solve_left_factor,
)
from .fw import (
    FMatrixReport,
    WMatrixReport,
    classify_f,
    classify_w,
    f_reduce,
    i_reduce,
    is_f_complete,
    is_w_positive,
    is_w_reduced,
    positivize,
    w_reduce,
)
from .fans import (
    Cone,
    Fan,
    cone_contains,
    enumerate_SF,
    fan_from_cones,
    is_divisorially_detected,
    is_fan,
    is_support_complete,
)
from .toric import (
    ToricReport,
    cartier_basis,
    cartier_index,
    cl_generators,
    cl_generators_full,
    class_group,
    delta_sigma,
    full_report,
    is_pws,
    picard_basis,
    torsion_via_Tn,
    weil_class,
)

__version__ = "0.1.0"
