"""Exact enumeration, counting and spectral analysis of domino tilings of tori."""

from .errors import (
    AreaCapExceeded,
    FluxOutsideQ,
    InconsistentSigns,
    InvalidFlipSite,
    NotValidLattice,
    PatternViolation,
    PrecisionInsufficient,
    ResidualTooLarge,
    TorusDimersError,
)
from .lattice import (
    Flux,
    FundamentalDomain,
    Lattice,
    dual_basis,
    flux_candidates,
    l_sharp_membership,
    normalize_basis,
    square_torus,
    valid_lattices,
)
from .tilings import (
    FlipGraph,
    FlipSite,
    StaircaseClasses,
    Tiling,
    apply_cycle_flip,
    apply_flip,
    boundary_structure,
    boundary_tiling_total,
    brick_wall,
    classify_torus_tiling,
    count_tilings,
    cycle_decompose,
    enumerate_rectangle_tilings,
    enumerate_tilings,
    find_flips,
    flip_graph,
    flux_by_crossings,
    quasicycle_sign,
    rectangle_count_transfer,
    tiling_svg,
    tilings_by_flux,
)
from .height import (
    HeightField,
    flux_of_tiling,
    height_from_tiling,
    hmax_plane,
    hmin_plane,
    phi_prescription,
    pointwise_min,
    tiling_from_height,
    toroidal_hmax,
)
from .kasteleyn import (
    KasteleynMatrix,
    LaurentPoly2,
    build_kasteleyn,
    count_by_flux_via_det,
    det_kd_numeric,
    det_laurent,
    det_laurent_mp,
    exponents_to_flux,
    flux_to_exponents,
    kasteleyn_sign,
    sign_pattern_check,
    total_from_corners,
)
from .spectral import (
    SpectralPoint,
    det_KE,
    det_kd_spectral,
    eigenvalues_M,
    lambda_K,
    mu1,
    p_LE,
    P_LE,
    product_formula_check,
    rectangle_count,
    rho,
    rho1,
    rho2,
    sweep_csv,
)

__version__ = "0.1.0"
