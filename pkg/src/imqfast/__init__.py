"""Fast matrix-vector products and matrix-free solves for inverse-multiquadric RBF interpolation."""
from .expansion import (
    FactorPair,
    factor_pair,
    green_exact,
    green_truncated,
    phi_imq,
    translated_kernel_approx,
    truncation_error_bound,
)
from .fastmv import (
    FastOperator,
    apply_far,
    apply_near,
    auto_level,
    build_operator,
    compute_moments,
    cost_upper_bound,
    fast_matvec,
)
from .geometry import SphericalCoord, lift_center, lift_pair, to_cartesian, to_spherical
from .partition import (
    BlockRef,
    BlockTree,
    Square,
    bounding_square,
    build_tree,
    coverage_counts,
    interaction_list,
    near_list,
    verify_separation,
)
from .reference import (
    assemble_dense,
    dense_matvec,
    dense_solve,
    halton2d,
    random_vector,
    read_points,
    rel_err_inf,
    write_points,
)
from .solver import Interpolant, SolveReport, evaluate_interpolant, iterative_solve

__version__ = "0.1.0"
