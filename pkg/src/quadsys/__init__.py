"""Effective bounds and constructive zeros for systems of quadratic forms over Q_p."""

from .bounds import (
    BoundQuery,
    BoundReport,
    dimshave_chain,
    inductwo_bound,
    laststop_bound,
    leep_bounds,
    local_field_bound,
    lower_bound,
    qp_bound,
    tau,
    theorem_bound,
)
from .linalg import Matrix, extend_to_basis, kernel_basis, row_reduce
from .padic import FieldContext, Padic, from_rational, is_square, legendre, sqrt
from .qform import (
    FormSystem,
    QuadraticForm,
    Subspace,
    change_variables,
    decompose_at_last,
    diagonalize,
    evaluate,
    restrict,
)
from .solver import (
    constructive_threshold,
    find_zero_subspace,
    solve_single,
    solve_system,
    subspace_threshold,
    verify_zero,
)
from .witness import anisotropic_quaternary, block_witness, direct_sum

__version__ = "0.1.0"
