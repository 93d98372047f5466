"""Nested algebraic Bethe ansatz for gl(3)-invariant chains, exact and numeric."""

from .bethe import (
    BetheConfig,
    bethe_vector,
    bv_nested,
    bv_partition,
    bv_partition_alt,
    bv_recursion_u,
    bv_recursion_v,
    bv_trace,
    gl2_bethe_vector,
)
from .dwpf import DwpfInput, dwpf_det, dwpf_recursive
from .errors import (
    CommutationError,
    ConfigError,
    DegenerateRoot,
    NabaError,
    NoConvergence,
    ParamError,
    PoleError,
    ShapeError,
    SingularTransfer,
    SingularTwist,
)
from .monodromy import ChainModel, ChainSpec, build_monodromy, vacuum, vacuum_eigenvalues
from .rmatrix import RMatrixKind, q_deformed_R, rational_R
from .scalars import EXACT, FLOAT, FieldMode, f_fn, g_fn
from .spectrum import (
    BetheRoots,
    SolveOptions,
    action_residual,
    bethe_residuals,
    exact_diag,
    solve_bethe,
    tau_eval,
    transfer_matrix,
    verify_onshell,
)

__all__ = [
    "BetheConfig",
    "BetheRoots",
    "ChainModel",
    "ChainSpec",
    "CommutationError",
    "ConfigError",
    "DegenerateRoot",
    "DwpfInput",
    "EXACT",
    "FLOAT",
    "FieldMode",
    "NabaError",
    "NoConvergence",
    "ParamError",
    "PoleError",
    "RMatrixKind",
    "ShapeError",
    "SingularTransfer",
    "SingularTwist",
    "SolveOptions",
    "action_residual",
    "bethe_residuals",
    "bethe_vector",
    "build_monodromy",
    "bv_nested",
    "bv_partition",
    "bv_partition_alt",
    "bv_recursion_u",
    "bv_recursion_v",
    "bv_trace",
    "dwpf_det",
    "dwpf_recursive",
    "exact_diag",
    "f_fn",
    "g_fn",
    "gl2_bethe_vector",
    "q_deformed_R",
    "rational_R",
    "solve_bethe",
    "tau_eval",
    "transfer_matrix",
    "vacuum",
    "vacuum_eigenvalues",
    "verify_onshell",
]

__version__ = "0.1.0"
