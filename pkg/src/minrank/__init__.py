"""Minimum-rank matrix completion over prime fields and linear index code design."""

from .gf import (
    GF2,
    AffineSolutionSet,
    FieldSpec,
    GFMatrix,
    field_ops,
    mat_rank,
    nullspace_basis,
    rref,
    solve_linear,
)
from .indexcoding import (
    IndexCode,
    IndexCodingProblem,
    build_matrix,
    extract_code,
    parse_problem,
    verify_code,
)
from .masked import ERASED, MaskedMatrix, SubmatrixIndex, blow_up, erasure_profile, parse_masked, submatrix
from .oracle import oracle_min_rank
from .projection import LinearCode, build_code, project_vector, solution_count
from .submatrix import SearchConfig, find_max_complete_submatrix
from .tree import Branch, TreeConfig, branch_metric, complete_min_rank, expand_branch, prune

__version__ = "0.1.0"

__all__ = [
    "GF2",
    "AffineSolutionSet",
    "FieldSpec",
    "GFMatrix",
    "field_ops",
    "mat_rank",
    "nullspace_basis",
    "rref",
    "solve_linear",
    "IndexCode",
    "IndexCodingProblem",
    "build_matrix",
    "extract_code",
    "parse_problem",
    "verify_code",
    "ERASED",
    "MaskedMatrix",
    "SubmatrixIndex",
    "blow_up",
    "erasure_profile",
    "parse_masked",
    "submatrix",
    "oracle_min_rank",
    "LinearCode",
    "build_code",
    "project_vector",
    "solution_count",
    "SearchConfig",
    "find_max_complete_submatrix",
    "Branch",
    "TreeConfig",
    "branch_metric",
    "complete_min_rank",
    "expand_branch",
    "prune",
]
