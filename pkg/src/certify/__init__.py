"""Inequality checks producing certificate reports."""
from .factory import CheckFactory
from .majorization import (
    check_block_norm_bound,
    check_eigen_averaged,
    check_eigen_averaged_family,
    check_eigen_step,
    check_hiroshima,
)
from .rearrangement import CommutingFamily, check_rearrangement
from .separability import SeparableState, check_nielsen_kempe
from .trace import check_determinant, check_scalar_sandwich, check_trace_concave

__all__ = [
    "CheckFactory",
    "check_hiroshima", "check_eigen_step", "check_eigen_averaged", "check_eigen_averaged_family",
    "check_block_norm_bound", "check_rearrangement", "check_trace_concave", "check_scalar_sandwich",
    "check_determinant", "check_nielsen_kempe",
    "CommutingFamily", "SeparableState",
]
