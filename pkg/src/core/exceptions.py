"""Exception hierarchy for hermblock."""
from typing import Any, Dict, Optional


class HermblockError(Exception):
    """Base class for all library errors."""

    exit_code: int = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class ShapeError(HermblockError):
    """Dimension mismatch or invalid partition."""


class ParameterError(HermblockError):
    """Parameter outside its admissible range."""


class NonHermitianBlocksError(ParameterError):
    """Input to a decomposition that needs Hermitian blocks has a non-Hermitian block."""


class NotPSDError(HermblockError):
    """Matrix is not positive semidefinite within tolerance."""

    def __init__(self, lambda_min: float, tolerance: float):
        super().__init__(
            f"not PSD: lambda_min = {lambda_min:.3e} < -{tolerance:.3e}",
            {"lambda_min": lambda_min, "tolerance": tolerance},
        )
        self.lambda_min = lambda_min


class MatrixFileError(HermblockError):
    """Matrix document cannot be read or fails validation."""


class ConvergenceError(HermblockError):
    """Iterative method hit its iteration cap."""


class DecompositionError(HermblockError):
    """Internal consistency check of a construction failed."""


class ResourceLimitError(HermblockError):
    """Requested dense size or block count exceeds the configured caps."""

    exit_code = 3


class HypothesisViolationError(HermblockError):
    """A checker precondition does not hold and the run was not forced."""

    exit_code = 4
