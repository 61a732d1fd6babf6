"""Base interfaces and shared helpers for inequality checks."""
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from src.core.exceptions import HypothesisViolationError, ParameterError
from src.core.linalg import Spectrum, schatten_norm
from src.core.models import CertificateItem, CertificateReport, VerifyOptions, make_item

logger = logging.getLogger(__name__)

SPOT_CHECK_EXPONENTS = (1.0, 2.0, 3.0, float("inf"))


class InequalityCheck(ABC):
    """Interface for a ``verify`` check bound to one input document kind."""

    name: str = ""
    input_kind: str = "block"

    @abstractmethod
    def certify(self, document: Any, options: VerifyOptions) -> List[CertificateReport]:
        """Run the check on a loaded input document."""
        pass


def hypothesis_status(holds: bool, force: bool, reason: str) -> bool:
    """
    Return True when the run proceeds with a violated hypothesis.

    Raises:
        HypothesisViolationError: hypothesis fails and the run is not forced
    """
    if holds:
        return False
    if not force:
        raise HypothesisViolationError(f"hypothesis violated: {reason} (rerun with --force to evaluate anyway)")
    logger.warning("hypothesis violated, running anyway: %s", reason)
    return True


def ky_fan_items(lhs: Spectrum, rhs: Spectrum, length: int, left: str, right: str) -> List[CertificateItem]:
    """One item per prefix j: sum_{i<=j} lambda_i(left) <= sum_{i<=j} lambda_i(right)."""
    lhs_sums = lhs.prefix_sums(length)
    rhs_sums = rhs.prefix_sums(length)
    return [
        make_item(f"ky_fan k={j + 1}: {left} <= {right}", lhs_sums[j], rhs_sums[j])
        for j in range(length)
    ]


def eigen_step_items(lhs: Spectrum, rhs: Spectrum, beta: int, count: int, left: str, right: str) -> List[CertificateItem]:
    """lambda_{1+beta k}(left) <= lambda_{1+k}(right) for k = 0..count-1."""
    return [
        make_item(f"eigen_step k={k}: lambda_{1 + beta * k}({left}) <= lambda_{1 + k}({right})",
                  lhs.at(1 + beta * k), rhs.at(1 + k))
        for k in range(count)
    ]


def averaged_item(lhs: Spectrum, rhs: Spectrum, beta: int, k: int, splits: List[int], left: str, right: str) -> CertificateItem:
    """lambda_{1+beta k}(left) <= (1/beta) sum_i lambda_{1+k_i}(right)."""
    validate_splits(beta, k, splits)
    value = sum(rhs.at(1 + ki) for ki in splits) / beta
    label = f"eigen_avg k={k} splits={tuple(splits)}: lambda_{1 + beta * k}({left}) <= mean lambda_(1+k_i)({right})"
    return make_item(label, lhs.at(1 + beta * k), value)


def validate_splits(beta: int, k: int, splits: List[int]) -> None:
    if len(splits) != beta:
        raise ParameterError(f"expected {beta} split entries, got {len(splits)}")
    if any(ki < 0 for ki in splits):
        raise ParameterError("split entries must be nonnegative")
    if sum(splits) != beta * k:
        raise ParameterError(f"split entries must sum to beta*k = {beta * k}, got {sum(splits)}")


def standard_splits(beta: int, k: int) -> List[List[int]]:
    """Uniform, concentrated and alternating splits with sum beta*k, without duplicates."""
    uniform = [k] * beta
    concentrated = [beta * k] + [0] * (beta - 1)
    if beta % 2 == 0:
        alternating = [2 * k if i % 2 == 0 else 0 for i in range(beta)]
    else:
        alternating = uniform
    out: List[List[int]] = []
    for splits in (uniform, concentrated, alternating):
        if splits not in out:
            out.append(splits)
    return out


def schatten_items(left_matrix, right_matrix, left: str, right: str) -> List[CertificateItem]:
    """||left||_p <= ||right||_p for the spot-check exponents."""
    items = []
    for p in SPOT_CHECK_EXPONENTS:
        tag = "inf" if p == float("inf") else f"{p:g}"
        items.append(
            make_item(f"schatten p={tag}: {left} <= {right}", schatten_norm(left_matrix, p), schatten_norm(right_matrix, p))
        )
    return items


def report(
    name: str,
    items: List[CertificateItem],
    tolerance: float,
    context: Optional[Dict[str, Any]] = None,
    hypothesis_violated: bool = False,
) -> CertificateReport:
    result = CertificateReport.build(name, items, tolerance, context=context, hypothesis_violated=hypothesis_violated)
    if not result.passed:
        logger.info("%s: %d item(s) below -%.3e", name, len(result.failing_items()), tolerance)
    return result
