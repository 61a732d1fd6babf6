"""Spectral comparisons between a Hermitian-block matrix and its partial trace."""
import logging
from typing import List, Optional

from src.certify.base_checks import (
    InequalityCheck,
    averaged_item,
    eigen_step_items,
    hypothesis_status,
    ky_fan_items,
    report,
    schatten_items,
    standard_splits,
)
from src.core.blocks import BlockMatrix, partial_trace, smallest_dyadic
from src.core.exceptions import ParameterError
from src.core.linalg import cert_tolerance, schatten_norm, spectrum
from src.core.models import CertificateReport, VerifyOptions, make_item

logger = logging.getLogger(__name__)

_BLOCK_REASON = "off-diagonal blocks A_st are not Hermitian"


def check_hiroshima(h: BlockMatrix, force: bool = False, tol: Optional[float] = None) -> CertificateReport:
    """
    Weak majorization lambda(H) <_w lambda(Delta) as Ky Fan prefix sums.

    Schatten p in {1, 2, 3, inf} comparisons are appended as spot checks.
    """
    violated = hypothesis_status(h.hermitian_blocks, force, _BLOCK_REASON)
    delta = partial_trace(h)
    items = ky_fan_items(h.spectrum(), spectrum(delta), h.dim, "H", "Delta")
    items += schatten_items(h.carrier, delta, "H", "Delta")
    return report(
        "hiroshima",
        items,
        cert_tolerance(tol, h.carrier),
        context={"beta": h.beta, "n": h.n},
        hypothesis_violated=violated,
    )


def check_eigen_step(h: BlockMatrix, force: bool = False, tol: Optional[float] = None) -> CertificateReport:
    """lambda_{1+beta k}(H) <= lambda_{1+k}(Delta), beta the smallest power of two >= block count."""
    violated = hypothesis_status(h.hermitian_blocks, force, _BLOCK_REASON)
    beta = smallest_dyadic(h.beta)
    items = eigen_step_items(h.spectrum(), spectrum(partial_trace(h)), beta, h.n, "H", "Delta")
    return report(
        "eigen-step",
        items,
        cert_tolerance(tol, h.carrier),
        context={"alpha": h.beta, "beta": beta, "n": h.n},
        hypothesis_violated=violated,
    )


def check_eigen_averaged(
    h: BlockMatrix,
    k: int,
    splits: List[int],
    force: bool = False,
    tol: Optional[float] = None,
) -> CertificateReport:
    """lambda_{1+beta k}(H) <= (1/beta) sum_i lambda_{1+k_i}(Delta) with sum k_i = beta k."""
    violated = hypothesis_status(h.hermitian_blocks, force, _BLOCK_REASON)
    beta = smallest_dyadic(h.beta)
    item = averaged_item(h.spectrum(), spectrum(partial_trace(h)), beta, k, list(splits), "H", "Delta")
    return report(
        "eigen-avg",
        [item],
        cert_tolerance(tol, h.carrier),
        context={"alpha": h.beta, "beta": beta, "k": k, "splits": list(splits)},
        hypothesis_violated=violated,
    )


def check_eigen_averaged_family(h: BlockMatrix, force: bool = False, tol: Optional[float] = None) -> CertificateReport:
    """Averaged bound for every k = 0..n-1 and every standard split."""
    violated = hypothesis_status(h.hermitian_blocks, force, _BLOCK_REASON)
    beta = smallest_dyadic(h.beta)
    lhs, rhs = h.spectrum(), spectrum(partial_trace(h))
    items = [
        averaged_item(lhs, rhs, beta, k, splits, "H", "Delta")
        for k in range(h.n)
        for splits in standard_splits(beta, k)
    ]
    return report(
        "eigen-avg",
        items,
        cert_tolerance(tol, h.carrier),
        context={"alpha": h.beta, "beta": beta, "n": h.n},
        hypothesis_violated=violated,
    )


def check_block_norm_bound(h: BlockMatrix, p: float, tol: Optional[float] = None) -> CertificateReport:
    """||H||_p <= ||A||_p + ||B||_p for a 2 x 2 partition; no Hermitian-block hypothesis."""
    if h.beta != 2:
        raise ParameterError(f"block norm bound needs beta = 2, got {h.beta}")
    a, b = h.diagonal_blocks()
    tag = "inf" if p == float("inf") else f"{p:g}"
    item = make_item(
        f"schatten p={tag}: ||H|| <= ||A|| + ||B||",
        schatten_norm(h.carrier, p),
        schatten_norm(a, p) + schatten_norm(b, p),
        requires_hypothesis=False,
    )
    return report("norm-bound", [item], cert_tolerance(tol, h.carrier), context={"n": h.n, "p": repr(float(p))})


class HiroshimaCheck(InequalityCheck):
    name = "hiroshima"

    def certify(self, document: BlockMatrix, options: VerifyOptions) -> List[CertificateReport]:
        return [check_hiroshima(document, options.force, options.tol)]


class EigenStepCheck(InequalityCheck):
    name = "eigen-step"

    def certify(self, document: BlockMatrix, options: VerifyOptions) -> List[CertificateReport]:
        return [check_eigen_step(document, options.force, options.tol)]


class EigenAveragedCheck(InequalityCheck):
    """Explicit --k/--splits run a single comparison; otherwise the standard family."""
    name = "eigen-avg"

    def certify(self, document: BlockMatrix, options: VerifyOptions) -> List[CertificateReport]:
        if options.splits is not None:
            if options.k is None:
                raise ParameterError("--splits requires --k")
            return [check_eigen_averaged(document, options.k, options.splits, options.force, options.tol)]
        return [check_eigen_averaged_family(document, options.force, options.tol)]


class NormBoundCheck(InequalityCheck):
    name = "norm-bound"

    def certify(self, document: BlockMatrix, options: VerifyOptions) -> List[CertificateReport]:
        return [check_block_norm_bound(document, options.p, options.tol)]
