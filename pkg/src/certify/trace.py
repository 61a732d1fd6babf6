"""Trace inequalities for concave functions and log-determinants."""
import logging
from typing import List, Optional

import numpy as np

from src.certify.base_checks import InequalityCheck, hypothesis_status, report
from src.core.blocks import BlockMatrix, partial_trace
from src.core.exceptions import ParameterError, ShapeError
from src.core.linalg import cert_tolerance, frobenius, hermitian, psd_threshold, require_psd, trace_function
from src.core.models import CertificateItem, CertificateReport, ConcaveFunctionSpec, VerifyOptions, make_item

logger = logging.getLogger(__name__)


def check_trace_concave(
    h: BlockMatrix,
    f: ConcaveFunctionSpec,
    force: bool = False,
    tol: Optional[float] = None,
) -> CertificateReport:
    """
    Tr f(Delta) <= Tr f(H) <= sum_s Tr f(A_ss).

    The upper comparison holds for every PSD partition and is marked as not
    needing Hermitian blocks. For beta = 2 the midpoint and subadditivity
    comparisons of A and B are appended.
    """
    violated = hypothesis_status(h.hermitian_blocks, force, "off-diagonal blocks A_st are not Hermitian")
    tr_h = trace_function(h.carrier, f)
    tr_delta = trace_function(partial_trace(h), f)
    tr_blocks = sum(trace_function(a, f) for a in h.diagonal_blocks())
    items = [
        make_item(f"lower: Tr {f.label}(Delta) <= Tr {f.label}(H)", tr_delta, tr_h),
        make_item(f"upper: Tr {f.label}(H) <= sum Tr {f.label}(A_ss)", tr_h, tr_blocks, requires_hypothesis=False),
    ]
    if h.beta == 2:
        items += pair_items(*h.diagonal_blocks(), f)
    return report(
        "trace-concave",
        items,
        cert_tolerance(tol, h.carrier),
        context={"beta": h.beta, "n": h.n, "f": f.label},
        hypothesis_violated=violated,
    )


def pair_items(a: np.ndarray, b: np.ndarray, f: ConcaveFunctionSpec) -> List[CertificateItem]:
    """Midpoint concavity and subadditivity of Tr f on a PSD pair."""
    tr_a, tr_b = trace_function(a, f), trace_function(b, f)
    return [
        make_item(
            f"midpoint: (Tr {f.label}(A) + Tr {f.label}(B))/2 <= Tr {f.label}((A+B)/2)",
            (tr_a + tr_b) / 2.0,
            trace_function((a + b) / 2.0, f),
            requires_hypothesis=False,
        ),
        make_item(
            f"subadditive: Tr {f.label}(A+B) <= Tr {f.label}(A) + Tr {f.label}(B)",
            trace_function(a + b, f),
            tr_a + tr_b,
            requires_hypothesis=False,
        ),
    ]


def check_scalar_sandwich(a, f: ConcaveFunctionSpec, tol: Optional[float] = None) -> CertificateReport:
    """f(a_11 + ... + a_nn) <= Tr f(A) <= sum_i f(a_ii) for any PSD A."""
    a = hermitian(a)
    require_psd(a)
    diagonal = np.clip(np.real(np.diag(a)), 0.0, None)
    total = float(f(np.array([diagonal.sum()]))[0])
    tr_a = trace_function(a, f)
    items = [
        make_item(f"lower: {f.label}(Tr A) <= Tr {f.label}(A)", total, tr_a, requires_hypothesis=False),
        make_item(f"upper: Tr {f.label}(A) <= sum {f.label}(a_ii)", tr_a, float(np.sum(f(diagonal))), requires_hypothesis=False),
    ]
    return report("scalar-sandwich", items, cert_tolerance(tol, a), context={"n": a.shape[0], "f": f.label})


def log_det_identity_plus(a: np.ndarray) -> float:
    """log det(I + A) as sum log1p(lambda_i)."""
    spec, _ = require_psd(a)
    return float(np.sum(np.log1p(spec.values)))


def check_determinant(a, b, x, force: bool = False, tol: Optional[float] = None) -> CertificateReport:
    """
    det(I+A+B) <= det(I+H) <= det(I+A) det(I+B) on the log scale, H = [[A, X], [X*, B]].

    The upper comparison holds for every PSD H; the lower one needs X Hermitian.
    """
    a, b = hermitian(a), hermitian(b)
    x = np.asarray(x, dtype=complex)
    if a.shape != b.shape or x.shape != a.shape:
        raise ShapeError(f"blocks must share one square shape, got {a.shape}, {b.shape}, {x.shape}")
    h = hermitian(np.block([[a, x], [x.conj().T, b]]))
    require_psd(h)
    violated = hypothesis_status(
        frobenius(x - x.conj().T) <= psd_threshold(h),
        force,
        "off-diagonal block X is not Hermitian",
    )
    log_h = log_det_identity_plus(h)
    items = [
        make_item("lower: log det(I+A+B) <= log det(I+H)", log_det_identity_plus(a + b), log_h),
        make_item(
            "upper: log det(I+H) <= log det(I+A) + log det(I+B)",
            log_h,
            log_det_identity_plus(a) + log_det_identity_plus(b),
            requires_hypothesis=False,
        ),
    ]
    return report(
        "determinant",
        items,
        cert_tolerance(tol, h),
        context={"n": a.shape[0]},
        hypothesis_violated=violated,
    )


class TraceConcaveCheck(InequalityCheck):
    name = "trace-concave"

    def certify(self, document: BlockMatrix, options: VerifyOptions) -> List[CertificateReport]:
        if options.function is None:
            raise ParameterError("trace-concave needs a catalog function (--f)")
        return [check_trace_concave(document, options.function, options.force, options.tol)]


class ScalarSandwichCheck(InequalityCheck):
    name = "scalar-sandwich"

    def certify(self, document: BlockMatrix, options: VerifyOptions) -> List[CertificateReport]:
        if options.function is None:
            raise ParameterError("scalar-sandwich needs a catalog function (--f)")
        return [check_scalar_sandwich(document.carrier, options.function, options.tol)]


class DeterminantCheck(InequalityCheck):
    name = "determinant"

    def certify(self, document: BlockMatrix, options: VerifyOptions) -> List[CertificateReport]:
        if document.beta != 2:
            raise ParameterError(f"determinant check needs beta = 2, got {document.beta}")
        a, b = document.diagonal_blocks()
        x = document.block(0, 1)
        return [check_determinant(a, b, x, options.force, options.tol)]
