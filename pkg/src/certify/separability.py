"""Norm criterion for separable states with a real first factor."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

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
from src.core.blocks import BlockMatrix, partial_trace, partition, smallest_dyadic, tensor_product
from src.core.exceptions import ParameterError, ShapeError
from src.core.linalg import cert_tolerance, hermitian, is_psd, spectrum
from src.core.models import CertificateReport, VerifyOptions
from src.utils.config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeparableState:
    """Z = sum_j A_j (x) B_j with PSD factors; A_j of side n_H, B_j of side n_F."""
    terms: List[Tuple[np.ndarray, np.ndarray]]
    normalized: bool = False

    def __post_init__(self):
        if not self.terms:
            raise ParameterError("a separable state needs at least one term")
        terms = [(np.asarray(a, dtype=complex), hermitian(b)) for a, b in self.terms]
        if len({a.shape for a, _ in terms}) != 1 or len({b.shape for _, b in terms}) != 1:
            raise ShapeError("all terms must share factor dimensions")
        object.__setattr__(self, "terms", terms)

    @property
    def n_h(self) -> int:
        return self.terms[0][0].shape[0]

    @property
    def n_f(self) -> int:
        return self.terms[0][1].shape[0]

    def assemble(self) -> np.ndarray:
        z = sum(tensor_product(a, b) for a, b in self.terms)
        return hermitian(z)

    def as_block_matrix(self, check_psd: bool = True) -> BlockMatrix:
        """Z partitioned over the first factor: n_H x n_H blocks of side n_F."""
        return partition(self.assemble(), self.n_h, self.n_f, check_psd=check_psd)

    def trace(self) -> float:
        return float(sum(np.trace(a).real * np.trace(b).real for a, b in self.terms))

    def normalize(self) -> "SeparableState":
        total = self.trace()
        if total <= 0.0:
            raise ParameterError("cannot normalize a state with zero trace")
        return SeparableState([(a / total, b) for a, b in self.terms], normalized=True)

    def real_factor_defect(self) -> float:
        """max_j max(|Im A_j|, |A_j - A_j^T|)."""
        worst = 0.0
        for a, _ in self.terms:
            worst = max(worst, float(np.max(np.abs(a.imag))), float(np.max(np.abs(a - a.T))))
        return worst

    def terms_psd(self) -> bool:
        return all(is_psd(hermitian(a)) and is_psd(b) for a, b in self.terms)


def check_nielsen_kempe(state: SeparableState, force: bool = False, tol: Optional[float] = None) -> CertificateReport:
    """
    ||Z|| <= ||Tr_H Z|| for every symmetric norm, with eigen-step and averaged corollaries.

    Z is viewed as an n_H x n_H block matrix over the first factor and Tr_H Z is the sum
    of its diagonal blocks. Requires each A_j real symmetric.
    """
    scale = max(1.0, max(float(np.max(np.abs(a))) for a, _ in state.terms))
    real = state.real_factor_defect() <= Config.TOL_EIG * scale
    violated = hypothesis_status(real and state.terms_psd(), force, "first factors A_j must be real symmetric PSD")

    h = state.as_block_matrix(check_psd=not violated)
    z = h.carrier
    reduced = partial_trace(h)
    lhs, rhs = spectrum(z), spectrum(reduced)
    beta = smallest_dyadic(state.n_h)
    items = ky_fan_items(lhs, rhs, state.n_h * state.n_f, "Z", "Tr_H Z")
    items += schatten_items(z, reduced, "Z", "Tr_H Z")
    items += eigen_step_items(lhs, rhs, beta, state.n_f, "Z", "Tr_H Z")
    for k in range(state.n_f):
        for splits in standard_splits(beta, k):
            items.append(averaged_item(lhs, rhs, beta, k, splits, "Z", "Tr_H Z"))
    return report(
        "nielsen-kempe",
        items,
        cert_tolerance(tol, z),
        context={
            "n_H": state.n_h,
            "n_F": state.n_f,
            "terms": len(state.terms),
            "beta": beta,
            "hermitian_blocks": h.hermitian_blocks,
        },
        hypothesis_violated=violated,
    )


class NielsenKempeCheck(InequalityCheck):
    name = "nielsen-kempe"
    input_kind = "separable"

    def certify(self, document: SeparableState, options: VerifyOptions) -> List[CertificateReport]:
        return [check_nielsen_kempe(document, options.force, options.tol)]
